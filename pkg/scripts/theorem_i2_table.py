"""Case-2 table (q = 3, k = 2, b = a): counts, validated counts and every
critical value, with the count just left of, at, and right of each one.

The coincidence events (a quartic root hitting u = 1 or a quadratic root) are
also located for the quartic with the published constant term; those are the
values 2.179 and 4.071 that appear in the published table.
"""

import argparse
import math
from fractions import Fraction

from gibbstree.polyroot import real_roots, resultant
from gibbstree.tigm_solver import (
    _interp,
    case2_critical_points,
    case2_factors,
    classify_case2_k2_q3,
    count_case2,
    quartic_q3_equal,
    scan_thresholds,
)


def display_events():
    at_one = _interp(lambda a: quartic_q3_equal(a, "display")(1), 8)
    res = _interp(lambda a: resultant(quartic_q3_equal(a, "display"), case2_factors(a, a, 3)[2]), 20)
    ev = {}
    for name, p in (("quartic(1) = 0", at_one), ("shared root with quadratic", res)):
        ev[name] = [r for r in real_roots(p, 1.01, 10, 1e-12)]
    return ev


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=1.1)
    ap.add_argument("--hi", type=float, default=10.0)
    args = ap.parse_args()

    print("a      count  validated  sources")
    for a in (1.5, 2.1, 3.0, 3.9, 4.5, 5.0):
        c = classify_case2_k2_q3(a)
        srcs = sorted(s.source for s in c.solutions)
        print(f"{a:<6} {c.count:<6} {c.validated_count:<10} {srcs}")

    print("\ncritical values (left | at | right):")
    found = scan_thresholds(lambda a: count_case2(a, a, 3), args.lo, args.hi,
                            candidates=case2_critical_points())
    for t in found:
        print(f"  {t.point:.6f}  {t.left} | {t.at} | {t.right}  ({t.kind})")

    print("\ncoincidence events for the published constant term:")
    for name, rs in display_events().items():
        print(f"  {name}: {', '.join(f'{r:.5f}' for r in rs)}")


if __name__ == "__main__":
    main()
