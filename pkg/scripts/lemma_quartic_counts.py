"""Positive-root counts of the q = 3, b = a quartic and where they change.

Runs both the eliminant form (default in the library) and the form with the
published constant term, so the two sets of critical values can be compared.
"""

import argparse
import json
import math

import numpy as np

from gibbstree.polyroot import real_roots
from gibbstree.tigm_solver import count_quartic_positive_roots, find_thresholds, quartic_q3_equal


def pmax(a, variant, hi=200.0, n=200001):
    P = quartic_q3_equal(a, variant)
    xs = np.linspace(0.0, hi, n)
    return max(P.evalf(float(x)) for x in xs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=1.1)
    ap.add_argument("--hi", type=float, default=10.0)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--out", help="optional JSON dump")
    args = ap.parse_args()

    report = {}
    for variant in ("eliminant", "display"):
        cls = lambda a: count_quartic_positive_roots(a, variant)  # noqa: E731
        thr = find_thresholds(cls, args.lo, args.hi, args.tol)
        samples = {a: cls(a) for a in (1.5, 2.1, 3.0, 4.5, 5.0, 7.0)}
        roots5 = real_roots(quartic_q3_equal(5, variant), 0, math.inf)
        report[variant] = {"thresholds": thr, "counts": samples, "roots_at_5": roots5,
                           "pmax_at_1.5": pmax(1.5, variant, hi=3.0, n=30001)}
        print(f"[{variant}]")
        print("  thresholds:", ", ".join(f"{t:.6f}" for t in thr))
        print("  counts    :", samples)
        print("  roots a=5 :", ", ".join(f"{r:.5f}" for r in roots5))
        print(f"  max P on (0,3] at a=1.5: {report[variant]['pmax_at_1.5']:.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)


if __name__ == "__main__":
    main()
