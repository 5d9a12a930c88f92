"""Embed each validated solution as a translation-invariant boundary law on a
finite slice and check compatibility, exactly and under a multiplicative
perturbation of the free entries."""

import argparse
import json

from gibbstree.isingpotts_model import ModelParams
from gibbstree.phase_cli import verify_solutions


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--thetaI", type=float, default=1.0)
    ap.add_argument("--thetaP", type=float, default=5.0)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--factor", type=float, default=1.01)
    args = ap.parse_args()
    for k in (1, 2):
        p = ModelParams.from_thetas(args.q, k, args.alpha, args.thetaI, args.thetaP)
        for factor in (None, args.factor):
            rep = verify_solutions(p, args.depth, factor, "auto", 1e-10)
            tag = "exact" if factor is None else f"x{factor}"
            devs = [r["deviation"] for r in rep["results"]]
            print(f"k={k} {tag:>6}: n={len(devs)} max deviation {max(devs):.3e}  "
                  + json.dumps([f"{d:.2e}" for d in devs]))


if __name__ == "__main__":
    main()
