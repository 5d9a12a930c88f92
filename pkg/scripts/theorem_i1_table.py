"""Case-1 (I1) counts for k = 2 around (1 + 2 sqrt(q-1))**(1/(1-alpha)),
the general-k value theta_c, and the tangency data for B = 15."""

import argparse
import math

from gibbstree.isingpotts_model import ModelParams
from gibbstree.tigm_solver import case1_k2_threshold, classify_case1, eta_bounds, theta_c


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=3)
    args = ap.parse_args()
    q = args.q
    for alpha in (0.0, 0.3, 0.5):
        thr = case1_k2_threshold(q, alpha)
        row = []
        for f in (0.9, 1.0, 1.1):
            c = classify_case1(ModelParams.from_thetas(q, 2, alpha, theta_P=thr * f))
            row.append(f"{c.count}/{c.validated_count}")
        print(f"alpha={alpha}: threshold {thr:.5f}, theta_c {theta_c(2, q, alpha):.5f}, "
              f"count/validated at 0.9x, 1x, 1.1x: {', '.join(row)}")
    eb = eta_bounds(15, 2)
    print(f"B=15, k=2: x = {eb.x1:.6f}, {eb.x2:.6f}  eta = {eb.eta1:.8f}, {eb.eta2:.8f}")
    print(f"6 -+ sqrt(21) = {6 - math.sqrt(21):.6f}, {6 + math.sqrt(21):.6f}")


if __name__ == "__main__":
    main()
