"""Write (x, P(x)) samples of the q = 3, b = a quartic for a few values of a."""

import argparse
import os

from gibbstree.phase_cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figure_data")
    ap.add_argument("--variant", choices=("eliminant", "display"), default="eliminant")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for a, hi in ((1.5, 3.0), (3.0, 20.0), (5.0, 75.0)):
        path = os.path.join(args.outdir, f"quartic_a{a:g}_{args.variant}.csv")
        cli(["sample-poly", "--a", str(a), "--lo", "0", "--hi", str(hi), "--variant", args.variant,
             "--out", path])
        print(path)


if __name__ == "__main__":
    main()
