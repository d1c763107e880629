"""Conjugation scores of all four (a3 sign, correction convention) pairs vs grid size.

Prints, for each n, the score of every pair and the ratio of runner-up to best.
The certification rule wants best <= 1e-2 and ratio >= 10 at every n.
"""

import argparse

from pdmsqueeze import catalog as cat
from pdmsqueeze.verify import ResolutionSetup, pair_scores


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[128, 256, 512, 768])
    ap.add_argument("--K", type=int, default=200)
    args = ap.parse_args()

    cfg = cat.RESOLUTION_CONFIG
    setup = ResolutionSetup(ns=tuple(args.ns))
    print(f"config: alpha={cfg.alpha} beta={cfg.beta} a0={cfg.a0} a1={cfg.a1}  x_star={cfg.x_star:.4f}")
    header = None
    for n in args.ns:
        sc = pair_scores(cfg, n, setup, K=args.K)
        keys = sorted(sc, key=lambda k: (k[0], k[1].value))
        if header is None:
            header = "  ".join(f"{s:+d},{c.value:>12s}" for s, c in keys)
            print(f"{'n':>5}  {header}  runner-up/best")
        ranked = sorted(sc.values())
        print(f"{n:5d}  " + "  ".join(f"{sc[k]:15.3e}" for k in keys) + f"  {ranked[1] / ranked[0]:8.2f}")


if __name__ == "__main__":
    main()
