"""Grid convergence of the lowest levels for the Morse example.

PDM (BenDaniel-Duke) on the mapped box vs constant-mass Morse on the u box,
at successive refinements; reports level differences and observed order.
"""

import argparse

import numpy as np

from pdmsqueeze import catalog as cat
from pdmsqueeze import eigensolve as es
from pdmsqueeze.verify import MorseSpectralSetup


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--ns", type=int, nargs="+", default=[249, 499, 999, 1999, 3999])
    ap.add_argument("--u-lo", type=float, default=1.5)
    ap.add_argument("--wall-offset", type=float, default=0.5)
    args = ap.parse_args()

    cfg = cat.MORSE_ACCEPTANCE
    mp = cat.morse_from_config(cfg)
    print(f"D_e={mp.D_e:g} gamma={mp.gamma:.6f} beta={mp.beta:g} x_star={cfg.x_star:.6f}")
    print("textbook levels:", np.round(mp.levels(args.k), 6))
    prev = None
    for n in args.ns:
        s = MorseSpectralSetup(cfg, args.u_lo, args.wall_offset, n)
        rep = es.spectrum_compare(s.pdm(), s.morse(), args.k)
        line = f"n={n:5d}  pdm={np.round(rep.eigs_A, 6)}  morse={np.round(rep.eigs_B, 6)}  max rel diff={rep.max_rel_diff:.2e}"
        if prev is not None:
            line += f"  pdm step={np.max(np.abs(rep.eigs_A - prev)):.2e}"
        prev = rep.eigs_A
        print(line)
    e = es.lowest_eigenvalues(s.morse().shifted(0.0), args.k)
    print(f"levels below D_e on the finest box: {int(np.sum(e < mp.D_e))} of {args.k}")


if __name__ == "__main__":
    main()
