"""Lowest levels of the PDM oscillator under different kinetic orderings.

m^a p m^b p m^c (a + b + c = -1), symmetrised.  For a constant mass all
orderings coincide; for the exponential-type mass they split.  The
symmetrised-inverse ordering adds -(1/4)(1/m)'' = -(b^2/2)(w + 2 w^2), w = a b e^{bx},
which is unbounded below on the right, so its box levels are wall-dominated.
"""

import argparse

import numpy as np

from pdmsqueeze import catalog as cat
from pdmsqueeze import eigensolve as es
from pdmsqueeze import operators as op
from pdmsqueeze.fields import GridSpec, affine, constant

ORDERINGS = {
    "BenDaniel-Duke (0,-1,0)": op.BENDANIEL_DUKE,
    "symmetrised inverse (-1,0,0)": op.SYMMETRIZED_INVERSE,
    "Zhu-Kroemer (-1/2,0,-1/2)": op.OrderingParams(-0.5, 0.0, -0.5),
    "Li-Kuhn (0,-1/2,-1/2)": op.OrderingParams(0.0, -0.5, -0.5),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=1600)
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args()

    grid = GridSpec(-8.0, 8.0, args.n)
    V = 0.5 * affine(1.0) * affine(1.0)
    for label, m in (("constant m=2", constant(2.0)), (f"m(alpha={args.alpha:g},beta={args.beta:g})", cat.mass_family(args.alpha, args.beta))):
        print(label)
        ref = None
        for name, ordering in ORDERINGS.items():
            e = es.lowest_eigenvalues(op.hamiltonian_vonroos(m, V, ordering, grid), args.k)
            ref = e if ref is None else ref
            print(f"  {name:30s} {np.array2string(e, precision=6)}  max|diff to BDD|={np.max(np.abs(e - ref)):.2e}")


if __name__ == "__main__":
    main()
