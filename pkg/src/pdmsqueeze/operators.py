"""Grid discretisations of the Hamiltonians and of the unitary T.

All Hamiltonians are real symmetric tridiagonal matrices on a Dirichlet grid.
The kinetic term uses half-node masses, which keeps the discrete operator
self-adjoint and second-order accurate.  T is realised as a dense orthogonal
matrix built from Cayley steps of the generator (p g + g p)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import MassSignError, OrderingConstraintError, ProbeEscape, StepSingular
from .fields import GridSpec, ScalarField, constant, sample


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: GridSpec
    label: str = "H"

    def __post_init__(self):
        if self.diag.shape != (self.grid.n,) or self.offdiag.shape != (self.grid.n - 1,):
            raise ValueError("diagonal lengths do not match the grid")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise ValueError(f"{self.label}: non-finite matrix entries")

    @property
    def n(self) -> int:
        return self.grid.n

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Apply to a vector or to the columns of a matrix."""
        v = np.asarray(v)
        d = self.diag if v.ndim == 1 else self.diag[:, None]
        o = self.offdiag if v.ndim == 1 else self.offdiag[:, None]
        out = d * v
        out[:-1] += o * v[1:]
        out[1:] += o * v[:-1]
        return out

    __matmul__ = matvec

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def shifted(self, c: float) -> "TridiagonalOperator":
        return TridiagonalOperator(self.diag + c, self.offdiag, self.grid, self.label)

    @property
    def scale(self) -> float:
        off = np.max(np.abs(self.offdiag)) if self.offdiag.size else 0.0
        return float(np.max(np.abs(self.diag)) + 2.0 * off)


@dataclass(frozen=True)
class DenseOperator:
    entries: np.ndarray
    grid: GridSpec
    label: str = "T"

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.entries.conj().T, self.grid, f"{self.label}^dag")

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.entries @ v

    __matmul__ = apply

    def unitarity_defect(self) -> float:
        """max |U^dag U - I|."""
        U = self.entries
        return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


@dataclass(frozen=True)
class OrderingParams:
    """Exponents of m^a p m^b p m^c; they must add up to -1."""

    a_ord: float
    b_ord: float
    c_ord: float

    def __post_init__(self):
        total = self.a_ord + self.b_ord + self.c_ord
        if not math.isclose(total, -1.0, rel_tol=0.0, abs_tol=1e-12):
            raise OrderingConstraintError(f"ordering exponents sum to {total}, not -1")


BENDANIEL_DUKE = OrderingParams(0.0, -1.0, 0.0)
SYMMETRIZED_INVERSE = OrderingParams(-1.0, 0.0, 0.0)


def _half_node_masses(m: ScalarField, grid: GridSpec, shift: int = 0) -> np.ndarray:
    xh = grid.half_nodes + shift * grid.h
    mh = np.asarray(m.eval(xh), dtype=float)
    if np.any(mh <= 0):
        i = int(np.flatnonzero(mh <= 0)[0])
        raise MassSignError(f"mass {m.name} is {mh[i]} at half-node x={xh[i]}")
    return mh


def hamiltonian_bdd(m: ScalarField, V: ScalarField, grid: GridSpec, label: str = "H_bdd", *, half_node_shift: int = 0) -> TridiagonalOperator:
    """p (1/2m) p + V with half-node masses.

    ``half_node_shift`` moves the mass sampling points by whole cells; any
    nonzero value gives a deliberately wrong stencil for negative controls.
    """
    h = grid.h
    inv = 1.0 / _half_node_masses(m, grid, half_node_shift)
    diag = (inv[:-1] + inv[1:]) / (2 * h * h) + sample(V, grid)
    off = -inv[1:-1] / (2 * h * h)
    return TridiagonalOperator(diag, off, grid, label)


def hamiltonian_vonroos(m: ScalarField, V: ScalarField, ordering: OrderingParams, grid: GridSpec, label: str = "H_vr") -> TridiagonalOperator:
    """(1/4)(m^a p m^b p m^c + m^c p m^b p m^a) + V.

    With A = -M_a D_b M_c (D_b the half-node second difference weighted by
    m^b) the kinetic part is (A + A^T)/4, which is tridiagonal and symmetric.
    """
    if not isinstance(ordering, OrderingParams):
        ordering = OrderingParams(*ordering)
    h = grid.h
    mh = _half_node_masses(m, grid)
    mn = np.asarray(sample(m, grid))
    if np.any(mn <= 0):
        raise MassSignError(f"mass {m.name} is nonpositive on the grid")
    wa, wc = mn**ordering.a_ord, mn**ordering.c_ord
    wb = mh**ordering.b_ord
    # A_ij = -wa_i * D_ij * wc_j with D the tridiagonal (weights wb) second difference
    d_diag = -(wb[:-1] + wb[1:]) / (h * h)
    d_off = wb[1:-1] / (h * h)
    A_diag = -wa * d_diag * wc
    A_up = -wa[:-1] * d_off * wc[1:]
    A_lo = -wa[1:] * d_off * wc[:-1]
    diag = 0.5 * A_diag + sample(V, grid)
    off = 0.25 * (A_up + A_lo)
    return TridiagonalOperator(diag, off, grid, label)


def hamiltonian_constant(V: ScalarField, grid: GridSpec, label: str = "H_const") -> TridiagonalOperator:
    """p^2/2 + V."""
    return hamiltonian_bdd(constant(1.0, name="1"), V, grid, label)


# unitary transformation -----------------------------------------------------------

_CENTRED = {
    2: (1.0 / 2.0,),
    4: (2.0 / 3.0, -1.0 / 12.0),
    6: (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0),
}


def generator_matrix(g: ScalarField, grid: GridSpec, stencil_order: int = 4) -> np.ndarray:
    """Real antisymmetric K with (p g + g p)/2 = -i K, p = -i D (centred D)."""
    n, h = grid.n, grid.h
    gv = sample(g, grid)
    D = np.zeros((n, n))
    for k, c in enumerate(_CENTRED[stencil_order], start=1):
        idx = np.arange(n - k)
        D[idx, idx + k] = c / h
        D[idx + k, idx] = -c / h
    K = 0.5 * (D * gv[None, :] + gv[:, None] * D)
    return 0.5 * (K - K.T)


def cayley_step(K: np.ndarray, ds: float) -> np.ndarray:
    """(I + ds K/2)^-1 (I - ds K/2), the norm-preserving step for exp(-ds K)."""
    n = K.shape[0]
    eye = np.eye(n)
    try:
        C = sla.solve(eye + 0.5 * ds * K, eye - 0.5 * ds * K)
    except (sla.LinAlgError, ValueError) as exc:
        raise StepSingular(f"Cayley step solve failed: {exc}") from exc
    if not np.all(np.isfinite(C)):
        raise StepSingular("Cayley step solve produced non-finite entries")
    return C


def discrete_T(g: ScalarField, grid: GridSpec, n_steps: int | None = None, stencil_order: int = 4) -> DenseOperator:
    """T = exp{-(i/2)(p g + g p)} as the product of ``n_steps`` Cayley steps.

    T moves a wave packet centred at x0 to x0 + f(x0), i.e. forward along
    dx/ds = g.  All steps are identical, so the product is formed by binary
    powering of a single step.
    """
    n_steps = 2 * grid.n if n_steps is None else int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    C = cayley_step(generator_matrix(g, grid, stencil_order), 1.0 / n_steps)
    T = np.linalg.matrix_power(C, n_steps)
    return DenseOperator(T, grid, f"T[{g.name}]")


# probes and conjugation -----------------------------------------------------------


def gaussian_probe(grid: GridSpec, center: float, width: float) -> np.ndarray:
    """Gaussian normalised in the h-weighted norm."""
    x = grid.nodes
    psi = np.exp(-0.5 * ((x - center) / width) ** 2)
    return psi / math.sqrt(grid.h * np.sum(psi * psi))


def _edge_mass(v: np.ndarray, nodes: int) -> float:
    peak = np.max(np.abs(v))
    return float(max(np.max(np.abs(v[:nodes])), np.max(np.abs(v[-nodes:]))) / peak)


def conjugation_residual(
    H: TridiagonalOperator,
    T: DenseOperator,
    H_target: TridiagonalOperator,
    probes,
    window: float = 0.6,
    edge_nodes: int = 10,
    edge_tol: float = 1e-6,
) -> float:
    """max over probes of ||(T^dag H T) psi - H_target psi|| / ||H_target psi||.

    Norms are taken over the central ``window`` fraction of the grid.  Probes,
    and their images under T, must be negligible (relative amplitude below
    ``edge_tol``) on the ``edge_nodes`` nodes next to each wall.
    """
    if not (H.grid == T.grid == H_target.grid):
        raise ValueError("operators live on different grids")
    grid = H.grid
    x = grid.nodes
    span = grid.x_max - grid.x_min
    lo = grid.x_min + 0.5 * (1 - window) * span
    hi = grid.x_max - 0.5 * (1 - window) * span
    win = (x >= lo) & (x <= hi)
    Td = T.adjoint()
    worst = 0.0
    for k, psi in enumerate(probes):
        psi = np.asarray(psi)
        Tpsi = T.apply(psi)
        for what, v in (("probe", psi), ("image", Tpsi)):
            e = _edge_mass(v, edge_nodes)
            if e > edge_tol:
                raise ProbeEscape(f"{what} of probe {k} reaches the wall (relative edge amplitude {e:.2e})")
        lhs = Td.apply(H.matvec(Tpsi))
        rhs = H_target.matvec(psi)
        r = np.linalg.norm((lhs - rhs)[win]) / np.linalg.norm(rhs[win])
        worst = max(worst, float(r))
    return worst
