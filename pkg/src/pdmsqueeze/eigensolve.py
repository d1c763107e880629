"""Lowest eigenpairs of symmetric tridiagonal operators.

Eigenvalues are located by bisection on Sturm counts (certified brackets),
eigenvectors by inverse iteration with a banded solver.  Only the k lowest
levels are ever computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import IterationStall
from .operators import TridiagonalOperator

EPS = np.finfo(float).eps
REL_EPS_FLOOR = 1e-30
MAX_INVERSE_ITERS = 4
CLUSTER_GAP = 1e-8


def _scale(Tm: TridiagonalOperator) -> float:
    return max(Tm.scale, np.finfo(float).tiny)


def _sturm_counts(d: np.ndarray, e2: np.ndarray, lam: np.ndarray, guard: float) -> np.ndarray:
    """Counts of eigenvalues < lam for a vector of shifts (loop over rows, vector over shifts)."""
    lam = np.asarray(lam, dtype=float)
    q = d[0] - lam
    q = np.where(q == 0.0, guard, q)
    count = (q < 0).astype(int)
    for i in range(1, d.size):
        q = d[i] - lam - e2[i - 1] / q
        q = np.where(q == 0.0, guard, q)
        count += q < 0
    return count


def sturm_count(Tm: TridiagonalOperator, lam: float) -> int:
    """Number of eigenvalues strictly below ``lam``.

    Zero pivots are replaced by +eps*scale, i.e. ``lam`` is nudged down by a
    rounding-level amount, so an eigenvalue exactly at ``lam`` is not counted.
    """
    d = np.asarray(Tm.diag, dtype=float)
    e2 = np.asarray(Tm.offdiag, dtype=float) ** 2
    guard = EPS * _scale(Tm)
    if lam == np.inf:
        return d.size
    if lam == -np.inf:
        return 0
    return int(_sturm_counts(d, e2, np.array([lam]), guard)[0])


def gershgorin(Tm: TridiagonalOperator) -> tuple[float, float]:
    off = np.abs(Tm.offdiag)
    r = np.zeros_like(Tm.diag)
    r[:-1] += off
    r[1:] += off
    return float(np.min(Tm.diag - r)), float(np.max(Tm.diag + r))


def bisect_lowest(Tm: TridiagonalOperator, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Brackets [lo_j, hi_j] of the k lowest eigenvalues, shrunk to rounding level.

    All k brackets are bisected together; each keeps count(lo) <= j < count(hi).
    """
    d = np.asarray(Tm.diag, dtype=float)
    e2 = np.asarray(Tm.offdiag, dtype=float) ** 2
    scale = _scale(Tm)
    guard = EPS * scale
    glo, ghi = gershgorin(Tm)
    pad = 2 * guard + 1e-300
    lo = np.full(k, glo - pad)
    hi = np.full(k, ghi + pad)
    idx = np.arange(k)
    width_tol = 4 * EPS * scale
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        live = (hi - lo > width_tol) & (mid > lo) & (mid < hi)
        if not np.any(live):
            break
        c = _sturm_counts(d, e2, mid[live], guard)
        j = idx[live]
        up = c > j  # eigenvalue j lies below mid
        hi[j[up]] = mid[live][up]
        lo[j[~up]] = mid[live][~up]
    return lo, hi


def _clusters(vals: np.ndarray, gap: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, vals.size):
        if vals[i] - vals[i - 1] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _banded(Tm: TridiagonalOperator, shift: float) -> np.ndarray:
    n = Tm.n
    ab = np.zeros((3, n))
    ab[0, 1:] = Tm.offdiag
    ab[1] = Tm.diag - shift
    ab[2, :-1] = Tm.offdiag
    return ab


def _shifted_solve(Tm: TridiagonalOperator, lam: float, offset: float, v: np.ndarray) -> np.ndarray:
    """(T - shift)^-1 v with shift just below lam; the offset grows if a pivot is exactly zero."""
    for _ in range(8):
        try:
            return solve_banded((1, 1), _banded(Tm, lam - offset), v)
        except np.linalg.LinAlgError:
            offset *= 16
    raise IterationStall(f"shifted solve singular near {lam!r}", -1)


def lowest_eigenpairs(Tm: TridiagonalOperator, k: int, seed: int = 0, tol: float = 1e-8) -> list[tuple[float, np.ndarray]]:
    """k smallest eigenvalues with eigenvectors normalised so that h*sum(psi^2) = 1.

    Vector sign is fixed by making the largest-magnitude entry positive.
    Raises IterationStall if the residual ||T psi - lam psi|| / ||psi|| exceeds
    ``tol * max(1, scale)`` after the allowed inverse iterations.
    """
    n = Tm.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    lo, hi = bisect_lowest(Tm, k)
    lam = 0.5 * (lo + hi)
    scale = _scale(Tm)
    rng = np.random.default_rng(seed)
    h = Tm.grid.h
    vecs = np.empty((n, k))
    limit = tol * max(1.0, scale)
    for group in _clusters(lam, CLUSTER_GAP * scale):
        done: list[np.ndarray] = []
        for j in group:
            v = rng.standard_normal(n)
            v /= np.linalg.norm(v)
            res = np.inf
            for _ in range(MAX_INVERSE_ITERS):
                v = _shifted_solve(Tm, lam[j], 2 * EPS * scale * (1 + len(done)), v)
                for u in done:
                    v -= (u @ v) * u
                v /= np.linalg.norm(v)
                res = np.linalg.norm(Tm.matvec(v) - lam[j] * v)
                if res <= 1e-2 * limit:
                    break
            if not np.isfinite(res) or res > limit:
                raise IterationStall(f"inverse iteration stalled at level {j}: residual {res:.3e}", j)
            done.append(v)
            vecs[:, j] = v
    out = []
    for j in range(k):
        v = vecs[:, j] / np.sqrt(h)
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        out.append((float(lam[j]), v))
    return out


def lowest_eigenvalues(Tm: TridiagonalOperator, k: int) -> np.ndarray:
    """Eigenvalues only (bisection, no vectors)."""
    lo, hi = bisect_lowest(Tm, k)
    return 0.5 * (lo + hi)


@dataclass
class SpectrumReport:
    label_A: str
    label_B: str
    eigs_A: np.ndarray
    eigs_B: np.ndarray
    per_level_abs_diff: np.ndarray
    per_level_rel_diff: np.ndarray
    k: int
    grid_A: dict = field(default_factory=dict)
    grid_B: dict = field(default_factory=dict)

    @property
    def max_rel_diff(self) -> float:
        return float(np.max(self.per_level_rel_diff)) if self.k else 0.0

    def rows(self):
        for i in range(self.k):
            yield i, self.eigs_A[i], self.eigs_B[i], self.per_level_abs_diff[i], self.per_level_rel_diff[i]


def relative_difference(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), REL_EPS_FLOOR)


def _grid_meta(Tm: TridiagonalOperator) -> dict:
    g = Tm.grid
    return {"x_min": g.x_min, "x_max": g.x_max, "n": g.n, "h": g.h}


def spectrum_compare(A: TridiagonalOperator, B: TridiagonalOperator, k: int) -> SpectrumReport:
    """Lowest k eigenvalues of two operators, level by level.  No pass/fail."""
    if k > min(A.n, B.n):
        raise ValueError("k exceeds the operator dimension")
    ea = lowest_eigenvalues(A, k) if k else np.empty(0)
    eb = lowest_eigenvalues(B, k) if k else np.empty(0)
    return SpectrumReport(
        A.label, B.label, ea, eb, np.abs(ea - eb), relative_difference(ea, eb), k, _grid_meta(A), _grid_meta(B)
    )
