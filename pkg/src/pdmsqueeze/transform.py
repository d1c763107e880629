"""Series-defined auxiliary functions of the squeeze-like transformation.

For a generator g(x) the unitary exp{-(i/2)(p g + g p)} acts on position and
momentum through three functions:

* G, the momentum weight:  G = sum_k (-1)^k G_k / k!,  G_0 = 1,
  G_{k+1} = g^2 d/dx (G_k / g);
* f, the forward displacement:  f = sum_k f_k / k!,  f_1 = g,  f_{k+1} = g f_k';
* F, the backward displacement: F = sum_k (-1)^k f_k / k!.

The recursions are evaluated with exact Taylor arithmetic, so every term is
exact up to rounding and the only error is truncation, tracked per point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _jet
from .errors import DivisionByGenerator, DomainError
from .fields import GridSpec, ScalarField, derivative, identity, sample

DEFAULT_K = 24
DEFAULT_TOL = 1e-14
_ROUNDING_ZERO = 64 * np.finfo(float).eps


class Convention(str, enum.Enum):
    """Form of the quantum correction added to V.

    SLOPE_EIGHTH:  V + (1/8) (G^2)'' - (1/8) (G')^2   (exact: gives a Morse W for the catalog family)
    SLOPE_HALF:    V + (1/8) (G^2)'' - (1/2) (G')^2   (alternative slope factor)
    """

    SLOPE_EIGHTH = "slope_eighth"
    SLOPE_HALF = "slope_half"


_SLOPE_COEF = {Convention.SLOPE_EIGHTH: 1.0 / 8.0, Convention.SLOPE_HALF: 1.0 / 2.0}


@dataclass
class SeriesEvaluation:
    """Per-point outcome of one truncated series evaluation."""

    jet: np.ndarray          # (order+1, P) jet of the partial sum
    converged_at: np.ndarray  # smallest k meeting tol, -1 if none
    diverged: np.ndarray
    terminated: bool          # recursion hit an identically zero term


def _recursion_terms(g: ScalarField, kind: str, x: np.ndarray, K: int, order: int):
    """Yield (k, jet of G_k/k!) for k = 0.. or (k, jet of f_k/k!) for k = 1..K.

    Carrying the terms divided by k! keeps them finite where the raw terms
    grow like k! (the f_k of an exponential generator do).
    """
    top = K + order + 1
    gj = g.jet(x, top)
    if kind == "G":
        if np.any(gj[0] == 0.0):
            bad = np.atleast_1d(x)[np.flatnonzero(np.atleast_1d(gj[0] == 0.0))[0]]
            raise DivisionByGenerator(f"generator {g.name} vanishes at x={bad!r}")
        g2 = _jet.mul(gj, gj)
        ag, adg = np.abs(gj), np.abs(_jet.deriv(gj))
        term = _jet.constant(1.0, gj.shape[1:], top)
        k = 0
        while True:
            yield k, term
            if k == K:
                return
            new = _jet.mul(g2, _jet.deriv(_jet.div(term, gj))) / (k + 1)
            # g^2 (G_k/g)' = g G_k' - g' G_k; where the result is at the rounding
            # level of those two products the term is zero (terminating series),
            # and leaving the noise in would be amplified by g^2 at every step
            L = new.shape[0]
            scale = (_jet.mul(ag, np.abs(_jet.deriv(term)))[:L] + _jet.mul(adg, np.abs(term))[:L]) / (k + 1)
            noise = np.all(np.abs(new) <= _ROUNDING_ZERO * np.max(scale, axis=0), axis=0)
            new[:, noise] = 0.0
            term = new
            k += 1
    else:
        term = gj[:top]
        k = 1
        while True:
            yield k, term
            if k == K:
                return
            term = _jet.mul(gj, _jet.deriv(term)) / (k + 1)
            k += 1


def evaluate_series(g: ScalarField, kind: str, x, K: int = DEFAULT_K, tol: float = DEFAULT_TOL, order: int = 0) -> SeriesEvaluation:
    """Truncated sum for kind in {"G", "f", "F"} at points ``x`` with jets up to ``order``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if K < 1:
        raise ValueError("K must be >= 1")
    total = np.zeros((order + 1,) + x.shape)
    active = np.ones(x.shape, dtype=bool)
    converged_at = np.full(x.shape, -1, dtype=int)
    diverged = np.zeros(x.shape, dtype=bool)
    growth = np.zeros(x.shape, dtype=int)
    prev = np.full(x.shape, np.inf)
    terminated = False
    alternating = kind in ("G", "F")
    for k, term in _recursion_terms(g, kind, x, K, order):
        sign = -1.0 if (alternating and k % 2) else 1.0
        contrib = sign * term[: order + 1]
        if not np.any(term):
            converged_at[active] = k
            active[:] = False
            terminated = True
            break
        total[:, active] += contrib[:, active]
        size = np.max(np.abs(contrib), axis=0)
        done = active & (size <= tol * (1.0 + np.max(np.abs(total), axis=0)))
        converged_at[done] = k
        if kind != "G" and k > 5:
            growing = size > prev
            growth = np.where(growing, growth + 1, 0)
            blown = active & (growth >= 3)
            diverged |= blown
            active &= ~blown
        prev = size
        active &= ~done
        if not np.any(active):
            break
    return SeriesEvaluation(total, converged_at, diverged, terminated)


def _series_field(g: ScalarField, kind: str, K: int, tol: float) -> ScalarField:
    label = {"G": "G", "f": "f", "F": "F"}[kind]

    def jet_fn(x, n):
        shape = np.shape(x)
        ev = evaluate_series(g, kind, np.ravel(x), K, tol, n)
        if kind != "G" and np.any(ev.diverged):
            bad = np.ravel(x)[np.flatnonzero(ev.diverged)[0]]
            raise DomainError(f"{label}-series diverges at x={bad!r}; point outside the admissible domain")
        return ev.jet.reshape((n + 1,) + shape)

    return ScalarField(jet_fn, g.domain, g.max_order, f"{label}[{g.name}]", {"K": K, "tol": tol, "kind": kind})


def series_G(g: ScalarField, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> ScalarField:
    return _series_field(g, "G", K, tol)


def series_f(g: ScalarField, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> ScalarField:
    return _series_field(g, "f", K, tol)


def series_F(g: ScalarField, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> ScalarField:
    return _series_field(g, "F", K, tol)


@dataclass(frozen=True)
class TransformSeries:
    """G, f and F for one generator, with access to raw terms and convergence data."""

    g: ScalarField
    K: int = DEFAULT_K
    tol: float = DEFAULT_TOL

    @property
    def G(self):
        return series_G(self.g, self.K, self.tol)

    @property
    def f(self):
        return series_f(self.g, self.K, self.tol)

    @property
    def F(self):
        return series_F(self.g, self.K, self.tol)

    def terms(self, kind: str, x) -> dict[int, np.ndarray]:
        """Raw recursion terms G_k or f_k (values, without the 1/k! and signs of the sum)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        rec = "G" if kind == "G" else "f"
        return {k: t[0] * math.factorial(k) for k, t in _recursion_terms(self.g, rec, x, self.K, 0)}

    def converged_at(self, kind: str, x) -> np.ndarray:
        return evaluate_series(self.g, kind, x, self.K, self.tol).converged_at

    def admissible(self, x, kind: str = "f") -> np.ndarray:
        """Mask of points where the displacement series is not flagged divergent."""
        ev = evaluate_series(self.g, kind, x, self.K, self.tol)
        return ~ev.diverged


def v_tilde(V: ScalarField, G: ScalarField, convention: Convention = Convention.SLOPE_EIGHTH) -> ScalarField:
    """V plus the quantum correction built from the momentum weight G."""
    convention = Convention(convention)
    c = _SLOPE_COEF[convention]
    dG = derivative(G, 1)
    correction = derivative(G * G, 2) * (1.0 / 8.0) - (dG * dG) * c
    return (V + correction).renamed(f"Vt[{V.name}]").with_meta(convention=convention)


@dataclass(frozen=True)
class TransformedPotentialSpec:
    V: ScalarField
    g: ScalarField
    G: ScalarField
    f: ScalarField
    F: ScalarField
    v_tilde: ScalarField
    W: ScalarField
    convention: Convention
    K: int
    tol: float


def transformed_potential(
    V: ScalarField,
    g: ScalarField,
    K: int = DEFAULT_K,
    tol: float = DEFAULT_TOL,
    convention: Convention = Convention.SLOPE_EIGHTH,
    interval: tuple[float, float] | None = None,
    probe_points: int = 201,
) -> TransformedPotentialSpec:
    """W(x) = Vt(x + f(x)), with every intermediate field kept for inspection.

    If ``interval`` is given, the displacement series is checked on a uniform
    sample of it and a DomainError names the admissible sub-interval when the
    series diverges anywhere inside.
    """
    convention = Convention(convention)
    ts = TransformSeries(g, K, tol)
    G, f, F = ts.G, ts.f, ts.F
    vt = v_tilde(V, G, convention)
    W = vt.compose(identity() + f).renamed("W").with_meta(convention=convention)
    if interval is not None:
        lo, hi = interval
        xs = np.linspace(lo, hi, probe_points)
        ok = ts.admissible(xs)
        if not np.all(ok):
            good = xs[ok]
            span = (float(good.min()), float(good.max())) if good.size else None
            raise DomainError(
                f"displacement series diverges inside [{lo}, {hi}]; admissible sampled interval: {span}"
            )
    return TransformedPotentialSpec(V, g, G, f, F, vt, W, convention, K, tol)


def verify_mass_consistency(m: ScalarField, g: ScalarField, grid: GridSpec, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> float:
    """sup over nodes of |G^2 m - 1|."""
    G = sample(series_G(g, K, tol), grid)
    mv = sample(m, grid)
    return float(np.max(np.abs(G * G * mv - 1.0)))
