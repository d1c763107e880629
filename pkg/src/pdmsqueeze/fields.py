"""Real functions of position with derivative rules, and uniform grids.

A :class:`ScalarField` is an evaluation procedure that can also return its
Taylor jet at a point.  Fields built from the constructors in this module
(constants, affine maps, exponentials, and their sums, products, quotients,
powers, logs and compositions) carry exact derivatives of every order.  Fields
wrapped around arbitrary callables only know the derivatives they were given;
:func:`derivative` falls back to centred differences for those.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping

import numpy as np

from . import _jet
from .errors import DomainError, UnsupportedOrder

JetFn = Callable[[np.ndarray, int], np.ndarray]

ANALYTIC_ORDER_LIMIT = 1024


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``n`` interior nodes; the two walls are excluded (Dirichlet)."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min={self.x_min} must be below x_max={self.x_max}")
        if self.n < 3:
            raise ValueError(f"need at least 3 interior nodes, got n={self.n}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n + 1)

    @property
    def half_nodes(self) -> np.ndarray:
        """The n+1 midpoints x_{i+1/2}, i = 0..n, including the two next to the walls."""
        return self.x_min + self.h * (np.arange(self.n + 1) + 0.5)

    def refined(self, factor: int = 2) -> "GridSpec":
        """Same interval with spacing divided by ``factor``."""
        return GridSpec(self.x_min, self.x_max, factor * (self.n + 1) - 1)


@dataclass(frozen=True, eq=False)
class ScalarField:
    jet_fn: JetFn
    domain: tuple[float, float] = (-np.inf, np.inf)
    max_order: int | None = None
    name: str = "field"
    meta: Mapping[str, object] = dc_field(default_factory=dict)

    @property
    def deriv_order_supported(self) -> int:
        return ANALYTIC_ORDER_LIMIT if self.max_order is None else self.max_order

    def check_domain(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        bad = ~((x > lo) & (x < hi))
        if np.any(bad):
            flat = np.flatnonzero(bad.ravel())[0]
            xb = x.ravel()[flat]
            where = f" (node {flat})" if x.ndim else ""
            raise DomainError(
                f"{self.name}: x={xb!r}{where} lies outside the open interval ({lo}, {hi})"
            )
        return x

    def jet(self, x, order: int = 0) -> np.ndarray:
        x = self.check_domain(x)
        if order > self.deriv_order_supported:
            raise UnsupportedOrder(
                f"{self.name} supports derivatives up to order {self.deriv_order_supported}"
            )
        out = self.jet_fn(x, order)
        if not np.all(np.isfinite(out[0])):
            bad = np.flatnonzero(~np.isfinite(np.atleast_1d(out[0])))[0]
            raise DomainError(
                f"{self.name}: non-finite value at x={np.atleast_1d(x)[bad]!r} inside ({self.domain[0]}, {self.domain[1]})"
            )
        return out

    def eval(self, x):
        out = self.jet(x, 0)[0]
        return out if np.ndim(out) else float(out)

    __call__ = eval

    def derivative(self, order: int = 1, h_d: float | None = None) -> "ScalarField":
        return derivative(self, order, h_d=h_d)

    def restrict(self, lo: float, hi: float, name: str | None = None) -> "ScalarField":
        dom = (max(lo, self.domain[0]), min(hi, self.domain[1]))
        return ScalarField(self.jet_fn, dom, self.max_order, name or self.name, self.meta)

    def with_meta(self, **meta) -> "ScalarField":
        return ScalarField(self.jet_fn, self.domain, self.max_order, self.name, {**self.meta, **meta})

    def renamed(self, name: str) -> "ScalarField":
        return ScalarField(self.jet_fn, self.domain, self.max_order, name, self.meta)

    # arithmetic -----------------------------------------------------------

    def _binary(self, other, op, sym):
        other = as_field(other)
        dom = _intersect(self.domain, other.domain)
        mo = _min_order(self.max_order, other.max_order)
        a, b = self, other

        def jet_fn(x, n):
            return op(a.jet_fn(x, n), b.jet_fn(x, n))

        return ScalarField(jet_fn, dom, mo, f"({a.name} {sym} {b.name})")

    def __add__(self, other):
        return self._binary(other, np.add, "+")

    def __radd__(self, other):
        return as_field(other) + self

    def __sub__(self, other):
        return self._binary(other, np.subtract, "-")

    def __rsub__(self, other):
        return as_field(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            c = float(other)
            f = self
            return ScalarField(lambda x, n: c * f.jet_fn(x, n), f.domain, f.max_order, f"{c:g}*{f.name}")
        return self._binary(other, _jet.mul, "*")

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if np.isscalar(other):
            return self * (1.0 / float(other))
        return self._binary(other, _jet.div, "/")

    def __rtruediv__(self, other):
        return as_field(other) / self

    def __neg__(self):
        return -1.0 * self

    def __pow__(self, p):
        return power(self, p)

    def compose(self, inner: "ScalarField") -> "ScalarField":
        """x -> self(inner(x)); the inner values must land in self's domain."""
        outer = self
        mo = _min_order(outer.max_order, inner.max_order)

        def jet_fn(x, n):
            ij = inner.jet_fn(x, n)
            oj = outer.jet(ij[0], n)
            return _jet.compose(oj, ij)

        return ScalarField(jet_fn, inner.domain, mo, f"{outer.name}∘{inner.name}")


def _intersect(a, b):
    return (max(a[0], b[0]), min(a[1], b[1]))


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _shape(x):
    return np.shape(x)


# constructors -----------------------------------------------------------------


def as_field(value) -> ScalarField:
    if isinstance(value, ScalarField):
        return value
    if np.isscalar(value):
        return constant(float(value))
    raise TypeError(f"cannot interpret {type(value).__name__} as a ScalarField")


def constant(c: float, name: str | None = None) -> ScalarField:
    c = float(c)
    return ScalarField(lambda x, n: _jet.constant(c, _shape(x), n), name=name or f"{c:g}")


def affine(slope: float, intercept: float = 0.0, name: str | None = None) -> ScalarField:
    """intercept + slope*x."""
    s, b = float(slope), float(intercept)

    def jet_fn(x, n):
        out = _jet.constant(0.0, _shape(x), n)
        out[0] = b + s * x
        if n >= 1:
            out[1] = s
        return out

    return ScalarField(jet_fn, name=name or f"({b:g}+{s:g}x)")


def identity() -> ScalarField:
    return affine(1.0, 0.0, name="x")


def exponential(amplitude: float, rate: float, name: str | None = None) -> ScalarField:
    """amplitude * exp(rate*x)."""
    a, r = float(amplitude), float(rate)

    def jet_fn(x, n):
        base = a * np.exp(r * np.asarray(x, dtype=float))
        coef = np.cumprod(np.r_[1.0, r / np.arange(1, n + 1)])
        return coef.reshape((-1,) + (1,) * np.ndim(x)) * base

    return ScalarField(jet_fn, name=name or f"{a:g}e^({r:g}x)")


def from_callable(
    fn: Callable,
    derivatives: tuple[Callable, ...] = (),
    domain: tuple[float, float] = (-np.inf, np.inf),
    name: str = "f",
) -> ScalarField:
    """Wrap a plain vectorised function; only the supplied derivatives are exact."""
    fns = (fn,) + tuple(derivatives)
    fact = np.cumprod(np.r_[1.0, np.arange(1, len(fns))])

    def jet_fn(x, n):
        if n >= len(fns):
            raise UnsupportedOrder(f"{name}: no analytic derivative of order {n}")
        return np.stack([np.broadcast_to(fns[j](x), np.shape(x)) / fact[j] for j in range(n + 1)]).astype(float)

    return ScalarField(jet_fn, domain, len(derivatives), name)


def exp(f: ScalarField) -> ScalarField:
    return ScalarField(lambda x, n: _jet.exp(f.jet_fn(x, n)), f.domain, f.max_order, f"exp({f.name})")


def log(f: ScalarField) -> ScalarField:
    return ScalarField(lambda x, n: _jet.log(f.jet_fn(x, n)), f.domain, f.max_order, f"log({f.name})")


def power(f: ScalarField, p: float) -> ScalarField:
    p = float(p)
    if p == 2.0:
        return ScalarField(lambda x, n: _jet.mul(f.jet_fn(x, n), f.jet_fn(x, n)), f.domain, f.max_order, f"{f.name}^2")
    return ScalarField(lambda x, n: _jet.power(f.jet_fn(x, n), p), f.domain, f.max_order, f"{f.name}^{p:g}")


# operations ---------------------------------------------------------------------


def sample(field: ScalarField, grid: GridSpec) -> np.ndarray:
    """Field values at the interior nodes of ``grid``."""
    return np.asarray(field.eval(grid.nodes), dtype=float)


def derivative(field: ScalarField, order: int = 1, h_d: float | None = None) -> ScalarField:
    """Derivative field of order 1 or 2.

    Exact when the field carries enough analytic derivatives, otherwise a
    centred difference with step ``h_d`` (default ``1e-5*max(1,|x|)`` for first
    derivatives, ``1e-4*max(1,|x|)`` for second).  Passing ``h_d`` forces the
    numerical path.
    """
    if order not in (1, 2):
        raise UnsupportedOrder(f"derivative order must be 1 or 2, got {order}")
    if h_d is None and order <= field.deriv_order_supported:
        mo = None if field.max_order is None else field.max_order - order

        def jet_fn(x, n):
            return _jet.deriv(field.jet_fn(x, n + order), order)

        return ScalarField(jet_fn, field.domain, mo, f"{field.name}{chr(39) * order}")
    return _numerical_derivative(field, order, h_d)


def _numerical_derivative(field, order, h_d):
    rel = 1e-5 if order == 1 else 1e-4

    def value(x):
        x = np.asarray(x, dtype=float)
        h = h_d if h_d is not None else rel * np.maximum(1.0, np.abs(x))
        fp = field.eval(x + h)
        fm = field.eval(x - h)
        if order == 1:
            return (fp - fm) / (2 * h)
        return (fp - 2 * field.eval(x) + fm) / (h * h)

    def jet_fn(x, n):
        if n > 0:
            raise UnsupportedOrder("numerical derivative fields carry values only")
        return np.asarray(value(x), dtype=float)[None]

    return ScalarField(jet_fn, field.domain, 0, f"d{order}[{field.name}]~")
