"""Characteristic-flow oracle for the displacement functions.

Conjugating position by exp{-(i/2)(p g + g p)} is a point transformation:
x + f(x) is where the flow dx/ds = g(x) carries x in unit time, and x + F(x)
is the endpoint of the reversed flow dx/ds = -g(x).  Integrating the flow
directly gives values for f and F that never touch the series.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FlowEscape
from .fields import ScalarField, derivative

BLOWUP = 1e12
DEFAULT_STEPS = 256


class Direction(enum.Enum):
    FORWARD = 1    # x -> x + f(x)
    BACKWARD = -1  # x -> x + F(x)


@dataclass(frozen=True)
class FlowResult:
    x0: np.ndarray
    x1: np.ndarray
    jacobian: np.ndarray
    steps_used: int
    est_error: np.ndarray


def _rhs(g, dg, sigma, x, J, s):
    try:
        gv = g.eval(x)
        dgv = dg.eval(x)
    except DomainError as exc:
        raise FlowEscape(f"trajectory left the domain of {g.name} at s={s:.6g}: {exc}", s) from exc
    return sigma * gv, sigma * dgv * J


def integrate(g: ScalarField, x0, sigma: float, n_steps: int):
    """Classical RK4 for (x, dx/dx0) over s in [0, 1]; returns (x1, J)."""
    dg = derivative(g, 1)
    x = np.array(x0, dtype=float, copy=True)
    J = np.ones_like(x)
    ds = 1.0 / n_steps
    for i in range(n_steps):
        s = i * ds
        k1x, k1j = _rhs(g, dg, sigma, x, J, s)
        k2x, k2j = _rhs(g, dg, sigma, x + 0.5 * ds * k1x, J + 0.5 * ds * k1j, s + 0.5 * ds)
        k3x, k3j = _rhs(g, dg, sigma, x + 0.5 * ds * k2x, J + 0.5 * ds * k2j, s + 0.5 * ds)
        k4x, k4j = _rhs(g, dg, sigma, x + ds * k3x, J + ds * k3j, s + ds)
        x = x + ds / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        J = J + ds / 6.0 * (k1j + 2 * k2j + 2 * k3j + k4j)
        if not np.all(np.isfinite(x)) or np.any(np.abs(x) > BLOWUP):
            raise FlowEscape(f"trajectory blew up before s={s + ds:.6g}", s + ds)
    return x, J


def flow_map(g: ScalarField, x0, direction: Direction = Direction.FORWARD, n_steps: int = DEFAULT_STEPS) -> FlowResult:
    """Unit-time flow of dx/ds = +-g(x) with one Richardson halving.

    The returned endpoint is the extrapolated value from ``n_steps`` and
    ``2*n_steps``; ``est_error`` is the size of that correction.
    """
    sigma = float(Direction(direction).value)
    x0 = np.asarray(x0, dtype=float)
    xc, Jc = integrate(g, x0, sigma, n_steps)
    xf, Jf = integrate(g, x0, sigma, 2 * n_steps)
    corr = (xf - xc) / 15.0
    return FlowResult(
        x0=x0,
        x1=xf + corr,
        jacobian=Jf + (Jf - Jc) / 15.0,
        steps_used=3 * n_steps,
        est_error=np.abs(corr),
    )


def f_oracle(g: ScalarField, x, n_steps: int = DEFAULT_STEPS):
    r = flow_map(g, x, Direction.FORWARD, n_steps)
    return r.x1 - r.x0


def F_oracle(g: ScalarField, x, n_steps: int = DEFAULT_STEPS):
    r = flow_map(g, x, Direction.BACKWARD, n_steps)
    return r.x1 - r.x0
