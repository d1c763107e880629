"""Concrete masses, generators and potentials.

The exponential-decay mass m(x) = (1 + a b e^{bx})^-2 pairs with the generator
g(x) = a e^{bx}.  A five-term exponential potential with constrained
coefficients then transforms into a Morse well.  A constant-mass squeeze case
is included as a baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GammaUndefined, ParamError
from .fields import ScalarField, affine, constant, exponential, log, power

FIGURE_GRID = (-6.0, 4.0, 501)  # 500 intervals, so x = 0 is a node
FIGURE_BETAS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class ExampleConfig:
    """Parameters of the exponential mass and five-term potential.

    ``a3_sign`` selects the sign of the e^{bx} coefficient, a3 = s*alpha*beta^3/4.
    The default (-1) is the sign for which the transformed potential is exactly
    a Morse well; +1 is kept constructible for comparison.
    """

    alpha: float
    beta: float
    a0: float
    a1: float
    a3_sign: int = -1

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParamError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")
        if self.a0 == 0:
            raise ParamError("a0 must be nonzero")
        if self.a3_sign not in (1, -1):
            raise ParamError(f"a3_sign must be +1 or -1, got {self.a3_sign}")

    @property
    def a2(self) -> float:
        return self.a1**2 / (4 * self.a0)

    @property
    def a3(self) -> float:
        return self.a3_sign * self.alpha * self.beta**3 / 4

    @property
    def a4(self) -> float:
        return -3.0 / 8.0 * self.alpha**2 * self.beta**4

    @property
    def x_star(self) -> float:
        """Point where the forward displacement diverges."""
        return -math.log(self.alpha * self.beta) / self.beta

    def with_sign(self, sign: int) -> "ExampleConfig":
        return ExampleConfig(self.alpha, self.beta, self.a0, self.a1, sign)


@dataclass(frozen=True)
class MorseParams:
    D_e: float
    beta: float
    gamma: float

    def levels(self, count: int | None = None) -> np.ndarray:
        """Textbook bound-state energies beta*sqrt(2 D_e)(n+1/2) - beta^2 (n+1/2)^2 / 2."""
        nu = math.sqrt(2 * self.D_e) / self.beta
        n_max = int(math.floor(nu - 0.5))
        count = n_max + 1 if count is None else count
        k = np.arange(count) + 0.5
        return self.beta * math.sqrt(2 * self.D_e) * k - self.beta**2 * k**2 / 2


# Acceptance-scale Morse parameters: D_e = 81, x_star ~ 5.99.
MORSE_ACCEPTANCE = ExampleConfig(alpha=0.1, beta=0.5, a0=1.0, a1=400.0)
# Small-well parameters used by the conjugation oracle; x_star = 0.
RESOLUTION_CONFIG = ExampleConfig(alpha=1.0, beta=1.0, a0=0.05, a1=0.15)


def mass_family(alpha: float, beta: float) -> ScalarField:
    if not (alpha > 0 and beta > 0):
        raise ParamError(f"mass parameters must be positive, got alpha={alpha}, beta={beta}")
    return power(1.0 + exponential(alpha * beta, beta), -2.0).renamed("m")


def generator_for_mass(alpha: float, beta: float) -> ScalarField:
    return exponential(alpha, beta, name="g")


def potential_family(cfg: ExampleConfig) -> ScalarField:
    b = cfg.beta
    V = (
        constant(cfg.a0)
        + exponential(cfg.a1, -b)
        + exponential(cfg.a2, -2 * b)
        + exponential(cfg.a3, b)
        + exponential(cfg.a4, 2 * b)
    )
    return V.renamed("V")


def morse_from_config(cfg: ExampleConfig) -> MorseParams:
    denom = cfg.alpha * cfg.beta * cfg.a1 - 2 * cfg.a0
    arg = cfg.a1 / denom if denom != 0 else math.inf
    if not (np.isfinite(arg) and arg > 0):
        raise GammaUndefined(f"equilibrium position undefined: log argument a1/(alpha*beta*a1-2*a0) = {arg}", arg)
    D_e = (2 * cfg.a0 - cfg.alpha * cfg.beta * cfg.a1) ** 2 / (4 * cfg.a0)
    return MorseParams(D_e=D_e, beta=cfg.beta, gamma=math.log(arg) / cfg.beta)


def morse_potential(p: MorseParams) -> ScalarField:
    inner = 1.0 - exponential(math.exp(p.beta * p.gamma), -p.beta)
    return (p.D_e * (inner * inner)).renamed("Morse")


def f_closed(alpha: float, beta: float) -> ScalarField:
    """-(1/b) ln(1 - a b e^{bx}) on (-inf, x_star)."""
    xs = -math.log(alpha * beta) / beta
    f = (-1.0 / beta) * log(1.0 - exponential(alpha * beta, beta))
    return f.restrict(-np.inf, xs, name="f_closed")


def F_closed(alpha: float, beta: float) -> ScalarField:
    """-(1/b) ln(1 + a b e^{bx}); defined on the whole line."""
    return ((-1.0 / beta) * log(1.0 + exponential(alpha * beta, beta))).renamed("F_closed")


def G_closed(alpha: float, beta: float) -> ScalarField:
    return (1.0 + exponential(alpha * beta, beta)).renamed("G_closed")


def map_forward(cfg: ExampleConfig, u):
    """u -> u + f(u), closed form; maps (-inf, x_star) onto the whole line."""
    u = np.asarray(u, dtype=float)
    if np.any(u >= cfg.x_star):
        raise DomainError(f"forward map needs u < x_star = {cfg.x_star}")
    return u - np.log1p(-cfg.alpha * cfg.beta * np.exp(cfg.beta * u)) / cfg.beta


def map_backward(cfg: ExampleConfig, y):
    """y -> y + F(y), the inverse of :func:`map_forward`."""
    y = np.asarray(y, dtype=float)
    return y - np.log1p(cfg.alpha * cfg.beta * np.exp(cfg.beta * y)) / cfg.beta


# constant-mass squeeze baseline ---------------------------------------------------


@dataclass(frozen=True)
class ConstantMassCase:
    """H = p^2/(2 m0) + V(x) and its squeezed image p^2/2 + V(x/sqrt(m0))."""

    m0: float = 2.0
    omega2: float = 1.0  # V = omega2 * x^2 / 2

    def __post_init__(self):
        if self.m0 <= 0:
            raise ParamError("m0 must be positive")

    @property
    def mass(self) -> ScalarField:
        return constant(self.m0, name="m0")

    @property
    def potential(self) -> ScalarField:
        x = affine(1.0)
        return (0.5 * self.omega2 * (x * x)).renamed("V")

    @property
    def squeezed_potential(self) -> ScalarField:
        x = affine(1.0 / math.sqrt(self.m0))
        return (0.5 * self.omega2 * (x * x)).renamed("V(x/sqrt(m0))")

    def squeeze_generator(self) -> ScalarField:
        """g = (ln m0 / 2) x, whose forward displacement is x -> sqrt(m0) x."""
        return affine(math.log(self.m0) / 2.0, name="g_squeeze")

    def mass_generator(self) -> ScalarField:
        """g = -(ln m0 / 2) x, for which G^2 = 1/m0 and T^dag H T removes the mass."""
        return affine(-math.log(self.m0) / 2.0, name="g_mass")

    def levels(self, count: int) -> np.ndarray:
        w = math.sqrt(self.omega2 / self.m0)
        return w * (np.arange(count) + 0.5)


# figure data ------------------------------------------------------------------------


def figure_grid() -> np.ndarray:
    lo, hi, n = FIGURE_GRID
    return np.linspace(lo, hi, n)


def figure1_data(alpha: float = 1.0, betas=FIGURE_BETAS) -> dict[str, np.ndarray]:
    x = figure_grid()
    out = {"x": x}
    for b in betas:
        out[f"m_beta={b:g}"] = mass_family(alpha, b).eval(x)
    return out


def figure2_data(alpha: float = 1.0, betas=FIGURE_BETAS, a0: float = 1.0, a1: float = 1.0, a3_sign: int = 1) -> dict[str, np.ndarray]:
    x = figure_grid()
    out = {"x": x}
    for b in betas:
        cfg = ExampleConfig(alpha, b, a0, a1, a3_sign)
        out[f"V_beta={b:g}"] = potential_family(cfg).eval(x)
    return out
