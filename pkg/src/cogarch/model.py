"""Core GJR-COGARCH parameterization and analytic moments.

The model couples an integrated price process G and a volatility process
sigma^2 driven by a pure-jump Levy process L:

    dG_t      = sigma_t dL_t
    sigma_t^2 = sigma_0^2 + theta*t - eta*int_0^t sigma_s^2 ds
                + phi * sum_{s<=t} sigma_s^2 h(dL_s)

with the asymmetry kernel h(x) = (|x| - gamma*x)^2.  Negative jumps are
amplified by (1+gamma)^2 and positive ones damped by (1-gamma)^2, which is
how the model captures the leverage effect.

Everything in this module is a pure function of immutable inputs.  Moment
formulas are expressed in terms of the Laplace exponent

    Psi(u) = -eta*u + int ((1 + phi*h(y))^u - 1) nu_L(dy)

whose signs at u = 1, 2 govern existence of second and fourth moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import MomentDivergenceError

if TYPE_CHECKING:
    from .levy import LevySpec


__all__ = [
    "ParamSet",
    "PsiValues",
    "ReturnMoments",
    "StationarityReport",
    "h",
    "psi",
    "psi_quadrature",
    "psi_values",
    "stationarity",
    "sigma2_moment",
    "sigma2_autocov",
    "return_moments",
    "return_moments_explicit",
]


def h(x, gamma):
    """Asymmetry kernel (|x| - gamma*x)^2.

    Equals (1-gamma)^2 x^2 for x > 0 and (1+gamma)^2 x^2 for x < 0.
    Accepts scalars or arrays.
    """
    return (np.abs(x) - gamma * x) ** 2


@dataclass(frozen=True)
class ParamSet:
    """Model parameters.

    Attributes
    ----------
    theta : float
        Volatility drift per unit time, > 0.
    eta : float
        Mean-reversion (decay) rate, > 0.
    phi : float
        Jump feedback coefficient, > 0.
    gamma : float
        Asymmetry parameter in [0, 1).  The driving process is symmetric,
        so negative gamma would describe the same law; only [0, 1) is kept.
    """

    theta: float
    eta: float
    phi: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.phi > 0:
            raise ValueError(f"phi must be positive, got {self.phi}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0,1), got {self.gamma}")

    @property
    def gamma_tilde(self) -> float:
        """Squared-asymmetry shift 1 + gamma^2; the even second moment of
        h scales as E[h(J)] = gamma_tilde * E[J^2] for symmetric J."""
        return 1.0 + self.gamma**2

    @property
    def h_sq_weight(self) -> float:
        """Even fourth-moment weight: E[h(J)^2] = h_sq_weight * E[J^4]."""
        g2 = self.gamma**2
        return 1.0 + 6.0 * g2 + g2 * g2


@dataclass(frozen=True)
class PsiValues:
    """Laplace exponent evaluated at 1 and 2."""

    psi1: float
    psi2: float


@dataclass(frozen=True)
class StationarityReport:
    """Outcome of the three stationarity-related predicates.

    ``log_condition`` (the integral log-moment test) is the exact
    criterion for a stationary volatility law; ``psi1_negative`` and
    ``psi2_negative`` are the stronger conditions for finite second and
    fourth return moments.
    """

    log_condition: bool
    psi1_negative: bool
    psi2_negative: bool
    log_integral: float
    psi1: float
    psi2: float


def psi_quadrature(u, params: ParamSet, levy: "LevySpec") -> float:
    """Psi(u) evaluated by quadrature against the jump measure."""
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    phi, gamma = params.phi, params.gamma
    integral = levy.expect(lambda y: (1.0 + phi * h(y, gamma)) ** u - 1.0)
    return -params.eta * u + integral


def psi(u, params: ParamSet, levy: "LevySpec") -> float:
    """Laplace exponent Psi(u) of the auxiliary volatility-driving process.

    Closed forms are used at u = 1 and u = 2:

        Psi(1) = -eta + phi*(1 + gamma^2) * int y^2 nu(dy)
        Psi(2) = 2*Psi(1) + phi^2*(1 + 6 gamma^2 + gamma^4) * int y^4 nu(dy)

    Other u fall back to quadrature.  Both shipped jump laws have all
    moments finite, so Psi(u) is finite for every u > 0.
    """
    if u == 1:
        return -params.eta + params.phi * params.gamma_tilde * levy.moment(2)
    if u == 2:
        return 2.0 * psi(1, params, levy) + params.phi**2 * params.h_sq_weight * levy.moment(4)
    return psi_quadrature(u, params, levy)


def psi_values(params: ParamSet, levy: "LevySpec") -> PsiValues:
    return PsiValues(psi1=psi(1, params, levy), psi2=psi(2, params, levy))


def stationarity(params: ParamSet, levy: "LevySpec") -> StationarityReport:
    """Evaluate the stationarity predicates.

    ``log_condition`` is int log(1 + phi*h(y)) nu(dy) < eta.  A negative
    Psi(1) implies it (log(1+x) < x), which is asserted.
    """
    phi, gamma = params.phi, params.gamma
    li = levy.expect(lambda y: np.log1p(phi * h(y, gamma)))
    pv = psi_values(params, levy)
    report = StationarityReport(
        log_condition=bool(li < params.eta),
        psi1_negative=bool(pv.psi1 < 0),
        psi2_negative=bool(pv.psi2 < 0),
        log_integral=float(li),
        psi1=float(pv.psi1),
        psi2=float(pv.psi2),
    )
    assert not report.psi1_negative or report.log_condition
    return report


def sigma2_moment(params: ParamSet, levy: "LevySpec", kappa: int) -> float:
    """kappa-th moment of the stationary volatility:

        E[sigma^(2 kappa)] = kappa! * theta^kappa * prod_{l<=kappa} 1/(-Psi(l))

    Requires Psi(l) < 0 for every l <= kappa.
    """
    if kappa < 1 or int(kappa) != kappa:
        raise ValueError(f"kappa must be a positive integer, got {kappa}")
    out = math.factorial(kappa) * params.theta**kappa
    for l in range(1, kappa + 1):
        pl = psi(l, params, levy)
        if pl >= 0:
            raise MomentDivergenceError(
                f"E[sigma^{2*kappa}] diverges: Psi({l}) = {pl:.6g} >= 0"
            )
        out /= -pl
    return out


def sigma2_autocov(params: ParamSet, levy: "LevySpec", lag: float) -> float:
    """Autocovariance of the stationary volatility:

        cov(sigma_t^2, sigma_{t+h}^2)
            = theta^2 * (2/(Psi(1) Psi(2)) - 1/Psi(1)^2) * exp(h*Psi(1))

    Decays exponentially at rate |Psi(1)|; requires Psi(2) < 0.
    """
    if lag < 0:
        raise ValueError(f"lag must be non-negative, got {lag}")
    pv = psi_values(params, levy)
    if pv.psi2 >= 0:
        raise MomentDivergenceError(f"Psi(2) = {pv.psi2:.6g} >= 0, variance of sigma^2 diverges")
    pref = params.theta**2 * (2.0 / (pv.psi1 * pv.psi2) - 1.0 / pv.psi1**2)
    return pref * math.exp(lag * pv.psi1)


@dataclass(frozen=True)
class ReturnMoments:
    """Closed-form moments of returns over intervals of length ``grid``.

    ``cov_sq(lag)`` is the autocovariance of squared returns at time lag
    ``lag``; the expression is valid only for lag >= grid (for shorter
    lags the windows overlap and the formula does not apply).
    """

    grid: float
    mean: float
    second: float
    fourth: float
    sq_cov_prefactor: float
    decay_rate: float

    def cov_sq(self, lag: float) -> float:
        if lag < self.grid:
            raise ValueError(
                f"squared-return covariance is defined for lag >= grid "
                f"({self.grid:g}), got {lag:g}"
            )
        return self.sq_cov_prefactor * math.exp(-lag * self.decay_rate)


def _x_minus_one_plus_exp_neg(x: float) -> float:
    # x - 1 + exp(-x) without cancellation for small x
    return x + math.expm1(-x)


def return_moments_explicit(
    params: ParamSet, r: float, levy_second: float, levy_fourth: float
) -> ReturnMoments:
    """Return moments with driver moments given explicitly.

    ``levy_second`` is int y^2 nu(dy) and ``levy_fourth`` is
    int y^4 nu(dy).  Used directly by the estimation layer, which may
    substitute a conventional fourth moment for the true one.
    """
    if r <= 0:
        raise ValueError(f"return interval must be positive, got {r}")
    psi1 = -params.eta + params.phi * params.gamma_tilde * levy_second
    psi2 = 2.0 * psi1 + params.phi**2 * params.h_sq_weight * levy_fourth
    if psi1 >= 0:
        raise MomentDivergenceError(f"Psi(1) = {psi1:.6g} >= 0, second return moment diverges")
    p1 = -psi1
    second = params.theta * r / p1 * levy_second

    if psi2 >= 0:
        raise MomentDivergenceError(f"Psi(2) = {psi2:.6g} >= 0, fourth return moment diverges")
    p2 = -psi2

    # Fourth moment, kept as three named summands for auditability.
    lever = 2.0 * params.eta / params.phi - params.gamma_tilde * levy_second
    spread = 2.0 / p2 - 1.0 / p1
    term_cross = (
        6.0
        * levy_second
        * params.theta**2
        / p1**2
        * lever
        * spread
        * (_x_minus_one_plus_exp_neg(r * p1) / p1)
    )
    term_jump = 2.0 * params.theta**2 / params.phi**2 * spread / params.h_sq_weight * r
    term_sq = 3.0 * params.theta**2 / p1**2 * levy_second**2 * r**2
    fourth = term_cross + term_jump + term_sq

    prefactor = (
        levy_second
        * params.theta**2
        / p1**3
        * lever
        * spread
        * (-math.expm1(-r * p1))
        * math.expm1(r * p1)
    )
    return ReturnMoments(
        grid=r,
        mean=0.0,
        second=second,
        fourth=fourth,
        sq_cov_prefactor=prefactor,
        decay_rate=p1,
    )


def return_moments(params: ParamSet, levy: "LevySpec", r: float) -> ReturnMoments:
    """Closed-form moments of returns G_{t+r} - G_t under stationarity.

    Second moments require Psi(1) < 0; the fourth moment and the
    squared-return covariance additionally require Psi(2) < 0 and use the
    driver's true fourth jump moment.
    """
    return return_moments_explicit(params, r, levy.moment(2), levy.moment(4))
