"""Exact simulation of the coupled (sigma^2, G) dynamics for compound
Poisson drivers, and aggregation of paths into return series.

Between jumps the volatility follows the deterministic flow

    sigma^2(t) = theta/eta + (sigma^2(t0) - theta/eta) * exp(-eta*(t - t0))

exactly; at a jump of size j the price picks up sigma_{s-} * j using the
left-limit volatility, after which sigma^2 is multiplied by
(1 + phi*h(j)).  No discretization error is involved, so a path is fully
described by its jump events; values between events are evaluated lazily
from the flow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NonstationaryModelError
from .levy import LevySpec, log_integral, make_rng
from .model import ParamSet, h, psi

__all__ = ["SimPath", "ReturnSeries", "simulate", "path_from_jumps", "returns_on_grid"]


@njit(cache=True)
def _evolve(times, jumps, theta, eta, phi, gamma, sigma2_0):
    n = times.shape[0]
    s2_before = np.empty(n)
    s2_after = np.empty(n)
    g_after = np.empty(n)
    level = theta / eta
    s2 = sigma2_0
    t_prev = 0.0
    g = 0.0
    for i in range(n):
        s2 = level + (s2 - level) * np.exp(-eta * (times[i] - t_prev))
        s2_before[i] = s2
        j = jumps[i]
        g += np.sqrt(s2) * j
        g_after[i] = g
        hj = abs(j) - gamma * j
        hj2 = hj * hj
        s2 = s2 * (1.0 + phi * hj2)
        s2_after[i] = s2
        t_prev = times[i]
    return s2_before, s2_after, g_after


@dataclass(frozen=True)
class SimPath:
    """One simulated trajectory, stored event-wise.

    Arrays are aligned per jump event: ``sigma2_before`` is the
    left-limit volatility at the event, ``sigma2_after`` the value right
    after the multiplicative update, ``g_after`` the price right after
    the jump.  ``sigma2_at``/``g_at`` evaluate the path at arbitrary
    times from the flow.  Instances are immutable and shareable.
    """

    params: ParamSet
    horizon: float
    sigma2_0: float
    times: np.ndarray
    jumps: np.ndarray
    sigma2_before: np.ndarray
    sigma2_after: np.ndarray
    g_after: np.ndarray

    @property
    def n_events(self) -> int:
        return len(self.times)

    def _flow(self, sigma2, dt):
        level = self.params.theta / self.params.eta
        return level + (sigma2 - level) * np.exp(-self.params.eta * dt)

    def sigma2_at(self, t):
        """Volatility at time(s) t in [0, horizon] (right-continuous)."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.horizon):
            raise ValueError("requested times fall outside [0, horizon]")
        if self.n_events == 0:
            out = self._flow(self.sigma2_0, t)
        else:
            idx = np.searchsorted(self.times, t, side="right")
            prev = np.maximum(idx - 1, 0)
            base = np.where(idx > 0, self.sigma2_after[prev], self.sigma2_0)
            t_base = np.where(idx > 0, self.times[prev], 0.0)
            out = self._flow(base, t - t_base)
        return float(out) if out.ndim == 0 else out

    def g_at(self, t):
        """Integrated process at time(s) t; piecewise constant between jumps."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.horizon):
            raise ValueError("requested times fall outside [0, horizon]")
        if self.n_events == 0:
            out = np.zeros_like(t)
        else:
            idx = np.searchsorted(self.times, t, side="right")
            out = np.where(idx > 0, self.g_after[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if out.ndim == 0 else out

    def validate(self, rtol=1e-9):
        """Check the event-wise dynamic invariants; used by tests."""
        p = self.params
        prev_t = np.concatenate(([0.0], self.times[:-1]))
        prev_s2 = np.concatenate(([self.sigma2_0], self.sigma2_after[:-1]))
        flowed = self._flow(prev_s2, self.times - prev_t)
        assert np.allclose(flowed, self.sigma2_before, rtol=rtol)
        assert np.allclose(
            self.sigma2_after,
            self.sigma2_before * (1.0 + p.phi * h(self.jumps, p.gamma)),
            rtol=rtol,
        )
        prev_g = np.concatenate(([0.0], self.g_after[:-1]))
        assert np.allclose(
            self.g_after - prev_g, np.sqrt(self.sigma2_before) * self.jumps, rtol=rtol
        )
        if self.sigma2_0 > 0 or p.theta > 0:
            assert np.all(self.sigma2_before > 0) and np.all(self.sigma2_after > 0)


@dataclass(frozen=True)
class ReturnSeries:
    """Observation times t_0 < ... < t_N and returns Y_i = G_{t_i} - G_{t_{i-1}}."""

    times: np.ndarray
    returns: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        returns = np.asarray(self.returns, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "returns", returns)
        if len(times) != len(returns) + 1:
            raise ValueError(
                f"need one more time than returns, got {len(times)} times "
                f"and {len(returns)} returns"
            )
        if len(times) < 2:
            raise ValueError("a return series needs at least two observation times")
        if not np.all(np.diff(times) > 0):
            raise ValueError("observation times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.returns)

    @property
    def dts(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def equidistant(self) -> bool:
        d = self.dts
        return bool(np.allclose(d, d[0], rtol=1e-9, atol=0.0))

    @property
    def delta(self) -> float:
        if not self.equidistant:
            raise ValueError("series is not equidistant")
        return float(self.dts[0])

    @classmethod
    def from_equidistant(cls, returns, delta: float, t0: float = 0.0) -> "ReturnSeries":
        returns = np.asarray(returns, dtype=float)
        times = t0 + delta * np.arange(len(returns) + 1)
        return cls(times=times, returns=returns)


def path_from_jumps(
    params: ParamSet,
    times,
    jumps,
    horizon: float,
    sigma2_0: float,
) -> SimPath:
    """Evolve the exact dynamics along a given list of driver jumps.

    Useful for shared-driver studies where several schemes must see the
    same randomness.
    """
    times = np.ascontiguousarray(times, dtype=float)
    jumps = np.ascontiguousarray(jumps, dtype=float)
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if sigma2_0 < 0:
        raise ValueError(f"sigma2_0 must be non-negative, got {sigma2_0}")
    if len(times) and (times[0] <= 0 or times[-1] > horizon):
        raise ValueError("jump times must lie in (0, horizon]")
    s2b, s2a, g = _evolve(
        times, jumps, params.theta, params.eta, params.phi, params.gamma, sigma2_0
    )
    return SimPath(
        params=params,
        horizon=horizon,
        sigma2_0=float(sigma2_0),
        times=times,
        jumps=jumps,
        sigma2_before=s2b,
        sigma2_after=s2a,
        g_after=g,
    )


def _default_burn_in(params: ParamSet, levy: LevySpec) -> float:
    # 50 relaxation times of the mean dynamics; fall back to the
    # log-moment drift when second moments do not exist.
    psi1 = psi(1, params, levy)
    if psi1 < 0:
        return 50.0 / -psi1
    drift = params.eta - log_integral(levy, params)
    return 50.0 / drift


def simulate(
    params: ParamSet,
    levy: LevySpec,
    horizon: float,
    sigma2_0="stationary",
    seed: int | None = None,
    stream: int = 0,
    burn_in: float | None = None,
    rng: np.random.Generator | None = None,
) -> SimPath:
    """Simulate one exact trajectory of (sigma^2, G) on [0, horizon].

    ``sigma2_0`` is either a non-negative starting value or the string
    ``"stationary"``, in which case the volatility is started from (an
    approximation of) its stationary law by running a burn-in stretch
    that is discarded; the stationary law itself has no closed form.
    The burn-in length defaults to 50 mean relaxation times.

    Raises NonstationaryModelError if a stationary start is requested
    while the stationarity condition fails.  Deterministic given
    (seed, stream).
    """
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if rng is None:
        if seed is None:
            raise ValueError("either seed or rng must be given")
        rng = make_rng(seed, stream)

    if isinstance(sigma2_0, str):
        if sigma2_0 != "stationary":
            raise ValueError(f"unknown sigma2_0 mode {sigma2_0!r}")
        li = log_integral(levy, params)
        if not li < params.eta:
            raise NonstationaryModelError(
                f"stationary start requested but the volatility has no "
                f"stationary law: log-moment integral {li:.6g} >= eta {params.eta:.6g}"
            )
        if burn_in is None:
            burn_in = _default_burn_in(params, levy)
        times, jumps = levy.sample_jumps(burn_in + horizon, rng=rng)
        warm = path_from_jumps(
            params, times, jumps, burn_in + horizon, params.theta / params.eta
        )
        keep = times > burn_in
        kept_times = times[keep] - burn_in
        kept_jumps = jumps[keep]
        g0 = warm.g_at(burn_in)
        sub = SimPath(
            params=params,
            horizon=horizon,
            sigma2_0=float(warm.sigma2_at(burn_in)),
            times=kept_times,
            jumps=kept_jumps,
            sigma2_before=warm.sigma2_before[keep],
            sigma2_after=warm.sigma2_after[keep],
            g_after=warm.g_after[keep] - g0,
        )
        return sub

    if sigma2_0 < 0:
        raise ValueError(f"sigma2_0 must be non-negative, got {sigma2_0}")
    times, jumps = levy.sample_jumps(horizon, rng=rng)
    return path_from_jumps(params, times, jumps, horizon, float(sigma2_0))


def returns_on_grid(path: SimPath, times) -> ReturnSeries:
    """Aggregate a path into returns over the given observation times.

    Y_i collects exactly the price jumps in (t_{i-1}, t_i].
    """
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(times > path.horizon):
        raise ValueError("observation times must lie within [0, horizon]")
    g = path.g_at(times)
    return ReturnSeries(times=times, returns=np.diff(g))
