"""Driving pure-jump Levy process: compound Poisson specification and sampling.

Only compound Poisson drivers are supported: finitely many jumps per unit
time, i.i.d. symmetric jump sizes.  Jump laws are symmetric by
construction so that model asymmetry lives entirely in the gamma
parameter.  By convention specs are normalized at construction so that
the second moment of L_1 equals one.

Random number generation uses the counter-based Philox generator with an
explicit seed; parallel ensemble members draw from streams obtained by
jumping the generator, so reruns are bit-stable and members independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import ndtr

from .model import ParamSet, h

__all__ = [
    "NormalJumps",
    "TwoPointJumps",
    "LevySpec",
    "make_rng",
    "sample_jumps",
    "moment",
    "log_integral",
]

# Gauss-Hermite rule used for expectations under normal jump laws; 64
# points integrate the piecewise-polynomial integrands of this package
# exactly (node sets are symmetric, so even/odd parts split cleanly).
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(64)
_GH_WEIGHTS = _GH_WEIGHTS / np.sqrt(np.pi)
_GH_POINTS = np.sqrt(2.0) * _GH_NODES


@dataclass(frozen=True)
class NormalJumps:
    """Centered normal jump sizes with standard deviation ``scale``."""

    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.scale * rng.standard_normal(n)

    def moment(self, order: int) -> float:
        if order == 2:
            return self.scale**2
        if order == 4:
            return 3.0 * self.scale**4
        raise ValueError(f"unsupported moment order {order}, expected 2 or 4")

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(_GH_WEIGHTS @ np.asarray(fn(self.scale * _GH_POINTS)))

    def exceed_prob(self, m: float) -> float:
        """P(|J| > m)."""
        return float(2.0 * ndtr(-m / self.scale))

    def truncated_mean(self, m: float) -> float:
        """E[J 1_{|J| > m}]; zero by symmetry."""
        return 0.0

    def truncated_second(self, m: float) -> float:
        """E[J^2 1_{|J| > m}]."""
        z = m / self.scale
        dens = np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)
        return float(self.scale**2 * 2.0 * (z * dens + ndtr(-z)))

    def scaled(self, c: float) -> "NormalJumps":
        return NormalJumps(scale=c * self.scale)


@dataclass(frozen=True)
class TwoPointJumps:
    """Jumps of size +-magnitude with probability one half each."""

    magnitude: float = 1.0

    def __post_init__(self):
        if not self.magnitude > 0:
            raise ValueError(f"magnitude must be positive, got {self.magnitude}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.magnitude * (2.0 * rng.integers(0, 2, n) - 1.0)

    def moment(self, order: int) -> float:
        if order not in (2, 4):
            raise ValueError(f"unsupported moment order {order}, expected 2 or 4")
        return self.magnitude**order

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        vals = np.asarray(fn(np.array([self.magnitude, -self.magnitude])))
        return float(0.5 * (vals[0] + vals[1]))

    def exceed_prob(self, m: float) -> float:
        return 1.0 if self.magnitude > m else 0.0

    def truncated_mean(self, m: float) -> float:
        return 0.0

    def truncated_second(self, m: float) -> float:
        return self.magnitude**2 if self.magnitude > m else 0.0

    def scaled(self, c: float) -> "TwoPointJumps":
        return TwoPointJumps(magnitude=c * self.magnitude)


JumpDistribution = Union[NormalJumps, TwoPointJumps]


@dataclass(frozen=True)
class LevySpec:
    """Compound Poisson driver: ``rate`` jumps per unit time, i.i.d. sizes.

    ``assumed_s`` is the fourth-moment convention handed to estimators:
    a number (the pseudo convention uses 3.0, the value for normal
    increments) or None to use the driver's true fourth moment.

    Instances are immutable and safe to share across threads.
    """

    rate: float
    jumps: JumpDistribution
    assumed_s: float | None = 3.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        if self.assumed_s is not None and not self.assumed_s > 0:
            raise ValueError(f"assumed_s must be positive, got {self.assumed_s}")

    @classmethod
    def compound_poisson(
        cls,
        rate: float = 1.0,
        jumps: JumpDistribution | None = None,
        normalize: bool = True,
        assumed_s: float | None = 3.0,
    ) -> "LevySpec":
        """Build a spec, rescaling jump sizes so that E[L_1^2] = 1.

        With ``normalize`` the jump law is scaled by 1/sqrt(rate*E[J^2]),
        which makes moment(2) exactly one.
        """
        if jumps is None:
            jumps = NormalJumps()
        if not rate > 0:
            raise ValueError(f"rate must be positive, got {rate}")
        if normalize:
            jumps = jumps.scaled(1.0 / math.sqrt(rate * jumps.moment(2)))
        return cls(rate=rate, jumps=jumps, assumed_s=assumed_s)

    def moment(self, order: int) -> float:
        """int x^order nu(dx) = rate * E[J^order]; order in {2, 4}."""
        return self.rate * self.jumps.moment(order)

    def s_for_estimation(self) -> float:
        """Fourth-moment value handed to the moment estimator."""
        return self.moment(4) if self.assumed_s is None else self.assumed_s

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        """int fn(x) nu(dx) = rate * E[fn(J)], by quadrature or exact sum."""
        return self.rate * self.jumps.expect(fn)

    def sample_jumps(
        self,
        horizon: float,
        seed: int | None = None,
        stream: int = 0,
        rng: np.random.Generator | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Draw the jump times and sizes of the driver on (0, horizon].

        Returns (times, sizes) with times sorted increasing.  Deterministic
        for a given (seed, stream) pair.
        """
        if not horizon > 0:
            raise ValueError(f"horizon must be positive, got {horizon}")
        if rng is None:
            if seed is None:
                raise ValueError("either seed or rng must be given")
            rng = make_rng(seed, stream)
        n = rng.poisson(self.rate * horizon)
        times = np.sort(rng.uniform(0.0, horizon, n))
        sizes = self.jumps.sample(rng, n)
        return times, sizes


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for (seed, stream); streams are mutually independent."""
    bitgen = np.random.Philox(key=seed)
    if stream:
        bitgen = bitgen.jumped(stream)
    return np.random.Generator(bitgen)


def sample_jumps(
    spec: LevySpec, horizon: float, seed: int, stream: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Functional alias for :meth:`LevySpec.sample_jumps`."""
    return spec.sample_jumps(horizon, seed=seed, stream=stream)


def moment(spec: LevySpec, order: int) -> float:
    """Functional alias for :meth:`LevySpec.moment`."""
    return spec.moment(order)


def log_integral(spec: LevySpec, params: ParamSet) -> float:
    """int log(1 + phi*h(y)) nu(dy); appears in the stationarity condition."""
    phi, gamma = params.phi, params.gamma
    return spec.expect(lambda y: np.log1p(phi * h(y, gamma)))
