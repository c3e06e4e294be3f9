"""The skew tent map ``T(x) = (beta/alpha) x`` on ``[0, alpha]`` and
``(beta/(1-alpha)) (1-x)`` on ``(alpha, 1]``, and its parameter region.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, RegionError

DEFAULT_BURN_IN = 1000


def in_region_U(alpha: float, beta: float) -> bool:
    """True iff ``0.5 < beta <= 1`` and ``1 - beta < alpha < beta``."""
    return bool(0.5 < beta <= 1.0 and 1.0 - beta < alpha < beta)


@dataclass(frozen=True)
class SkewTentMap:
    alpha: float
    beta: float

    def __post_init__(self):
        if not in_region_U(self.alpha, self.beta):
            raise RegionError(
                f"(alpha, beta) = ({self.alpha!r}, {self.beta!r}) is not in U"
            )

    @property
    def lambda_slope(self) -> float:
        return self.beta / self.alpha

    @property
    def mu_slope(self) -> float:
        return self.beta / (1.0 - self.alpha)

    def __call__(self, x: float) -> float:
        return eval_map(self, x)


@dataclass(frozen=True)
class BranchSlopes:
    lambda_slope: float
    mu_slope: float


@dataclass(frozen=True)
class Orbit:
    start: float
    points: np.ndarray
    burn_in: int


def _check_point(x):
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x!r} is outside [0, 1]")


def eval_map(tmap: SkewTentMap, x: float) -> float:
    """Evaluate the map; the peak ``x == alpha`` belongs to the left branch."""
    _check_point(x)
    return kernels.step(tmap.alpha, tmap.beta, float(x))


def orbit(
    tmap: SkewTentMap, x0: float, n: int, burn_in: int = DEFAULT_BURN_IN
) -> Orbit:
    """Return ``n`` iterates ``T(x), T^2(x), ...`` after discarding ``burn_in``.

    The returned points start at ``T^(burn_in + 1)(x0)``; with ``burn_in = 0``
    the first point is ``T(x0)``.
    """
    _check_point(x0)
    if n < 1:
        raise ValueError("n must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    pts = kernels.orbit_points(tmap.alpha, tmap.beta, float(x0), int(n), int(burn_in))
    return Orbit(start=float(x0), points=pts, burn_in=int(burn_in))


def branch_slopes(tmap: SkewTentMap) -> BranchSlopes:
    return BranchSlopes(tmap.lambda_slope, tmap.mu_slope)


def dynamical_core(tmap: SkewTentMap) -> tuple[float, float]:
    """The invariant interval ``[T(beta), beta]`` absorbing interior orbits."""
    return (eval_map(tmap, tmap.beta), tmap.beta)
