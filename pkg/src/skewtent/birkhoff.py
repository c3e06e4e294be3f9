"""Orbit-average estimates of the left-branch frequency and the Lyapunov exponent.

The left-branch frequency ``gamma`` (the fraction of time a typical orbit spends
in ``[0, alpha]``) determines both the Lyapunov exponent,
``gamma log(beta/alpha) + (1 - gamma) log(beta/(1 - alpha))``, and the isentrope
slope ``(gamma - alpha) beta / (alpha (1 - alpha))``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .map_core import DEFAULT_BURN_IN, SkewTentMap

DEFAULT_N = 200_000
DEFAULT_SEED = 0

BIRKHOFF = "birkhoff"
THETA_IMPLICIT = "theta-implicit"
MARKOV_EXACT = "markov-exact"


@dataclass(frozen=True)
class GammaEstimate:
    gamma: float
    n_iterates: int
    seed: int
    x0: float
    restarts: int = 0


@dataclass(frozen=True)
class TangentEstimate:
    alpha: float
    beta: float
    gamma: float
    lambda_exponent: float
    psi_prime: float
    method: str

    @classmethod
    def from_gamma(cls, alpha, beta, gamma, method):
        return cls(
            alpha,
            beta,
            gamma,
            lyapunov_from_gamma(alpha, beta, gamma),
            slope_from_gamma(alpha, beta, gamma),
            method,
        )

    @classmethod
    def from_slope(cls, alpha, beta, psi_prime, method=THETA_IMPLICIT):
        gamma = gamma_from_slope(alpha, beta, psi_prime)
        return cls(
            alpha, beta, gamma, lyapunov_from_gamma(alpha, beta, gamma), psi_prime, method
        )


def generator(seed: int) -> np.random.Generator:
    """The counter-based Philox4x64 generator used for every random draw."""
    return np.random.Generator(np.random.Philox(seed))


def _uniform_open(rng, size):
    u = rng.random(size)
    # random() is on [0, 1); 0 would start on the fixed point
    while np.any(u == 0.0):
        u[u == 0.0] = rng.random(int(np.count_nonzero(u == 0.0)))
    return u


def estimate_gamma(
    tmap: SkewTentMap,
    n: int = DEFAULT_N,
    seed: int = DEFAULT_SEED,
    burn_in: int = DEFAULT_BURN_IN,
) -> GammaEstimate:
    """Fraction of ``n`` post-burn-in iterates in ``[0, alpha]`` (closed at alpha).

    The start ``x0`` is uniform on (0, 1) from :func:`generator`. In binary64 an
    orbit can land exactly on the fixed point 0 (every full-tent orbit does so
    within about 55 steps); such an orbit is restarted from a fresh uniform
    point and the step count carries on.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = generator(seed)
    x0 = float(_uniform_open(rng, 1)[0])
    total = burn_in + n
    x, i, count, restarts = x0, 0, 0, 0
    while True:
        pool = _uniform_open(rng, max(64, total // 32))
        c, i, x, used = kernels.birkhoff_count(
            tmap.alpha, tmap.beta, x, i, burn_in, total, pool, 0
        )
        count += c
        restarts += used
        if i >= total:
            break
    return GammaEstimate(count / n, n, seed, x0, restarts)


def lyapunov_from_gamma(alpha: float, beta: float, gamma: float) -> float:
    return gamma * math.log(beta / alpha) + (1.0 - gamma) * math.log(beta / (1.0 - alpha))


def slope_from_gamma(alpha: float, beta: float, gamma: float) -> float:
    return (gamma - alpha) * beta / (alpha * (1.0 - alpha))


def gamma_from_slope(alpha: float, beta: float, psi_prime: float) -> float:
    return alpha * (1.0 - alpha) * psi_prime / beta + alpha


def birkhoff_tangent(
    tmap: SkewTentMap,
    n: int = DEFAULT_N,
    seed: int = DEFAULT_SEED,
    burn_in: int = DEFAULT_BURN_IN,
) -> TangentEstimate:
    est = estimate_gamma(tmap, n, seed, burn_in)
    return TangentEstimate.from_gamma(tmap.alpha, tmap.beta, est.gamma, BIRKHOFF)
