"""The alternating series whose zero set contains an isentrope.

For RL blocks ``m_k`` with running sums ``mbar_k``::

    theta(alpha, beta) = 1 - beta + sum_k (-1)^k rho^k q^mbar_k,
    rho = (1 - alpha) / beta,   q = alpha / beta.

Both ratios are below one inside the parameter region, so every term is bounded
by ``rho^k q^mbar_k`` and the tails admit explicit geometric bounds. Partial sums
are accumulated with :func:`math.fsum`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradientError, RegionError, ThetaTruncationError
from .kneading import (
    DEFAULT_C_TOL,
    DEFAULT_PREFIX_LEN,
    L_INFINITY,
    PERIODIC,
    TRUNCATED,
    RLBlocks,
    kneading_prefix,
    rl_blocks,
)
from .map_core import SkewTentMap, in_region_U

DEFAULT_TOL = 1e-12
MAX_TERMS = 10_000


@dataclass(frozen=True)
class ThetaEval:
    value: float
    tail_bound: float
    terms_used: int


@dataclass(frozen=True)
class ThetaGradient:
    d_alpha: float
    d_beta: float
    tail_bound: float
    terms_used: int


class _Series:
    """Terms of the series and tail bounds after each possible cut ``N``."""

    def __init__(self, blocks: RLBlocks, alpha, beta, max_terms, terms):
        if not in_region_U(alpha, beta):
            raise RegionError(f"({alpha!r}, {beta!r}) is not in U")
        self.alpha, self.beta = alpha, beta
        self.rho = (1.0 - alpha) / beta
        self.q = alpha / beta
        self.tail = blocks.tail
        limit = max_terms if terms is None else terms
        avail = blocks.finite_blocks
        n = limit if avail is None else min(limit, avail)
        self.complete = avail is not None and n == avail
        self.k = np.arange(1, n + 1, dtype=np.float64)
        self.mbar = np.asarray(blocks.cumulative(n), dtype=np.float64)
        # exponent of q known to hold for every term beyond a cut at N
        floor = np.concatenate(([0.0], self.mbar))
        if self.complete and blocks.tail == TRUNCATED:
            floor[-1] += blocks.partial
        self.mfloor = floor
        with np.errstate(under="ignore"):
            mag = np.exp(self.k * math.log(self.rho) + self.mbar * math.log(self.q))
        self.t = np.where(self.k % 2 == 1, -mag, mag)

    def _exact_tail(self):
        """True at the final cut when the remaining terms vanish identically."""
        mask = np.zeros(len(self.mfloor), dtype=bool)
        if self.complete and self.tail == L_INFINITY:
            mask[-1] = True
        return mask

    def value_bounds(self):
        cuts = np.arange(len(self.mfloor), dtype=np.float64)
        rho, q = self.rho, self.q
        with np.errstate(under="ignore"):
            bound = np.exp(self.mfloor * math.log(q) + (cuts + 1) * math.log(rho)) / (1 - rho)
        bound[self._exact_tail()] = 0.0
        return bound

    def gradient_bounds(self):
        cuts = np.arange(len(self.mfloor), dtype=np.float64)
        rho, q = self.rho, self.q
        log_q = math.log(q)
        with np.errstate(under="ignore"):
            s0 = np.exp((cuts + 1) * math.log(rho)) / (1 - rho)
            s1 = s0 * ((cuts + 1) - cuts * rho) / (1 - rho)
            qm = np.exp(self.mfloor * log_q)
        # sup of m q^m over m >= mfloor
        m_star = -1.0 / log_q
        peak = np.where(self.mfloor >= m_star, self.mfloor * qm, 1.0 / (math.e * -log_q))
        tail_a = qm * s1 / (1 - self.alpha) + peak * s0 / self.alpha
        tail_b = (qm * s1 + peak * s0) / self.beta
        bound = np.maximum(tail_a, tail_b)
        bound[self._exact_tail()] = 0.0
        return bound

    def cut(self, bounds, tol, forced):
        if forced:
            return len(bounds) - 1
        ok = np.flatnonzero(bounds <= tol)
        return int(ok[0]) if ok.size else len(bounds) - 1

    def check(self, bound, tol, strict, forced):
        if strict and not forced and self.tail == TRUNCATED and bound > tol:
            raise ThetaTruncationError(
                f"available blocks certify only {bound:.3g} > tol {tol:.3g}",
                achievable=bound,
            )


def theta_eval(
    blocks: RLBlocks,
    alpha: float,
    beta: float,
    tol: float = DEFAULT_TOL,
    *,
    max_terms: int = MAX_TERMS,
    terms: int | None = None,
    strict: bool = True,
) -> ThetaEval:
    """Partial sum of the series with a certified bound on the omitted tail.

    Sums the fewest terms whose tail bound is ``<= tol``. ``terms`` forces an
    exact term count instead. When the blocks are a truncated prefix and the
    bound cannot reach ``tol``, :class:`ThetaTruncationError` is raised unless
    ``strict`` is false, in which case the achievable bound is reported.
    When ``max_terms`` runs out on periodic data the result simply carries a
    bound above ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = _Series(blocks, alpha, beta, max_terms, terms)
    bounds = s.value_bounds()
    n = s.cut(bounds, tol, terms is not None)
    s.check(bounds[n], tol, strict, terms is not None)
    value = math.fsum([1.0, -beta, *s.t[:n].tolist()])
    return ThetaEval(value, float(bounds[n]), n)


def theta_partials(
    blocks: RLBlocks,
    alpha: float,
    beta: float,
    tol: float = DEFAULT_TOL,
    *,
    max_terms: int = MAX_TERMS,
    terms: int | None = None,
    strict: bool = True,
) -> ThetaGradient:
    """Term-wise derivatives of the series in ``alpha`` and ``beta``.

    Differentiating ``t_k = rho^k q^mbar_k`` gives
    ``t_k (mbar_k / alpha - k / (1 - alpha))`` and ``-t_k (k + mbar_k) / beta``.
    The tail bound uses ``sum k rho^k`` and ``sup m q^m`` majorants.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = _Series(blocks, alpha, beta, max_terms, terms)
    bounds = s.gradient_bounds()
    n = s.cut(bounds, tol, terms is not None)
    s.check(bounds[n], tol, strict, terms is not None)
    t, k, mbar = s.t[:n], s.k[:n], s.mbar[:n]
    d_alpha = math.fsum((t * (mbar / alpha - k / (1.0 - alpha))).tolist())
    d_beta = math.fsum([-1.0, *(-t * (k + mbar) / beta).tolist()])
    return ThetaGradient(d_alpha, d_beta, float(bounds[n]), n)


def implicit_slope(
    blocks: RLBlocks, alpha: float, beta: float, tol: float = DEFAULT_TOL
) -> float:
    """Slope of the zero set through ``(alpha, beta)``: ``-d_alpha / d_beta``.

    Truncated block data is used as far as it goes; the achieved bound only
    enters the degeneracy check on the denominator.
    """
    grad = theta_partials(blocks, alpha, beta, tol, strict=False)
    if abs(grad.d_beta) <= 10.0 * grad.tail_bound:
        raise DegenerateGradientError(
            f"|d_beta| = {abs(grad.d_beta):.3g} is within 10x the tail bound "
            f"{grad.tail_bound:.3g}"
        )
    return -grad.d_alpha / grad.d_beta


def blocks_for(
    tmap: SkewTentMap, prefix_len: int = DEFAULT_PREFIX_LEN, c_tol: float = DEFAULT_C_TOL
) -> RLBlocks:
    """RL blocks of the map's own kneading prefix."""
    return rl_blocks(kneading_prefix(tmap, prefix_len, c_tol))


def theta_slope(
    tmap: SkewTentMap,
    prefix_len: int = DEFAULT_PREFIX_LEN,
    c_tol: float = DEFAULT_C_TOL,
    tol: float = DEFAULT_TOL,
) -> float:
    """Isentrope slope at ``tmap`` from its own ``prefix_len``-symbol kneading data."""
    return implicit_slope(blocks_for(tmap, prefix_len, c_tol), tmap.alpha, tmap.beta, tol)
