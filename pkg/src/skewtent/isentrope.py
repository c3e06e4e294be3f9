"""Isentropes: curves ``beta = psi(alpha)`` of constant kneading sequence.

At fixed ``alpha`` the kneading sequence increases with ``beta`` in the
parity-lexicographic order, so ``psi(alpha)`` is found by bisecting on that
order against a reference sequence. The theta series of the reference is used
only afterwards, as a residual certificate and for the tangent slope.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateGradientError, DomainError, EmptyTraceError, NotBracketedError
from .kneading import (
    DEFAULT_C_TOL,
    DEFAULT_PREFIX_LEN,
    KneadingSequence,
    _itinerary,
    kneading_prefix,
    parity_lex_compare,
    rl_blocks,
)
from .map_core import SkewTentMap
from .theta import implicit_slope, theta_eval

DEFAULT_BETA_TOL = 1e-12
MAX_PREFIX_LEN = 1600
DEFAULT_ENDPOINT_TOL = 1e-4
# the excluded edge itself degenerates (beta = alpha gives "C"); probe inside it
EDGE_MARGIN = 1e-9

TOP_EDGE = "top-edge"
ANTI_DIAGONAL = "anti-diagonal"


@dataclass(frozen=True)
class IsentropePoint:
    alpha: float
    beta: float
    theta_residual: float
    slope: float
    bracket_width: float = 0.0
    prefix_len: int = DEFAULT_PREFIX_LEN


@dataclass(frozen=True)
class IsentropeTrace:
    reference_map: SkewTentMap
    points: tuple
    alpha_lo: float
    alpha_hi: float
    skipped: tuple = field(default=())

    @property
    def alphas(self):
        return np.array([p.alpha for p in self.points])

    @property
    def betas(self):
        return np.array([p.beta for p in self.points])

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO() if fh is None else fh
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "beta", "theta_residual", "slope"])
        for p in self.points:
            writer.writerow([f"{v:.17g}" for v in (p.alpha, p.beta, p.theta_residual, p.slope)])
        return buf.getvalue() if fh is None else ""

    def to_json(self) -> str:
        doc = {
            "reference": {"alpha": self.reference_map.alpha, "beta": self.reference_map.beta},
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "points": [asdict(p) for p in self.points],
            "skipped": list(self.skipped),
        }
        return json.dumps(doc, indent=2, allow_nan=True)


class Reference:
    """Kneading data of a reference map, extended on demand."""

    def __init__(self, tmap: SkewTentMap, prefix_len=DEFAULT_PREFIX_LEN, c_tol=DEFAULT_C_TOL):
        self.tmap = tmap
        self.prefix_len = prefix_len
        self.c_tol = c_tol
        self._seqs = {}
        self.sequence = self.at(prefix_len)
        self.blocks = rl_blocks(self.sequence)

    def at(self, length) -> KneadingSequence:
        if length not in self._seqs:
            self._seqs[length] = kneading_prefix(self.tmap, length, self.c_tol)
        return self._seqs[length]

    def compare(self, alpha, beta, length=None) -> int:
        """Order of K(alpha, beta) relative to the reference at ``length`` symbols."""
        length = self.prefix_len if length is None else length
        trial = _itinerary(alpha, beta, length, self.c_tol)
        return parity_lex_compare(trial, self.at(length))

    def point(self, alpha, beta, width, length) -> IsentropePoint:
        residual = theta_eval(self.blocks, alpha, beta, strict=False).value
        try:
            slope = implicit_slope(self.blocks, alpha, beta)
        except DegenerateGradientError:
            slope = math.nan
        return IsentropePoint(alpha, beta, residual, slope, width, length)


def beta_floor(alpha: float) -> float:
    """Lowest beta probed at ``alpha``: just inside the excluded region edge."""
    return max(0.5, 1.0 - alpha, alpha) + EDGE_MARGIN


def _bisect(cmp, lo, hi, tol, target):
    """Shrink [lo, hi] around the switch of ``cmp`` from ``< target`` side."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if cmp(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _solve(ref: Reference, alpha, beta_tol, bracket=None):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha = {alpha!r} is outside (0, 1)")
    length = ref.prefix_len
    if ref.compare(alpha, 1.0, length) == 0:
        return 1.0, 0.0, length
    floor = beta_floor(alpha)
    lo, hi = floor, 1.0
    if bracket is not None:
        blo, bhi = max(bracket[0], floor), min(bracket[1], 1.0)
        if blo < bhi and ref.compare(alpha, blo, length) < 0 < ref.compare(alpha, bhi, length):
            lo, hi = blo, bhi
    if lo == floor and ref.compare(alpha, floor, length) >= 0:
        raise NotBracketedError(f"no beta in ({floor:.17g}, 1] matches at alpha = {alpha!r}")
    while hi - lo > beta_tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        c = ref.compare(alpha, mid, length)
        while c == 0 and not ref.sequence.is_periodic and length < MAX_PREFIX_LEN:
            length *= 2
            c = ref.compare(alpha, mid, length)
        if c == 0:
            if not ref.sequence.is_periodic:
                # identical to MAX_PREFIX_LEN symbols: as good as binary64 resolves
                return mid, hi - lo, length
            # plateau of betas sharing the C-terminated sequence
            left, _ = _bisect(lambda b: ref.compare(alpha, b, length), lo, mid, beta_tol, 0)
            _, right = _bisect(lambda b: ref.compare(alpha, b, length), mid, hi, beta_tol, 1)
            return 0.5 * (left + right), right - left, length
        if c < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo, length


def solve_beta(
    reference: SkewTentMap,
    alpha: float,
    prefix_len: int = DEFAULT_PREFIX_LEN,
    beta_tol: float = DEFAULT_BETA_TOL,
    c_tol: float = DEFAULT_C_TOL,
) -> IsentropePoint:
    """The point of the reference isentrope above ``alpha``.

    Raises :class:`NotBracketedError` when the isentrope does not reach
    ``alpha``.
    """
    ref = reference if isinstance(reference, Reference) else Reference(reference, prefix_len, c_tol)
    beta, width, length = _solve(ref, alpha, beta_tol)
    return ref.point(alpha, beta, width, length)


def _warm_bracket(prev: IsentropePoint, alpha, slack):
    """Beta interval implied at ``alpha > prev.alpha`` by the Lipschitz bounds."""
    a0, b0 = prev.alpha, prev.beta
    lo = b0 * (1.0 - alpha) / (1.0 - a0)
    hi = b0 + b0 * (alpha - a0) / a0
    return lo - slack, hi + slack


def trace_isentrope(
    reference: SkewTentMap,
    alpha_lo: float,
    alpha_hi: float,
    steps: int,
    prefix_len: int = DEFAULT_PREFIX_LEN,
    beta_tol: float = DEFAULT_BETA_TOL,
    c_tol: float = DEFAULT_C_TOL,
) -> IsentropeTrace:
    """Solve on ``steps`` equally spaced alphas; unreachable alphas are skipped."""
    if not alpha_lo < alpha_hi:
        raise ValueError("alpha_lo must be below alpha_hi")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    ref = Reference(reference, prefix_len, c_tol)
    points, skipped = [], []
    prev = None
    for alpha in np.linspace(alpha_lo, alpha_hi, steps):
        alpha = float(alpha)
        bracket = _warm_bracket(prev, alpha, 10 * beta_tol) if prev is not None else None
        try:
            beta, width, length = _solve(ref, alpha, beta_tol, bracket)
        except (NotBracketedError, DomainError):
            skipped.append(alpha)
            prev = None
            continue
        prev = ref.point(alpha, beta, width, length)
        points.append(prev)
    if not points:
        raise EmptyTraceError("no grid alpha reaches the isentrope")
    return IsentropeTrace(reference, tuple(points), alpha_lo, alpha_hi, tuple(skipped))


def secant_bounds_ok(trace: IsentropeTrace, slack: float = 0.0) -> list:
    """Per segment, whether the secant obeys the one-sided Lipschitz bounds.

    For consecutive points ``p < q``: ``secant <= p.beta / p.alpha`` and
    ``secant >= -q.beta / (1 - q.alpha)``.
    """
    out = []
    for p, q in zip(trace.points[:-1], trace.points[1:]):
        s = (q.beta - p.beta) / (q.alpha - p.alpha)
        pad = slack + (p.bracket_width + q.bracket_width) / (q.alpha - p.alpha)
        out.append(-q.beta / (1.0 - q.alpha) - pad <= s <= p.beta / p.alpha + pad)
    return out


@dataclass(frozen=True)
class DomainEndpoints:
    alpha_1: float
    alpha_2: float
    status: str
    lower_bracket: tuple
    upper_bracket: tuple
    beta_at_alpha_1: float
    beta_at_alpha_2: float
    lower_limit: str
    predicted_lower_limit: str


def _solvable(ref: Reference, alpha) -> bool:
    if not 0.0 < alpha < 1.0:
        return False
    if ref.compare(alpha, 1.0) == 0:
        return True
    return ref.compare(alpha, beta_floor(alpha)) < 0


def _expand(ref, start, direction, tol):
    """Walk from ``start`` until solvability fails; returns (inside, outside, hit_edge)."""
    edge = tol / 2 if direction < 0 else 1.0 - tol / 2
    inside, step = start, 1.0 / 64
    while True:
        trial = inside + direction * step
        if (trial - edge) * direction >= 0:
            trial = edge
        if not _solvable(ref, trial):
            outside = trial
            break
        inside = trial
        if trial == edge:
            return inside, None, True
        step *= 2
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if _solvable(ref, mid):
            inside = mid
        else:
            outside = mid
    return inside, outside, False


def domain_endpoints(
    reference: SkewTentMap,
    prefix_len: int = DEFAULT_PREFIX_LEN,
    tol: float = DEFAULT_ENDPOINT_TOL,
    c_tol: float = DEFAULT_C_TOL,
) -> DomainEndpoints:
    """Bracket the alpha-extent of the reference isentrope.

    Steps outward by doubling increments, then bisects on solvability. The
    lower limit is classified from the observed beta there: ``top-edge`` when
    the curve runs up to beta = 1 (status ``exact-edge``, the limit is known
    exactly), ``anti-diagonal`` otherwise (status ``bracketed``). The
    classification predicted by comparing the reference with ``R L R^inf`` is
    reported alongside.
    """
    ref = Reference(reference, prefix_len, c_tol)
    a0 = reference.alpha
    lo_in, lo_out, _ = _expand(ref, a0, -1, tol)
    hi_in, hi_out, _ = _expand(ref, a0, +1, tol)
    beta_lo = _solve(ref, lo_in, DEFAULT_BETA_TOL)[0]
    beta_hi = _solve(ref, hi_in, DEFAULT_BETA_TOL)[0]
    to_top = 1.0 - beta_lo
    to_diag = beta_lo - (1.0 - lo_in)
    observed = TOP_EDGE if to_top <= to_diag else ANTI_DIAGONAL
    rlr = "RL" + "R" * max(prefix_len - 2, 1)
    predicted = TOP_EDGE if parity_lex_compare(ref.sequence, rlr) >= 0 else ANTI_DIAGONAL
    return DomainEndpoints(
        alpha_1=lo_in,
        alpha_2=hi_in,
        status="exact-edge" if observed == TOP_EDGE else "bracketed",
        lower_bracket=(lo_out, lo_in),
        upper_bracket=(hi_in, hi_out),
        beta_at_alpha_1=beta_lo,
        beta_at_alpha_2=beta_hi,
        lower_limit=observed,
        predicted_lower_limit=predicted,
    )
