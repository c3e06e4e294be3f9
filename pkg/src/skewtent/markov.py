"""Exact invariant densities for maps whose turning point is periodic.

When ``T^n(beta) = alpha`` the points ``0, alpha, beta, T(beta), ...,
T^(n-1)(beta), 1`` cut ``[0, 1]`` into cells that the map sends onto unions of
cells. The transfer (Frobenius-Perron) operator then maps piecewise-constant
densities to piecewise-constant densities through a finite matrix, and the
invariant density is its normalised fixed point.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .birkhoff import MARKOV_EXACT, TangentEstimate
from .errors import (
    MarkovViolationError,
    NegativeDensityError,
    NonUniqueDensityError,
)
from .map_core import SkewTentMap, in_region_U

DEFAULT_MAX_ITER = 100
DEFAULT_TOL = 1e-9
IMAGE_TOL = 1e-7
NULLSPACE_TOL = 1e-9


@dataclass(frozen=True)
class MarkovPartition:
    points: np.ndarray
    period: int
    alpha: float
    beta: float
    # cell i maps onto cells images[i][0] .. images[i][1] - 1
    images: tuple

    @property
    def size(self) -> int:
        return len(self.points) - 1

    @property
    def cell_lengths(self) -> np.ndarray:
        return np.diff(self.points)

    def cells(self):
        return list(zip(self.points[:-1], self.points[1:]))


@dataclass(frozen=True)
class TransferMatrix:
    matrix: np.ndarray
    cell_lengths: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PiecewiseDensity:
    partition: MarkovPartition
    values: np.ndarray

    def __call__(self, x):
        idx = np.clip(np.searchsorted(self.partition.points, x, side="right") - 1,
                      0, self.partition.size - 1)
        return self.values[idx]

    def to_csv(self, fh=None) -> str:
        """Rows ``cell_left, cell_right, value`` with a header."""
        buf = io.StringIO() if fh is None else fh
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["cell_left", "cell_right", "value"])
        for (a, b), v in zip(self.partition.cells(), self.values):
            writer.writerow([f"{a:.17g}", f"{b:.17g}", f"{v:.17g}"])
        return buf.getvalue() if fh is None else ""


def detect_markov(
    tmap: SkewTentMap, max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL
):
    """Minimal ``n <= max_iter`` with ``|T^n(beta) - alpha| <= tol``, else None."""
    return _period(tmap.alpha, tmap.beta, max_iter, tol)


def _period(alpha, beta, max_iter, tol):
    x = beta
    for n in range(1, max_iter + 1):
        x = kernels.step(alpha, beta, x)
        if abs(x - alpha) <= tol:
            return n
    return None


def closing_length(
    tmap: SkewTentMap, max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL
):
    """Smallest ``n`` such that ``T^n(beta)`` falls (within ``tol``) on one of
    ``0, alpha, 1, beta, ..., T^(n-1)(beta)``; None if the orbit does not close.

    Equals the period when the turning point is periodic, and also covers
    preperiodic cases such as the full tent, where ``T(1) = 0``.
    """
    alpha, beta = tmap.alpha, tmap.beta
    seen = [0.0, alpha, 1.0, beta]
    x = beta
    for n in range(1, max_iter + 1):
        x = kernels.step(alpha, beta, x)
        if min(abs(x - p) for p in seen) <= tol:
            return n
        seen.append(x)
    return None


def _snap(value, points, tol):
    i = int(np.argmin(np.abs(points - value)))
    if abs(points[i] - value) > tol:
        return None
    return i


def markov_partition(
    tmap: SkewTentMap, period: int, tol: float = DEFAULT_TOL
) -> MarkovPartition:
    """Partition by 0, alpha, the first ``period`` orbit points of beta, and 1.

    ``period`` is normally the value from :func:`detect_markov`; any orbit
    length from :func:`closing_length` works as well.

    Points closer than ``tol`` are merged. Each cell's image endpoints must land
    within ``IMAGE_TOL`` of partition points, otherwise
    :class:`MarkovViolationError` is raised.
    """
    alpha, beta = tmap.alpha, tmap.beta
    raw = [0.0, alpha, 1.0, beta]
    x = beta
    for _ in range(period - 1):
        x = kernels.step(alpha, beta, x)
        raw.append(x)
    pts = []
    for p in sorted(raw):
        if pts and p - pts[-1] <= tol:
            # keep the exact anchors 0, alpha, 1 over orbit approximations
            if p in (0.0, alpha, 1.0):
                pts[-1] = p
            continue
        pts.append(p)
    points = np.array(pts)
    images = []
    for left, right in zip(points[:-1], points[1:]):
        ends = [_snap(kernels.step(alpha, beta, e), points, IMAGE_TOL) for e in (left, right)]
        if None in ends:
            raise MarkovViolationError(
                f"image of cell ({left:.17g}, {right:.17g}) is not a union of cells"
            )
        lo, hi = sorted(ends)
        if lo == hi:
            raise MarkovViolationError(f"cell ({left:.17g}, {right:.17g}) collapses")
        images.append((lo, hi))
    return MarkovPartition(points, period, alpha, beta, tuple(images))


def transfer_matrix(tmap: SkewTentMap, partition: MarkovPartition) -> TransferMatrix:
    """Entry (i, j) is ``1/|T'|`` on cell j when T(cell j) covers cell i."""
    k = partition.size
    mat = np.zeros((k, k))
    for j, (left, _) in enumerate(partition.cells()):
        slope = tmap.lambda_slope if left < tmap.alpha else tmap.mu_slope
        lo, hi = partition.images[j]
        mat[lo:hi, j] = 1.0 / slope
    return TransferMatrix(mat, partition.cell_lengths)


def invariant_density(matrix: TransferMatrix, partition: MarkovPartition) -> PiecewiseDensity:
    """Normalised fixed point of the transfer matrix by a dense LU solve.

    One balance row of ``(M - I) v = 0`` is redundant (column sums weighted by
    cell length are preserved) and is replaced by ``sum v_i len_i = 1``.
    """
    mat = matrix.matrix
    lengths = matrix.cell_lengths
    k = mat.shape[0]
    system = mat - np.eye(k)
    sv = np.linalg.svd(system, compute_uv=False)
    nullity = int(np.sum(sv <= NULLSPACE_TOL * max(1.0, sv[0])))
    if nullity > 1:
        raise NonUniqueDensityError(f"fixed-point space has dimension {nullity}")
    row = int(np.argmax(lengths))
    system[row, :] = lengths
    rhs = np.zeros(k)
    rhs[row] = 1.0
    values = np.linalg.solve(system, rhs)
    if values.min() < -1e-9:
        raise NegativeDensityError(f"solved density has value {values.min():.3g}")
    values[values <= 0.0] = 0.0
    # narrow cores give large values; rescale away the solve's relative error
    values /= float(values @ lengths)
    return PiecewiseDensity(partition, values)


def gamma_exact(density: PiecewiseDensity, alpha: float) -> float:
    """Invariant mass of ``[0, alpha]``."""
    right = density.partition.points[1:]
    left_of = right <= alpha
    return float(np.sum(density.values[left_of] * density.partition.cell_lengths[left_of]))


def lyapunov_exact(tmap: SkewTentMap, density: PiecewiseDensity) -> TangentEstimate:
    gamma = gamma_exact(density, tmap.alpha)
    return TangentEstimate.from_gamma(tmap.alpha, tmap.beta, gamma, MARKOV_EXACT)


@dataclass(frozen=True)
class MarkovSolution:
    tmap: SkewTentMap
    partition: MarkovPartition
    matrix: TransferMatrix
    density: PiecewiseDensity
    tangent: TangentEstimate


def solve_markov(tmap: SkewTentMap, max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL):
    """Run the whole pipeline; None when the orbit of beta does not close."""
    period = detect_markov(tmap, max_iter, tol)
    if period is None:
        period = closing_length(tmap, max_iter, tol)
    if period is None:
        return None
    part = markov_partition(tmap, period, tol)
    mat = transfer_matrix(tmap, part)
    dens = invariant_density(mat, part)
    return MarkovSolution(tmap, part, mat, dens, lyapunov_exact(tmap, dens))


def _orbit_miss(alpha, beta, n):
    x = beta
    for _ in range(n):
        x = kernels.step(alpha, beta, x)
    return x - alpha


def markov_parameters(
    alpha: float,
    period: int,
    beta_range: tuple = (0.5, 1.0),
    samples: int = 4001,
    tol: float = DEFAULT_TOL,
):
    """Betas in ``beta_range`` with ``T^period(beta) = alpha`` at minimal ``period``.

    Roots of ``T^period(beta) - alpha`` (continuous in beta) are bracketed on a
    grid and bisected to machine precision; only roots whose minimal period is
    exactly ``period`` are kept.
    """
    lo = max(beta_range[0], 0.5, alpha, 1.0 - alpha)
    hi = min(beta_range[1], 1.0)
    if not lo < hi:
        return []
    grid = np.linspace(lo, hi, samples)[1:]
    vals = np.array([_orbit_miss(alpha, b, period) for b in grid])
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        a, b = grid[i], grid[i + 1]
        fa = vals[i]
        while True:
            mid = 0.5 * (a + b)
            if mid in (a, b):
                break
            fm = _orbit_miss(alpha, mid, period)
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        root = 0.5 * (a + b)
        if in_region_U(alpha, root) and _period(alpha, root, period, tol) == period:
            roots.append(float(root))
    return roots


def nearest_markov(
    alpha: float,
    beta: float,
    max_period: int = 20,
    window: float = 0.01,
    tol: float = DEFAULT_TOL,
):
    """The Markov parameter ``(alpha, beta')`` closest to ``beta`` within ``window``.

    Returns ``(beta', period)`` or None.
    """
    best = None
    for n in range(1, max_period + 1):
        for root in markov_parameters(alpha, n, (beta - window, beta + window), 801, tol):
            if best is None or abs(root - beta) < abs(best[0] - beta):
                best = (root, n)
    return best
