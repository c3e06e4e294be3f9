"""Skew tent maps: kneading sequences, isentropes and Lyapunov exponents."""

from .birkhoff import (
    GammaEstimate,
    TangentEstimate,
    birkhoff_tangent,
    estimate_gamma,
    gamma_from_slope,
    lyapunov_from_gamma,
    slope_from_gamma,
)
from .errors import (
    DegenerateGradientError,
    DomainError,
    EmptyTraceError,
    MalformedSequenceError,
    MarkovViolationError,
    NegativeDensityError,
    NonUniqueDensityError,
    NotBracketedError,
    RegionError,
    SkewTentError,
    ThetaTruncationError,
)
from .isentrope import (
    DomainEndpoints,
    IsentropePoint,
    IsentropeTrace,
    Reference,
    domain_endpoints,
    solve_beta,
    trace_isentrope,
)
from .kneading import KneadingSequence, RLBlocks, kneading_prefix, parity_lex_compare, rl_blocks
from .map_core import SkewTentMap, branch_slopes, dynamical_core, eval_map, in_region_U, orbit
from .markov import (
    MarkovPartition,
    PiecewiseDensity,
    TransferMatrix,
    detect_markov,
    invariant_density,
    lyapunov_exact,
    markov_partition,
    solve_markov,
    transfer_matrix,
)
from .raster import Overlay, RasterConfig, kneading_raster, render_overlay
from .theta import implicit_slope, theta_eval, theta_partials, theta_slope

__version__ = "0.1.0"
