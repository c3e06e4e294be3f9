"""Hot inner loops for skew tent map iteration.

Every kernel is written once as plain Python over scalars/arrays. When numba is
importable and ``SKEWTENT_DISABLE_JIT`` is unset (or ``0``), the public names in
this module are the ``@njit`` compiled versions; otherwise they are the plain
versions, and the raster kernel switches to a vectorised numpy implementation.

Both paths perform the same IEEE operations in the same order, so results are
bit-identical between backends.
"""

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_flag = os.environ.get("SKEWTENT_DISABLE_JIT", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _flag in ("", "0", "false", "no")

# symbol codes, ordered L < C < R
CODE_L = 0
CODE_C = 1
CODE_R = 2

FNV_OFFSET = np.uint64(0xCBF29CE484222325)
FNV_PRIME = np.uint64(0x100000001B3)


def _identity(fn):
    return fn


def _build(jit):
    """Build the scalar kernels, compiled with ``jit``."""

    @jit
    def step(alpha, beta, x):
        # ratio first: it is <= 1 after rounding, so T(alpha) == beta and T <= beta
        if x <= alpha:
            return beta * (x / alpha)
        return beta * ((1.0 - x) / (1.0 - alpha))

    @jit
    def orbit_points(alpha, beta, x0, n, burn_in):
        x = x0
        for _ in range(burn_in):
            x = step(alpha, beta, x)
        out = np.empty(n)
        for i in range(n):
            x = step(alpha, beta, x)
            out[i] = x
        return out

    @jit
    def kneading_codes(alpha, beta, n, c_tol):
        """Itinerary codes of the turning point; returns (codes, length)."""
        codes = np.empty(n, dtype=np.uint8)
        x = alpha
        for i in range(n):
            x = step(alpha, beta, x)
            if abs(x - alpha) <= c_tol:
                codes[i] = CODE_C
                return codes, i + 1
            codes[i] = CODE_L if x < alpha else CODE_R
        return codes, n

    @jit
    def birkhoff_count(alpha, beta, x, i, burn_in, total, pool, pool_pos):
        """Advance a Birkhoff run from step ``i`` towards ``total`` steps.

        Counts visits to ``[0, alpha]`` among steps ``>= burn_in``. An orbit
        sitting exactly on the fixed point 0 (the binary64 fate of every
        full-tent orbit) is restarted from the next value of ``pool``. Returns
        early when the pool runs out so the caller can refill it.

        Returns (count, i, x, pool_pos).
        """
        count = 0
        npool = pool.shape[0]
        while i < total:
            if x == 0.0:
                if pool_pos >= npool:
                    break
                x = pool[pool_pos]
                pool_pos += 1
                continue
            if i >= burn_in and x <= alpha:
                count += 1
            x = step(alpha, beta, x)
            i += 1
        return count, i, x, pool_pos

    @jit
    def fnv1a(codes, length):
        h = FNV_OFFSET
        for i in range(length):
            h = (h ^ np.uint64(codes[i])) * FNV_PRIME
        return h

    @jit
    def kneading_grid(alphas, betas, n, c_tol):
        """Per-pixel kneading hashes and lengths over a (H, W) grid."""
        rows, cols = alphas.shape
        hashes = np.empty((rows, cols), dtype=np.uint64)
        lengths = np.empty((rows, cols), dtype=np.int64)
        for r in range(rows):
            for c in range(cols):
                codes, length = kneading_codes(alphas[r, c], betas[r, c], n, c_tol)
                hashes[r, c] = fnv1a(codes, length)
                lengths[r, c] = length
        return hashes, lengths

    return {
        "step": step,
        "orbit_points": orbit_points,
        "kneading_codes": kneading_codes,
        "birkhoff_count": birkhoff_count,
        "fnv1a": fnv1a,
        "kneading_grid": kneading_grid,
    }


def _kneading_grid_numpy(alphas, betas, n, c_tol):
    alphas = np.asarray(alphas, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    x = alphas.copy()
    h = np.full(alphas.shape, FNV_OFFSET, dtype=np.uint64)
    lengths = np.full(alphas.shape, n, dtype=np.int64)
    live = np.ones(alphas.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            x = np.where(x <= alphas, betas * (x / alphas), betas * ((1.0 - x) / (1.0 - alphas)))
            code = np.where(
                np.abs(x - alphas) <= c_tol,
                CODE_C,
                np.where(x < alphas, CODE_L, CODE_R),
            ).astype(np.uint64)
            h = np.where(live, (h ^ code) * FNV_PRIME, h)
            hit = live & (code == CODE_C)
            lengths[hit] = i + 1
            live &= ~hit
            if not live.any():
                break
    return h, lengths


def _fnv1a_int(codes, length):
    h = int(FNV_OFFSET)
    for i in range(length):
        h = ((h ^ int(codes[i])) * int(FNV_PRIME)) & 0xFFFFFFFFFFFFFFFF
    return np.uint64(h)


python_kernels = _build(_identity)
python_kernels["fnv1a"] = _fnv1a_int
# per-pixel Python loops are too slow for images; vectorise across pixels
python_kernels["kneading_grid"] = _kneading_grid_numpy

if HAVE_NUMBA:
    numba_kernels = _build(numba.njit(cache=False, nogil=True))
else:  # pragma: no cover
    numba_kernels = {}

_active = numba_kernels if USE_NUMBA else python_kernels

step = _active["step"]
orbit_points = _active["orbit_points"]
kneading_codes = _active["kneading_codes"]
birkhoff_count = _active["birkhoff_count"]
kneading_grid = _active["kneading_grid"]

BACKEND = "numba" if USE_NUMBA else "python"
