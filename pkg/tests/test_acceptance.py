"""Acceptance criteria 1-7, each at its stated tolerance.

Every criterion prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary. Run standalone with ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from oracles import GOLDEN_BETA, LOG_PHI, SLOW_ROW, REFERENCE_ROWS
from skewtent import (
    SkewTentMap,
    detect_markov,
    estimate_gamma,
    gamma_from_slope,
    implicit_slope,
    kneading_prefix,
    kneading_raster,
    RasterConfig,
    rl_blocks,
    slope_from_gamma,
    solve_markov,
    theta_eval,
    theta_partials,
    trace_isentrope,
)
from skewtent.isentrope import secant_bounds_ok
from skewtent.markov import markov_parameters
from skewtent.theta import theta_slope

N = 200_000
SEED = 0
RESULTS = {}


def report(key, ok, detail):
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'} | {detail}"
    RESULTS[key] = line
    print(line)
    return ok


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module", autouse=True)
def warm_up():
    # compile the kernels once so per-row timings measure the computation
    estimate_gamma(SkewTentMap(0.3, 0.8), 1000, 0)
    kneading_prefix(SkewTentMap(0.3, 0.8), 10)


def gamma_rows():
    rows = []
    for alpha, beta, gamma, *_ in REFERENCE_ROWS:
        est, dt = timed(estimate_gamma, SkewTentMap(alpha, beta), N, SEED)
        rows.append((alpha, beta, est.gamma, gamma, dt))
    return rows


def theta_rows():
    rows = []
    for alpha, beta, *_, ref in REFERENCE_ROWS:
        slope, dt = timed(theta_slope, SkewTentMap(alpha, beta), 200)
        rows.append((alpha, beta, slope, ref, dt))
    return rows


def test_criterion_1_gamma_table():
    rows = gamma_rows()
    bad = [(a, b, round(g, 5), p) for a, b, g, p, dt in rows if abs(g - p) > 5e-3 or dt >= 1.0]
    worst = max(abs(g - p) for _, _, g, p, _ in rows)
    slowest = max(dt for *_, dt in rows)
    assert report(1, not bad, f"max |gamma - reference| = {worst:.2e} (tol 5e-3), slowest row {slowest:.3f}s; misses {bad}")


def test_criterion_2_theta_table():
    rows = theta_rows()
    bad = []
    for alpha, beta, slope, ref, dt in rows:
        tol = 2e-2 if (alpha, beta) == SLOW_ROW else 5e-3
        if abs(slope - ref) > tol or dt >= 1.0:
            bad.append(f"({alpha}, {beta}): {slope:.6f} vs {ref} |diff| {abs(slope - ref):.4f} > {tol}")
    slowest = max(dt for *_, dt in rows)
    assert report(2, not bad, f"slowest row {slowest:.3f}s; misses {bad}")


def test_criterion_3_cross_method():
    bad, gaps = [], []
    for alpha, beta, *_ in REFERENCE_ROWS:
        m = SkewTentMap(alpha, beta)
        gap = abs(slope_from_gamma(alpha, beta, estimate_gamma(m, N, SEED).gamma) - theta_slope(m, 200))
        tol = 0.03 if (alpha, beta) == SLOW_ROW else 0.01
        gaps.append(gap)
        if gap > tol:
            bad.append((alpha, beta, gap))
    assert report(3, not bad, f"max discrepancy {max(gaps):.2e}; misses {bad}")


def test_criterion_4_golden():
    m = SkewTentMap(0.5, GOLDEN_BETA)
    period = detect_markov(m)
    sol = solve_markov(m)
    lam_err = abs(sol.tangent.lambda_exponent - LOG_PHI)
    gamma_gap = abs(sol.tangent.gamma - estimate_gamma(m, N, SEED).gamma)
    residual = abs(theta_eval(rl_blocks(kneading_prefix(m, 200)), m.alpha, m.beta).value)
    ok = period == 2 and lam_err <= 1e-6 and gamma_gap <= 2e-3 and residual < 1e-8
    assert report(
        4, ok,
        f"period {period}, |Lambda - log phi| {lam_err:.1e}, |gamma exact - Birkhoff| {gamma_gap:.1e}, "
        f"|Theta| {residual:.1e}",
    )


def test_criterion_5_full_tent():
    sol = solve_markov(SkewTentMap(0.5, 1.0))
    v = sol.density.values
    ok = (
        np.all(v == 1.0)
        and sol.tangent.gamma == 0.5
        and abs(sol.tangent.lambda_exponent - math.log(2)) <= 1e-12
        and sol.tangent.psi_prime == 0.0
    )
    assert report(
        5, ok,
        f"density {v.tolist()}, gamma {sol.tangent.gamma!r}, Lambda - log 2 = "
        f"{sol.tangent.lambda_exponent - math.log(2):.1e}, Psi' {sol.tangent.psi_prime!r}",
    )


def random_markov_maps(count, rng):
    out = []
    while len(out) < count:
        alpha = rng.uniform(0.2, 0.8)
        roots = markov_parameters(alpha, int(rng.integers(2, 9)))
        if roots:
            out.append(SkewTentMap(alpha, roots[int(rng.integers(len(roots)))]))
    return out


def random_points(count, rng, margin=0.01):
    pts = []
    while len(pts) < count:
        beta = rng.uniform(0.5 + margin, 1.0 - margin)
        alpha = rng.uniform(1.0 - beta + margin, beta - margin)
        if alpha < beta - margin:
            pts.append((alpha, beta))
    return pts


def check_6a(maps):
    worst = 0.0
    for m in maps:
        seq = kneading_prefix(m, 200, 1e-9)
        if not seq.is_periodic:
            return False, f"no C found at ({m.alpha}, {m.beta})"
        worst = max(worst, abs(theta_eval(rl_blocks(seq), m.alpha, m.beta, 1e-10).value))
    return worst < 1e-8, f"max |Theta| {worst:.1e}"


def check_6bc(maps):
    worst_int = worst_fix = 0.0
    nonneg = True
    for m in maps:
        sol = solve_markov(m)
        mat, lengths = sol.matrix.matrix, sol.matrix.cell_lengths
        worst_int = max(worst_int, float(np.max(np.abs(lengths @ mat - lengths))))
        v = sol.density.values
        worst_fix = max(worst_fix, float(np.max(np.abs(mat @ v - v))))
        nonneg &= bool(np.all(v >= 0.0))
    return (worst_int <= 1e-12, f"max integral defect {worst_int:.1e}"), (
        worst_fix <= 1e-10 and nonneg, f"max fixed-point defect {worst_fix:.1e}, nonnegative {nonneg}"
    )


def check_6d(points):
    h = 1e-6
    worst = 0.0
    for alpha, beta in points:
        blocks = rl_blocks(kneading_prefix(SkewTentMap(alpha, beta), 200))
        g = theta_partials(blocks, alpha, beta, strict=False)
        f = lambda a, b: theta_eval(blocks, a, b, strict=False).value  # noqa: E731
        fa = (f(alpha + h, beta) - f(alpha - h, beta)) / (2 * h)
        fb = (f(alpha, beta + h) - f(alpha, beta - h)) / (2 * h)
        tol = max(1e-5, 100 * g.tail_bound)
        worst = max(worst, abs(g.d_alpha - fa) / tol, abs(g.d_beta - fb) / tol)
    return worst <= 1.0, f"max error / tolerance {worst:.2e}"


def traces(rng):
    out = []
    for alpha, beta in [(0.3, 0.8), (0.5, 0.7), (0.6, 0.9), (0.5, GOLDEN_BETA)] + random_points(4, rng, 0.05):
        out.append(trace_isentrope(SkewTentMap(alpha, beta), alpha - 0.05, alpha + 0.05, 11))
    return out


def check_6e(trs):
    segments = [ok for t in trs for ok in secant_bounds_ok(t)]
    return all(segments), f"{sum(segments)}/{len(segments)} segments inside the bounds"


def check_6f(rng):
    alpha_beta = random_points(1000, rng, 1e-6)
    worst = max(
        abs(gamma_from_slope(a, b, slope_from_gamma(a, b, g)) - g)
        for (a, b), g in zip(alpha_beta, rng.uniform(0.0, 1.0, 1000))
    )
    return worst <= 1e-12, f"max round-trip error {worst:.1e}"


def check_6g(rng):
    images = 0
    for n, k in [(4, 2), (6, 3), (8, 2), (10, 5)]:
        coarse = kneading_raster(RasterConfig((0.0, 1.0), (0.5, 1.0), 128, 64, n)).ids
        fine = kneading_raster(RasterConfig((0.0, 1.0), (0.5, 1.0), 128, 64, n + k)).ids
        classes = [np.argwhere(fine == i) for i in np.unique(fine[fine >= 0])]
        classes = [c for c in classes if len(c) > 1]
        for _ in range(10):
            cls = classes[rng.integers(len(classes))]
            p, q = cls[rng.choice(len(cls), 2, replace=False)]
            if coarse[tuple(p)] != coarse[tuple(q)]:
                return False, f"pair {p}, {q} merged at prefix {n + k} but split at {n}"
        images += 1
    return True, f"{images} images x 10 pairs"


def check_slope_consistency(trs):
    worst = 0.0
    for t in trs:
        step = (t.alpha_hi - t.alpha_lo) / 10
        for prev, p, nxt in zip(t.points, t.points[1:], t.points[2:]):
            secant = (nxt.beta - prev.beta) / (nxt.alpha - prev.alpha)
            worst = max(worst, abs(p.slope - secant) / max(1e-2, 5 * step))
    return worst <= 1.0, f"max slope-secant gap / tolerance {worst:.2e}"


@pytest.fixture(scope="module")
def property_data():
    rng = np.random.default_rng(2024)
    maps = random_markov_maps(50, rng)
    return rng, maps, traces(rng)


def test_criterion_6_properties(property_data):
    rng, maps, trs = property_data
    parts = {"a": check_6a(maps)}
    parts["b"], parts["c"] = check_6bc(maps)
    parts["d"] = check_6d(random_points(100, rng))
    parts["e"] = check_6e(trs)
    parts["f"] = check_6f(rng)
    parts["g"] = check_6g(rng)
    ok = all(v[0] for v in parts.values())
    detail = "; ".join(f"({k}) {'ok' if v[0] else 'FAIL'} {v[1]}" for k, v in parts.items())
    assert report(6, ok, detail)


def test_criterion_7_non_reproducible_content(property_data):
    _, _, trs = property_data
    bounds_ok, bounds_detail = check_6e(trs)
    slope_ok, slope_detail = check_slope_consistency(trs)
    assert report(
        7, bounds_ok and slope_ok,
        f"proofs are not experiments; covered by secant bounds ({bounds_detail}) and "
        f"slope consistency ({slope_detail})",
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
