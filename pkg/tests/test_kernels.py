import json
import os
import subprocess
import sys

import numpy as np
import pytest

from skewtent import kernels
from skewtent.raster import prefix_identifier

pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")

PY = kernels.python_kernels
NB = kernels.numba_kernels
PARAMS = [(0.3, 0.8), (0.49, 0.56), (0.5, 1.0), (0.6, 0.9), (0.5, (1 + 5**0.5) / 4)]


@pytest.mark.parametrize("alpha, beta", PARAMS)
def test_orbits_bit_identical(alpha, beta):
    for x in np.linspace(0.0, 1.0, 37):
        assert PY["step"](alpha, beta, x) == NB["step"](alpha, beta, x)
    a = PY["orbit_points"](alpha, beta, 0.1234, 2000, 50)
    b = NB["orbit_points"](alpha, beta, 0.1234, 2000, 50)
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("alpha, beta", PARAMS)
@pytest.mark.parametrize("c_tol", [0.0, 1e-12, 1e-6])
def test_kneading_codes_identical(alpha, beta, c_tol):
    ca, la = PY["kneading_codes"](alpha, beta, 300, c_tol)
    cb, lb = NB["kneading_codes"](alpha, beta, 300, c_tol)
    assert la == lb and ca[:la].tobytes() == cb[:lb].tobytes()
    assert int(PY["fnv1a"](ca, la)) == int(NB["fnv1a"](cb, lb))


@pytest.mark.parametrize("alpha, beta", PARAMS)
def test_birkhoff_count_identical(alpha, beta):
    pool = np.random.default_rng(0).random(256)
    args = (alpha, beta, 0.377, 0, 100, 20_000, pool, 0)
    assert PY["birkhoff_count"](*args) == NB["birkhoff_count"](*args)


def test_grid_backends_identical():
    a, b = np.meshgrid(np.linspace(0.01, 0.99, 41), np.linspace(0.501, 1.0, 23))
    for n in (1, 10, 60):
        ha, la = PY["kneading_grid"](a, b, n, 1e-12)
        hb, lb = NB["kneading_grid"](a, b, n, 1e-12)
        np.testing.assert_array_equal(ha, hb)
        np.testing.assert_array_equal(la, lb)


def test_grid_hash_matches_prefix_identifier():
    a, b = np.array([[0.5, 0.3]]), np.array([[(1 + 5**0.5) / 4, 0.8]])
    hashes, lengths = kernels.kneading_grid(a, b, 12, 1e-12)
    for (alpha, beta), h, n in zip(zip(a.ravel(), b.ravel()), hashes.ravel(), lengths.ravel()):
        codes, length = kernels.kneading_codes(alpha, beta, 12, 1e-12)
        text = codes[:length].tobytes().translate(bytes.maketrans(b"\x00\x01\x02", b"LCR")).decode()
        assert length == n
        assert int(h) & (2**63 - 1) == prefix_identifier(text)


def test_backend_flag():
    assert kernels.BACKEND == ("numba" if kernels.USE_NUMBA else "python")


def _run(flag):
    code = (
        "import json; from skewtent import kernels, SkewTentMap, estimate_gamma, kneading_raster, RasterConfig;"
        "m = SkewTentMap(0.49, 0.56); g = estimate_gamma(m, 20000, 3);"
        "img = kneading_raster(RasterConfig((0.0, 1.0), (0.5, 1.0), 40, 20, 10));"
        "print(json.dumps([kernels.BACKEND, g.gamma, g.x0, img.digest()]))"
    )
    env = dict(os.environ, SKEWTENT_DISABLE_JIT=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_env_flag_selects_backend_with_identical_results():
    jit = _run("0")
    plain = _run("1")
    assert jit[0] == "numba" and plain[0] == "python"
    assert jit[1:] == plain[1:]
