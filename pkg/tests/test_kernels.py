import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from complex_ou import _accel, kernels
from complex_ou.polynomial import random_polynomial

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def _terms(rng, n_terms, n_vars, max_exp=4):
    a = rng.integers(0, max_exp + 1, size=(n_terms, n_vars))
    b = rng.integers(0, max_exp + 1, size=(n_terms, n_vars))
    c = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return a.astype(np.int64), b.astype(np.int64), c


@needs_numba
@given(st.integers(0, 12), st.integers(1, 3), st.integers(1, 40), st.integers(0, 10_000))
def test_eval_terms_backends_agree(n_terms, n_vars, n_pts, seed):
    rng = np.random.default_rng(seed)
    a, b, c = _terms(rng, n_terms, n_vars)
    pts = rng.standard_normal((n_pts, n_vars)) + 1j * rng.standard_normal((n_pts, n_vars))
    x = kernels.eval_terms_numba(a, b, c, pts)
    y = kernels.eval_terms_numpy(a, b, c, pts)
    np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


def test_eval_terms_numpy_chunking(rng):
    a, b, c = _terms(rng, 5, 2)
    pts = rng.standard_normal((1000, 2)) + 0j
    np.testing.assert_allclose(kernels.eval_terms_numpy(a, b, c, pts, chunk=7),
                               kernels.eval_terms_numpy(a, b, c, pts), rtol=1e-14)


@needs_numba
@pytest.mark.parametrize("record", [False, True])
def test_linear_recursion_backends_agree(rng, record):
    z0 = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    g_re, g_im = rng.standard_normal((2, 25, 30))
    shape = (25, 30) if record else (0, 30)
    o1, o2 = np.empty(shape, complex), np.empty(shape, complex)
    f, s = np.exp(-0.1 - 0.05j), 0.3
    z1 = kernels.linear_recursion_numba(z0, f, s, g_re, g_im, o1)
    z2 = kernels.linear_recursion_numpy(z0, f, s, g_re, g_im, o2)
    np.testing.assert_allclose(z1, z2, rtol=1e-13)
    if record:
        np.testing.assert_allclose(o1, o2, rtol=1e-13)
        np.testing.assert_array_equal(o1[-1], z1)


def test_linear_recursion_does_not_mutate_start(rng):
    z0 = np.ones(4, complex)
    g = rng.standard_normal((3, 4))
    kernels.linear_recursion(z0, 0.5, 1.0, g, g)
    assert np.all(z0 == 1)


def test_linear_recursion_noise_free():
    z = kernels.linear_recursion(np.array([2.0 + 0j]), 0.5j, 1.0, np.zeros((3, 1)), np.zeros((3, 1)))
    assert z[0] == pytest.approx(2 * (0.5j) ** 3)


@needs_numba
@given(st.floats(0.1, 4.0), st.integers(0, 10_000))
def test_pow_moments_backends_agree(h, seed):
    rng = np.random.default_rng(seed)
    r2 = rng.exponential(2.0, size=(200, 3))
    r2[0, 0] = 0.0
    m1, s1 = kernels.pow_moments_numba(r2, h)
    m2, s2 = kernels.pow_moments_numpy(r2, h)
    np.testing.assert_allclose(m1, m2, rtol=1e-12)
    np.testing.assert_allclose(s1, s2, rtol=1e-12)


def test_abs_pow_moments_values():
    v = np.array([3 + 4j, 0j, 1j])
    m, s = kernels.abs_pow_moments(v, 2.0)
    assert m[0] == pytest.approx((25 + 0 + 1) / 3)
    assert s[0] == pytest.approx((625 + 0 + 1) / 3)


def test_dispatch_follows_flag(monkeypatch, rng):
    p = random_polynomial(rng, 2, 4)
    pts = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    monkeypatch.setattr(_accel, "USE_NUMBA", False)
    assert kernels.backend() == "numpy"
    y = p.evaluate_batch(pts)
    monkeypatch.setattr(_accel, "USE_NUMBA", _accel.HAVE_NUMBA)
    x = p.evaluate_batch(pts)
    np.testing.assert_allclose(x, y, rtol=1e-12)


@pytest.mark.parametrize("flag,want", [("0", "numpy"), ("off", "numpy"), ("1", None)])
def test_env_flag(flag, want):
    env = dict(os.environ, COMPLEX_OU_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from complex_ou import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    if want is None:
        want = "numba" if _accel.HAVE_NUMBA else "numpy"
    assert out == want
