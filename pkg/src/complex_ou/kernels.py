"""Hot loops: batched polynomial evaluation, linear OU stepping, |v|^q moments.

Each kernel has a loop version compiled with numba and a vectorised numpy
version with the same signature. The public names dispatch on
``_accel.USE_NUMBA``, except :func:`pow_moments`, which always uses numpy
because it measured faster. Both variants stay importable for benchmarking
and cross-checking.
"""
import numpy as np

from . import _accel
from ._accel import njit

__all__ = [
    "eval_terms", "linear_recursion", "abs_pow_moments",
    "eval_terms_numba", "eval_terms_numpy",
    "linear_recursion_numba", "linear_recursion_numpy",
    "pow_moments", "pow_moments_numba", "pow_moments_numpy",
    "backend",
]


@njit
def eval_terms_numba(exps_a, exps_b, coeffs, points):
    n_pts, n_vars = points.shape
    n_terms = coeffs.shape[0]
    out = np.zeros(n_pts, dtype=np.complex128)
    if n_terms == 0:
        return out
    max_a = 0
    max_b = 0
    for t in range(n_terms):
        for j in range(n_vars):
            if exps_a[t, j] > max_a:
                max_a = exps_a[t, j]
            if exps_b[t, j] > max_b:
                max_b = exps_b[t, j]
    zp = np.empty((n_vars, max_a + 1), dtype=np.complex128)
    wp = np.empty((n_vars, max_b + 1), dtype=np.complex128)
    for i in range(n_pts):
        for j in range(n_vars):
            z = points[i, j]
            w = z.conjugate()
            zp[j, 0] = 1.0
            for k in range(1, max_a + 1):
                zp[j, k] = zp[j, k - 1] * z
            wp[j, 0] = 1.0
            for k in range(1, max_b + 1):
                wp[j, k] = wp[j, k - 1] * w
        acc = 0.0 + 0.0j
        for t in range(n_terms):
            m = coeffs[t]
            for j in range(n_vars):
                ea = exps_a[t, j]
                eb = exps_b[t, j]
                if ea:
                    m *= zp[j, ea]
                if eb:
                    m *= wp[j, eb]
            acc += m
        out[i] = acc
    return out


def eval_terms_numpy(exps_a, exps_b, coeffs, points, chunk=16384):
    points = np.asarray(points, dtype=np.complex128)
    n_pts, n_vars = points.shape
    out = np.zeros(n_pts, dtype=np.complex128)
    if coeffs.shape[0] == 0:
        return out
    max_a = int(exps_a.max())
    max_b = int(exps_b.max())
    for lo in range(0, n_pts, chunk):
        z = points[lo:lo + chunk].T  # (n_vars, c)
        zp = np.ones((n_vars, max_a + 1, z.shape[1]), dtype=np.complex128)
        wp = np.ones((n_vars, max_b + 1, z.shape[1]), dtype=np.complex128)
        for k in range(1, max_a + 1):
            zp[:, k] = zp[:, k - 1] * z
        zc = z.conj()
        for k in range(1, max_b + 1):
            wp[:, k] = wp[:, k - 1] * zc
        acc = np.zeros(z.shape[1], dtype=np.complex128)
        for t in range(coeffs.shape[0]):
            m = np.full(z.shape[1], coeffs[t])
            for j in range(n_vars):
                m = m * zp[j, exps_a[t, j]] * wp[j, exps_b[t, j]]
            acc += m
        out[lo:lo + chunk] = acc
    return out


@njit
def linear_recursion_numba(z0, factor, scale, g_re, g_im, out):
    # z <- factor * z + scale * (g_re + i g_im), one row of noise per step
    # steps outer so the noise rows are read contiguously
    n_steps, n_paths = g_re.shape
    z = z0.copy()
    record = out.shape[0] > 0
    for s in range(n_steps):
        for p in range(n_paths):
            z[p] = factor * z[p] + scale * (g_re[s, p] + 1j * g_im[s, p])
        if record:
            out[s] = z
    return z


def linear_recursion_numpy(z0, factor, scale, g_re, g_im, out):
    z = np.array(z0, dtype=np.complex128, copy=True)
    record = out.shape[0] > 0
    for s in range(g_re.shape[0]):
        z = factor * z + scale * (g_re[s] + 1j * g_im[s])
        if record:
            out[s] = z
    return z


@njit
def pow_moments_numba(r2, h):
    n, k = r2.shape
    mean = np.zeros(k)
    meansq = np.zeros(k)
    for i in range(n):
        for j in range(k):
            x = r2[i, j]
            v = x ** h if x > 0.0 else 0.0
            mean[j] += v
            meansq[j] += v * v
    return mean / n, meansq / n


def pow_moments_numpy(r2, h):
    v = r2 ** h
    return v.mean(axis=0), (v * v).mean(axis=0)


def backend():
    return "numba" if _accel.USE_NUMBA else "numpy"


def eval_terms(exps_a, exps_b, coeffs, points):
    """Evaluate ``sum_t c_t prod_j z_j^a_tj conj(z_j)^b_tj`` at each row of ``points``."""
    exps_a = np.ascontiguousarray(exps_a, dtype=np.int64)
    exps_b = np.ascontiguousarray(exps_b, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    if _accel.USE_NUMBA:
        return eval_terms_numba(exps_a, exps_b, coeffs, points)
    return eval_terms_numpy(exps_a, exps_b, coeffs, points)


def linear_recursion(z0, factor, scale, g_re, g_im, record=False):
    """Run ``z <- factor*z + scale*(g_re + i g_im)`` over the rows of the noise.

    Returns the final state, and the (n_steps, n_paths) trajectory when
    ``record`` is set.
    """
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    g_re = np.ascontiguousarray(g_re, dtype=np.float64)
    g_im = np.ascontiguousarray(g_im, dtype=np.float64)
    shape = (g_re.shape[0], z0.shape[0]) if record else (0, z0.shape[0])
    out = np.empty(shape, dtype=np.complex128)
    fn = linear_recursion_numba if _accel.USE_NUMBA else linear_recursion_numpy
    z = fn(z0, complex(factor), float(scale), g_re, g_im, out)
    return (z, out) if record else z


def pow_moments(r2, h):
    """Column means of ``r2^h`` and ``r2^(2h)`` for a 2-d array of squared moduli."""
    r2 = np.ascontiguousarray(r2, dtype=np.float64)
    if r2.ndim == 1:
        r2 = r2[:, None]
    # numpy's vectorised pow beats the compiled loop here (see benchmarks/),
    # so this kernel ignores the backend flag
    return pow_moments_numpy(r2, float(h))


def abs_pow_moments(values, q):
    """Column means of ``|v|^q`` and ``|v|^(2q)`` for complex values."""
    values = np.asarray(values, dtype=np.complex128)
    return pow_moments(values.real ** 2 + values.imag ** 2, 0.5 * q)
