"""The nonsymmetric OU semigroup, computed spectrally and by the Mehler formula.

Spectral route: each chaos component of order ``(m, n)`` is multiplied by
``exp(-[(m+n) cos + i (m-n) sin] t)``.

Mehler route: ``T_t f(x) = E f(e^{-alpha t} x + sqrt(1 - e^{-2 t cos}) Y)`` with
``Y`` standard complex Gaussian and ``alpha = e^{i theta}``. On polynomials the
expectation is done termwise with the Gaussian moments (``exact``), or
numerically by tensor quadrature or Monte Carlo.
"""
from math import comb, factorial
import cmath
import math

import numpy as np

from .chaos import ChaosExpansion, expand, hermite_product, iter_indices
from .generator import _as_params, apply_generator, eigenvalue
from .hermite import (ComplexGaussianMeasure, gauss_hermite_grid,
                      gaussian_expectation)
from .montecarlo import McEstimate, make_rng
from .polynomial import WirtingerPolynomial

__all__ = [
    "multiplier", "spectral_semigroup", "semigroup_polynomial",
    "mehler_polynomial", "mehler_apply", "mehler_apply_mc",
    "chapman_kolmogorov_check", "invariance_check", "invariance_check_mc",
    "eigen_residuals", "INTEGRATORS",
]

INTEGRATORS = ("exact", "quadrature", "monte-carlo")


def _check_t(t):
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")


def multiplier(m, n, t, params):
    """Spectral factor for chaos order ``(m, n)``; underflows to 0 for large ``t``."""
    return cmath.exp(-eigenvalue(m, n, params) * t)


def spectral_semigroup(e, t, params):
    """``T_t`` on a :class:`ChaosExpansion`."""
    _check_t(t)
    if t == 0:
        return ChaosExpansion(e.n_vars, dict(e.raw))
    p = _as_params(params)
    cache = {}

    def scale(k, v):
        o = k.order
        if o not in cache:
            cache[o] = multiplier(o[0], o[1], t, p)
        return v * cache[o]

    return e.map(scale)


def semigroup_polynomial(f, t, params, route="spectral"):
    """``T_t f`` as a polynomial via ``route`` in {"spectral", "mehler"}."""
    if route == "spectral":
        return spectral_semigroup(expand(f), t, params).reconstruct()
    if route == "mehler":
        return mehler_polynomial(f, t, params)
    raise ValueError(f"unknown route {route!r}")


def _mehler_factors(t, p):
    c = cmath.exp(-p.alpha * t)
    s2 = -math.expm1(-2 * t * p.r)
    return c, s2


def _coordinate_average(a, b, c, s2):
    # E_Y (c x + s Y)^a conj(c x + s Y)^b = sum_i C(a,i) C(b,i) 2^i i! s^2i c^(a-i) conj(c)^(b-i) x^(a-i) conj(x)^(b-i)
    out = []
    cb = c.conjugate()
    for i in range(min(a, b) + 1):
        w = comb(a, i) * comb(b, i) * 2 ** i * factorial(i) * s2 ** i * c ** (a - i) * cb ** (b - i)
        out.append((a - i, b - i, w))
    return out


def mehler_polynomial(f, t, params):
    """``T_t f`` by substituting the Mehler change of variables and integrating
    the noise out with exact Gaussian moments. Independent of the chaos route."""
    _check_t(t)
    if t == 0:
        return f
    p = _as_params(params)
    c, s2 = _mehler_factors(t, p)
    n = f.n_vars
    out = {}
    for (a, b), coef in f.terms.items():
        partial = [((), (), complex(coef))]
        for j in range(n):
            nxt = []
            for pa, pb, w in partial:
                for ea, eb, v in _coordinate_average(a[j], b[j], c, s2):
                    nxt.append((pa + (ea,), pb + (eb,), w * v))
            partial = nxt
        for pa, pb, w in partial:
            k = (pa, pb)
            out[k] = out.get(k, 0) + w
    return WirtingerPolynomial(n, out)


def _shifted_points(x, t, p, y):
    c, s2 = _mehler_factors(t, p)
    return c * np.asarray(x, dtype=complex)[None, :] + math.sqrt(s2) * y


def mehler_apply(f, x, t, params, integrator="exact", *, grid_size=None,
                 n_samples=100_000, seed=0):
    """``(T_t f)(x)`` by the Mehler formula.

    ``integrator`` is ``"exact"`` (termwise Gaussian moments), ``"quadrature"``
    (tensor Gauss-Hermite, ``grid_size`` nodes per axis) or ``"monte-carlo"``
    (``n_samples`` draws from ``seed``; use :func:`mehler_apply_mc` for the
    standard error).
    """
    _check_t(t)
    p = _as_params(params)
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    if x.shape != (f.n_vars,):
        raise ValueError(f"x must have length {f.n_vars}")
    if integrator == "exact":
        return mehler_polynomial(f, t, p)(x)
    if integrator == "quadrature":
        if grid_size is None:
            grid_size = max(f.degree, 0) // 2 + 1
        if grid_size < 1:
            raise ValueError("empty quadrature grid")
        nodes, w = gauss_hermite_grid(f.n_vars, grid_size)
        return complex(np.dot(w, f.evaluate_batch(_shifted_points(x, t, p, nodes))))
    if integrator == "monte-carlo":
        return mehler_apply_mc(f, x, t, p, n_samples=n_samples, seed=seed).value
    raise ValueError(f"unknown integrator {integrator!r}; expected one of {INTEGRATORS}")


def mehler_apply_mc(f, x, t, params, n_samples=100_000, seed=0):
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    _check_t(t)
    p = _as_params(params)
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    y = ComplexGaussianMeasure(f.n_vars).sample(n_samples, make_rng(seed))
    return McEstimate.from_samples(f.evaluate_batch(_shifted_points(x, t, p, y)))


def _scale(*values):
    return max([1.0] + [abs(v) for v in values])


def chapman_kolmogorov_check(f, x, s, t, params):
    """Relative residual ``|T_s(T_t f)(x) - T_{s+t} f(x)|`` in exact mode."""
    _check_t(s)
    _check_t(t)
    p = _as_params(params)
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    lhs = mehler_apply(mehler_polynomial(f, t, p), x, s, p)
    rhs = mehler_apply(f, x, s + t, p)
    return abs(lhs - rhs) / _scale(lhs, rhs)


def invariance_check(f, t, params):
    """Relative residual ``|E_mu[T_t f] - E_mu[f]|`` with exact moments."""
    lhs = complex(gaussian_expectation(mehler_polynomial(f, t, params)))
    rhs = complex(gaussian_expectation(f))
    return abs(lhs - rhs) / _scale(lhs, rhs)


def invariance_check_mc(f, t, params, n_samples=100_000, seed=0):
    """Monte Carlo ``E_mu[T_t f]`` paired with the exact ``E_mu[f]``."""
    tf = mehler_polynomial(f, t, params)
    xs = ComplexGaussianMeasure(f.n_vars).sample(n_samples, make_rng(seed))
    est = McEstimate.from_samples(tf.evaluate_batch(xs))
    return est, complex(gaussian_expectation(f))


def eigen_residuals(max_degree, thetas, dim=1):
    """Rows ``(m, n, theta, max |coeff|)`` of ``L J + lambda J`` over all bases."""
    rows = []
    for th in thetas:
        pr = _as_params(th)
        worst = {}
        for idx in iter_indices(dim, max_degree):
            m, n = idx.order
            J = hermite_product(idx, dim)
            lam = eigenvalue(m, n, pr)
            res = (apply_generator(J, pr) + J.scale(lam)).max_abs_coeff()
            worst[(m, n)] = max(worst.get((m, n), 0.0), float(res))
        for (m, n), r in sorted(worst.items()):
            rows.append((m, n, pr.theta, r))
    return rows
