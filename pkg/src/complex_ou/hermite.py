"""Complex Hermite polynomials and exact Gaussian integration.

Convention throughout the package: each coordinate ``z = x + i y`` has
``x, y`` independent standard normals, so ``E[z conj z] = 2`` and

    E[z^a conj(z)^b] = delta_{ab} 2^a a!

per coordinate. The creation operators are realised on polynomials as

    (2 d*) g    = z g       - 2 dg/d(conj z)
    (2 dbar*) g = conj(z) g - 2 dg/dz

which are the adjoints of ``2 d/dz`` and ``2 d/d(conj z)`` in ``L^2`` of that
measure.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
import warnings

import numpy as np

from .polynomial import WirtingerPolynomial

__all__ = [
    "creation", "creation_bar", "make_hermite", "hermite_norm_sq",
    "gaussian_moment", "gaussian_expectation", "gaussian_inner_product",
    "quadrature_inner_product", "quadrature_expectation", "gauss_hermite_grid",
    "ComplexGaussianMeasure", "QuadratureExactnessWarning",
]


class QuadratureExactnessWarning(UserWarning):
    """The tensor grid is too coarse to integrate the polynomial exactly."""


def creation(g, j=0):
    """``z_j g - 2 d g / d conj(z_j)``."""
    return WirtingerPolynomial.z(j, g.n_vars) * g - 2 * g.d_zbar(j)


def creation_bar(g, j=0):
    """``conj(z_j) g - 2 d g / d z_j``."""
    return WirtingerPolynomial.zbar(j, g.n_vars) * g - 2 * g.d_z(j)


@lru_cache(maxsize=None)
def _hermite_1d(m, n):
    if m == 0 and n == 0:
        return WirtingerPolynomial.constant(1, 1)
    if m == 0:
        return creation_bar(_hermite_1d(0, n - 1))
    return creation(_hermite_1d(m - 1, n))


def make_hermite(m, n, j=0, n_vars=1):
    """Hermite-Laguerre-Ito polynomial ``J_{m,n}`` in coordinate ``j``.

    Built as ``(2 d*)^m (2 dbar*)^n 1`` with integer coefficients; the
    leading term is ``z^m conj(z)^n``.

    >>> str(make_hermite(1, 1))
    '-2 + 1*z*z~'
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    p = _hermite_1d(int(m), int(n))
    if n_vars == 1 and j == 0:
        return p
    return p.lift(n_vars, offset=j)


def hermite_norm_sq(m, n):
    """``||J_{m,n}||^2 = m! n! 2^(m+n)``."""
    return factorial(m) * factorial(n) * 2 ** (m + n)


def gaussian_moment(a, b):
    """``E[prod_j z_j^a_j conj(z_j)^b_j]`` for the standard complex Gaussian."""
    if isinstance(a, int):
        a, b = (a,), (b,)
    out = 1
    for aj, bj in zip(a, b):
        if aj != bj:
            return 0
        out *= 2 ** aj * factorial(aj)
    return out


def gaussian_expectation(p):
    """Exact ``E_mu[p]``."""
    acc = 0
    for (a, b), c in p.terms.items():
        if a == b:
            acc = acc + c * gaussian_moment(a, b)
    return acc


def gaussian_inner_product(p, q):
    """Exact ``<p, q> = E_mu[p conj(q)]``.

    Only term pairs with equal ``a - b`` survive, so terms are bucketed by
    that difference before pairing.
    """
    if p.n_vars != q.n_vars:
        raise ValueError(f"n_vars mismatch: {p.n_vars} vs {q.n_vars}")
    buckets = {}
    for (a, b), c in q.terms.items():
        d = tuple(x - y for x, y in zip(a, b))
        buckets.setdefault(d, []).append((a, b, c))
    acc = 0
    for (a1, b1), c1 in p.terms.items():
        d = tuple(x - y for x, y in zip(a1, b1))
        for a2, b2, c2 in buckets.get(d, ()):
            # z^(a1+b2) conj(z)^(b1+a2); a1+b2 == b1+a2 by the bucket key
            mom = 1
            for x, y in zip(a1, b2):
                k = x + y
                mom *= 2 ** k * factorial(k)
            acc = acc + c1 * c2.conjugate() * mom
    return acc


@lru_cache(maxsize=32)
def _gh_1d(k):
    x, w = np.polynomial.hermite_e.hermegauss(k)
    return x, w / np.sqrt(2 * np.pi)


def gauss_hermite_grid(n_vars, grid_size):
    """Tensor Gauss-Hermite nodes (complex, shape (G, n_vars)) and weights.

    ``grid_size`` nodes per real axis; exact for polynomials of degree up to
    ``2*grid_size - 1`` in each real coordinate.
    """
    if grid_size < 1:
        raise ValueError("grid_size must be positive")
    x, w = _gh_1d(int(grid_size))
    axes = np.meshgrid(*([x] * (2 * n_vars)), indexing="ij")
    waxes = np.meshgrid(*([w] * (2 * n_vars)), indexing="ij")
    flat = np.stack([ax.ravel() for ax in axes], axis=1)
    weights = np.prod(np.stack([ax.ravel() for ax in waxes], axis=1), axis=1)
    nodes = flat[:, 0::2] + 1j * flat[:, 1::2]
    return nodes, weights


def _real_axis_degrees(p):
    da, db = p.var_degrees()
    return [x + y for x, y in zip(da, db)]


def _check_exactness(axis_deg, grid_size, strict):
    need = max(axis_deg, default=0)
    if need > 2 * grid_size - 1:
        msg = (f"grid_size={grid_size} integrates degree <= {2 * grid_size - 1} per axis, "
               f"integrand needs {need}")
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, QuadratureExactnessWarning, stacklevel=3)
        return False
    return True


def quadrature_expectation(p, grid_size, strict=False):
    _check_exactness(_real_axis_degrees(p), grid_size, strict)
    nodes, weights = gauss_hermite_grid(p.n_vars, grid_size)
    return complex(np.dot(weights, p.evaluate_batch(nodes)))


def quadrature_inner_product(p, q, grid_size, strict=False):
    """``E[p conj(q)]`` by tensor Gauss-Hermite quadrature.

    Independent numerical check on :func:`gaussian_inner_product`. Warns
    (or raises with ``strict=True``) when the grid cannot be exact.
    """
    if p.n_vars != q.n_vars:
        raise ValueError(f"n_vars mismatch: {p.n_vars} vs {q.n_vars}")
    deg = [x + y for x, y in zip(_real_axis_degrees(p), _real_axis_degrees(q))]
    _check_exactness(deg, grid_size, strict)
    nodes, weights = gauss_hermite_grid(p.n_vars, grid_size)
    vals = p.evaluate_batch(nodes) * np.conj(q.evaluate_batch(nodes))
    return complex(np.dot(weights, vals))


@dataclass(frozen=True)
class ComplexGaussianMeasure:
    """Standard complex Gaussian on C^n with ``E[z_j conj z_j] = 2``."""

    n_vars: int = 1

    def moment(self, a, b):
        return gaussian_moment(a, b)

    def expectation(self, p):
        return gaussian_expectation(p)

    def inner(self, p, q):
        return gaussian_inner_product(p, q)

    def sample(self, n, rng):
        g = rng.standard_normal((n, self.n_vars, 2))
        return g[..., 0] + 1j * g[..., 1]
