"""The rotated Ornstein-Uhlenbeck generator and complex directional derivatives.

On a cylindrical polynomial ``f(z_1, ..., z_n)`` the generator is

    L f = 4 cos(theta) sum_j d_j dbar_j f
          - sum_j (e^{i theta} z_j d_j f + e^{-i theta} conj(z_j) dbar_j f)

which is normal but not self-adjoint unless ``theta == 0``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .gaussint import GaussianRational
from .polynomial import WirtingerPolynomial

__all__ = [
    "RotationParams", "HDerivative", "apply_generator", "adjoint_generator",
    "gateaux_derivative", "directional_check", "directional_order",
    "trace_second_derivative", "drift_pairing", "generator_identity_check",
    "generator_parts", "eigenvalue",
]


@dataclass(frozen=True)
class RotationParams:
    """Rotation angle ``theta`` in ``(-pi/2, pi/2)``."""

    theta: float

    def __post_init__(self):
        th = float(self.theta)
        if not -math.pi / 2 < th < math.pi / 2:
            raise ValueError(f"theta must lie in (-pi/2, pi/2), got {th}")
        object.__setattr__(self, "theta", th)

    @property
    def alpha(self):
        return complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def r(self):
        return math.cos(self.theta)

    @property
    def omega(self):
        return math.sin(self.theta)

    def reflected(self):
        return RotationParams(-self.theta)


def _as_params(params):
    return params if isinstance(params, RotationParams) else RotationParams(params)


def generator_parts(f):
    """Exact polynomials ``(A, B)`` with ``L_theta f = cos(theta) A + sin(theta) B``.

    Built monomial by monomial: ``c z^a conj(z)^b`` contributes
    ``-(|a|+|b|) c`` and ``4 a_j b_j c z^(a-e_j) conj(z)^(b-e_j)`` to ``A`` and
    ``-i (|a|-|b|) c`` to ``B``. This route never touches the derivative
    helpers, so :func:`generator_identity_check` compares two independent
    constructions. Exact coefficients stay exact.
    """
    n = f.n_vars
    A = {}
    B = {}
    for (a, b), c in f.terms.items():
        sa, sb = sum(a), sum(b)
        if sa + sb:
            w = -(sa + sb) * c
            A[(a, b)] = A[(a, b)] + w if (a, b) in A else w
        if sa != sb:
            B[(a, b)] = c * GaussianRational(0, sb - sa)
        for j in range(n):
            if a[j] and b[j]:
                k = (a[:j] + (a[j] - 1,) + a[j + 1:], b[:j] + (b[j] - 1,) + b[j + 1:])
                w = 4 * a[j] * b[j] * c
                A[k] = A[k] + w if k in A else w
    return WirtingerPolynomial(n, A), WirtingerPolynomial(n, B)


def apply_generator(f, params):
    """``L f`` for the rotation ``params`` (a :class:`RotationParams` or an angle)."""
    p = _as_params(params)
    A, B = generator_parts(f)
    return A.scale(p.r) + B.scale(p.omega)


def adjoint_generator(f, params):
    """``L*`` in ``L^2(mu)``: the generator with ``theta -> -theta``."""
    return apply_generator(f, _as_params(params).reflected())


@dataclass(frozen=True)
class HDerivative:
    """Pair of polynomial vectors ``(e^{i theta} d_j f, e^{-i theta} dbar_j f)``.

    ``linear_part`` pairs with a direction ``h``, ``conjugate_part`` with
    ``conj(h)``.
    """

    linear_part: tuple
    conjugate_part: tuple

    def at(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        lin = np.array([p(x) for p in self.linear_part])
        con = np.array([p(x) for p in self.conjugate_part])
        return lin, con

    def pairing(self, x, h):
        """Directional derivative ``sum_j lin_j h_j + con_j conj(h_j)`` at ``x``."""
        lin, con = self.at(x)
        h = np.atleast_1d(np.asarray(h, dtype=complex))
        return complex(np.sum(lin * h) + np.sum(con * np.conj(h)))


def gateaux_derivative(f, params):
    p = _as_params(params)
    e = p.alpha
    lin = tuple(f.d_z(j).scale(e) for j in range(f.n_vars))
    con = tuple(f.d_zbar(j).scale(e.conjugate()) for j in range(f.n_vars))
    return HDerivative(lin, con)


def directional_check(f, x, h, params, dt=1e-5):
    """Analytic vs central-difference ``d/dt f(x + e^{i theta} t h)`` at ``t = 0``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    p = _as_params(params)
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    h = np.atleast_1d(np.asarray(h, dtype=complex))
    analytic = gateaux_derivative(f, p).pairing(x, h)
    step = p.alpha * dt * h
    fd = (f(x + step) - f(x - step)) / (2 * dt)
    return analytic, complex(fd)


def directional_order(f, x, h, params, dts):
    """Least-squares slope of ``log|analytic - fd|`` against ``log dt``."""
    res = []
    for dt in dts:
        a, fd = directional_check(f, x, h, params, dt)
        res.append(abs(a - fd))
    res = np.asarray(res)
    slope = np.polyfit(np.log(dts), np.log(res), 1)[0]
    return float(slope), res


def trace_second_derivative(f, params):
    """``4 cos(theta) sum_j d_j dbar_j f``."""
    p = _as_params(params)
    acc = WirtingerPolynomial.zero(f.n_vars)
    for j in range(f.n_vars):
        acc = acc + f.d_zbar(j).d_z(j)
    return acc.scale(4 * p.r)


def drift_pairing(f, params):
    """``<x, G_theta f(x)> = sum_j e^{i theta} z_j d_j f + e^{-i theta} conj(z_j) dbar_j f``."""
    p = _as_params(params)
    e = p.alpha
    acc = WirtingerPolynomial.zero(f.n_vars)
    for j in range(f.n_vars):
        acc = acc + (WirtingerPolynomial.z(j, f.n_vars) * f.d_z(j)).scale(e)
        acc = acc + (WirtingerPolynomial.zbar(j, f.n_vars) * f.d_zbar(j)).scale(e.conjugate())
    return acc


def generator_identity_check(f, params):
    """``L f - (tr DD_theta f - <x, G_theta f>)`` as a polynomial.

    Both sides are split into their ``cos(theta)`` and ``sin(theta)``
    components before the numeric angle enters, so exact inputs give the
    exact zero polynomial.
    """
    p = _as_params(params)
    n = f.n_vars
    A, B = generator_parts(f)
    trace = WirtingerPolynomial.zero(n)
    hol = WirtingerPolynomial.zero(n)
    antihol = WirtingerPolynomial.zero(n)
    for j in range(n):
        trace = trace + 4 * f.d_zbar(j).d_z(j)
        hol = hol + WirtingerPolynomial.z(j, n) * f.d_z(j)
        antihol = antihol + WirtingerPolynomial.zbar(j, n) * f.d_zbar(j)
    # e^{i theta} hol + e^{-i theta} antihol = cos (hol + antihol) + sin i (hol - antihol)
    res_cos = A - trace + (hol + antihol)
    res_sin = B + (hol - antihol).scale(GaussianRational(0, 1))
    return res_cos.scale(p.r) + res_sin.scale(p.omega)


def eigenvalue(m, n, params):
    """``(m+n) cos(theta) + i (m-n) sin(theta)``; ``L J_{m,n} = -eigenvalue * J_{m,n}``."""
    p = _as_params(params)
    return complex((m + n) * p.r, (m - n) * p.omega)

