import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import eval_genlaguerre

from complex_ou.hermite import (ComplexGaussianMeasure, QuadratureExactnessWarning, creation,
                                creation_bar, gauss_hermite_grid, gaussian_expectation,
                                gaussian_inner_product, gaussian_moment, hermite_norm_sq,
                                make_hermite, quadrature_expectation, quadrature_inner_product)
from complex_ou.polynomial import WirtingerPolynomial

from conftest import polynomials

Z = WirtingerPolynomial.z()
W = WirtingerPolynomial.zbar()


def laguerre_oracle(m, n, z):
    # J_{m,n} via generalized Laguerre: for m >= n,
    # J = (-1)^n 2^n n! z^(m-n) L_n^(m-n)(|z|^2 / 2), and J_{n,m} = conj(J_{m,n})
    if m < n:
        return np.conj(laguerre_oracle(n, m, z))
    return (-1) ** n * 2 ** n * math.factorial(n) * z ** (m - n) * eval_genlaguerre(n, m - n, np.abs(z) ** 2 / 2)


def test_low_order_examples():
    assert make_hermite(0, 0) == WirtingerPolynomial.constant(1)
    assert make_hermite(1, 1) == Z * W - 2
    assert make_hermite(2, 0) == Z * Z
    w = Z * W
    assert make_hermite(4, 4) == w ** 4 - 32 * w ** 3 + 288 * w ** 2 - 768 * w + 384


def test_integer_coefficients():
    for m in range(6):
        for n in range(6):
            assert all(isinstance(c, int) for c in make_hermite(m, n).terms.values())


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        make_hermite(-1, 0)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(7) for n in range(7)])
def test_matches_laguerre_oracle(m, n):
    z = np.array([0.3 + 0.4j, -1.2 + 2.0j, 2.5 - 0.1j])
    J = make_hermite(m, n)
    got = J.evaluate_batch(z[:, None])
    np.testing.assert_allclose(got, laguerre_oracle(m, n, z), rtol=1e-10, atol=1e-10)


def test_lift_to_other_coordinate():
    J = make_hermite(2, 1, j=1, n_vars=3)
    assert J.var_degrees() == ((0, 2, 0), (0, 1, 0))
    x = np.array([5.0, 0.5 - 0.5j, -3j])
    assert J(x) == pytest.approx(make_hermite(2, 1)(x[1:2]))


@given(st.integers(0, 5), st.integers(0, 5))
def test_conjugate_symmetry(m, n):
    assert make_hermite(m, n).conjugate() == make_hermite(n, m)


@given(polynomials(n_vars=2, max_degree=4))
def test_creation_operators_commute(g):
    for j in (0, 1):
        assert creation(creation_bar(g, j), j) == creation_bar(creation(g, j), j)
    assert creation(creation(g, 0), 1) == creation(creation(g, 1), 0)


@given(polynomials(n_vars=1, max_degree=4), polynomials(n_vars=1, max_degree=4))
def test_adjointness(p, q):
    # <d_z p, q> = <p, (z/2) q - d_zbar q>  under E|z|^2 = 2
    lhs = gaussian_inner_product(p.d_z(0), q)
    rhs = gaussian_inner_product(p, (Z * q) / 2 - q.d_zbar(0))
    assert lhs == rhs


@given(polynomials(n_vars=2, max_degree=3), polynomials(n_vars=2, max_degree=3))
def test_inner_product_hermitian(p, q):
    assert gaussian_inner_product(p, q) == gaussian_inner_product(q, p).conjugate()


def test_orthogonality_exact():
    for m in range(9):
        for n in range(9 - m):
            Jmn = make_hermite(m, n)
            for mm in range(9):
                for nn in range(9 - mm):
                    ip = gaussian_inner_product(Jmn, make_hermite(mm, nn))
                    want = hermite_norm_sq(m, n) if (m, n) == (mm, nn) else 0
                    assert ip == want


def test_inner_product_examples():
    assert gaussian_inner_product(make_hermite(1, 1), make_hermite(1, 1)) == 4
    assert gaussian_inner_product(make_hermite(1, 0), make_hermite(0, 1)) == 0
    one = WirtingerPolynomial.constant(1)
    assert gaussian_inner_product(one, one) == 1
    assert gaussian_inner_product(Z, Z) == 2


def test_moments():
    assert gaussian_moment(2, 2) == 8
    assert gaussian_moment((1, 2), (1, 2)) == 2 * 8
    assert gaussian_moment(2, 1) == 0
    assert gaussian_expectation((Z * W) ** 2) == 8


def test_quadrature_oracle_examples():
    J = make_hermite(1, 1)
    assert quadrature_inner_product(J, J, 6) == pytest.approx(4, abs=1e-12)
    assert quadrature_inner_product(Z, Z, 2) == pytest.approx(2, abs=1e-12)


def test_grid_weights_sum_to_one():
    _, w = gauss_hermite_grid(2, 5)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("m,n,mm,nn", [(2, 1, 2, 1), (3, 0, 1, 2), (2, 2, 0, 0), (3, 1, 2, 0)])
def test_quadrature_agrees_with_moments(m, n, mm, nn):
    p, q = make_hermite(m, n), make_hermite(mm, nn)
    exact = complex(gaussian_inner_product(p, q))
    assert quadrature_inner_product(p, q, 6, strict=True) == pytest.approx(exact, abs=1e-9)


@given(polynomials(n_vars=2, max_degree=4))
def test_quadrature_expectation_agrees(p):
    assert quadrature_expectation(p, 4) == pytest.approx(complex(gaussian_expectation(p)), abs=1e-9)


def test_coarse_grid_warns_or_raises():
    J = make_hermite(4, 4)
    with pytest.warns(QuadratureExactnessWarning):
        quadrature_inner_product(J, J, 3)
    with pytest.raises(ValueError):
        quadrature_inner_product(J, J, 3, strict=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        quadrature_inner_product(J, J, 9)


def test_sampler_second_moment(rng):
    x = ComplexGaussianMeasure(2).sample(200_000, rng)
    m2 = np.mean(np.abs(x) ** 2, axis=0)
    np.testing.assert_allclose(m2, 2.0, rtol=0.02)
