import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, settings, strategies as st

from complex_ou.gaussint import GaussianRational
from complex_ou.polynomial import WirtingerPolynomial

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

gauss_ints = st.builds(GaussianRational, st.integers(-4, 4), st.integers(-4, 4))


@st.composite
def polynomials(draw, n_vars=1, max_degree=4, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.lists(st.integers(0, max_degree), min_size=n_vars, max_size=n_vars))
        b = draw(st.lists(st.integers(0, max_degree), min_size=n_vars, max_size=n_vars))
        # trim to the degree budget
        while sum(a) + sum(b) > max_degree:
            k = int(np.argmax(a + b))
            if k < n_vars:
                a[k] -= 1
            else:
                b[k - n_vars] -= 1
        terms[(tuple(a), tuple(b))] = draw(gauss_ints)
    return WirtingerPolynomial(n_vars, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def to_sympy(p, zs, ws):
    # independent symbols for z_j and conj(z_j)
    expr = 0
    for (a, b), c in p.terms.items():
        c = complex(c)
        mono = sympy.nsimplify(c.real) + sympy.I * sympy.nsimplify(c.imag)
        for j in range(p.n_vars):
            mono *= zs[j] ** a[j] * ws[j] ** b[j]
        expr += mono
    return sympy.expand(expr)


def syms(n):
    return sympy.symbols(f"z0:{n}"), sympy.symbols(f"w0:{n}")
