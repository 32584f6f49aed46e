"""Numerical checks of ``||T_t f||_q <= ||f||_p``.

Two exponent laws are supported:

* ``"statement"``: ``q = 1 + (p - 1) e^{2t}`` (no angle dependence);
* ``"proof"``: ``q = 1 + (p - 1) e^{2 t cos(theta)}``.

Only the proof law is treated as a claim; the statement law is scanned and
reported. ``T_t f`` is always computed spectrally, so Monte Carlo error only
enters through the outer norm integrals, which share one sample set.
"""
from dataclasses import dataclass, asdict
import csv
import io
import math

import numpy as np

from . import kernels
from .chaos import basis_polynomial, expand, iter_indices
from .generator import _as_params
from .hermite import ComplexGaussianMeasure, gauss_hermite_grid
from .montecarlo import DEFAULT_SEED, make_rng, spawn_rngs
from .semigroup import multiplier, spectral_semigroup

__all__ = [
    "VARIANTS", "q_exponent", "lp_norm", "lp_norm_mc", "HyperReport",
    "hyper_check", "hyper_scan", "scan_to_csv", "SCAN_COLUMNS",
]

VARIANTS = ("statement", "proof")
SCAN_COLUMNS = ("p", "t", "theta", "variant", "q", "lhs", "lhs_se", "rhs", "rhs_se",
                "margin", "pass")

_DEFAULT_GRID = {1: 64, 2: 20, 3: 8}


def q_exponent(p, t, params=0.0, variant="proof"):
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if variant == "statement":
        return 1 + (p - 1) * math.exp(2 * t)
    if variant == "proof":
        return 1 + (p - 1) * math.exp(2 * t * _as_params(params).r)
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def _norm_from_moments(mean, meansq, p, n):
    # delta method for (E|f|^p)^(1/p)
    val = mean ** (1 / p)
    var = np.maximum(meansq - mean * mean, 0.0) * n / max(n - 1, 1)
    se = np.where(mean > 0, (1 / p) * mean ** (1 / p - 1) * np.sqrt(var / n), 0.0)
    return val, se


def _grid_for(f, p, grid_size):
    if grid_size is not None:
        return grid_size
    if float(p).is_integer() and int(p) % 2 == 0:
        da, db = f.var_degrees()
        axis = max((x + y for x, y in zip(da, db)), default=0)
        return axis * int(p) // 2 + 1
    return _DEFAULT_GRID.get(f.n_vars, 6)


def lp_norm(f, p, estimator="quadrature", *, grid_size=None, n_samples=100_000,
            seed=DEFAULT_SEED):
    """``(E_mu |f|^p)^(1/p)``.

    Quadrature integrates ``|f|^p`` on a tensor Gauss-Hermite grid; that is
    exact (up to rounding) for even integer ``p`` once the grid is large
    enough, which the default grid guarantees, and an approximation
    otherwise. ``estimator="monte-carlo"`` returns the point estimate of
    :func:`lp_norm_mc`.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if estimator == "quadrature":
        nodes, w = gauss_hermite_grid(f.n_vars, _grid_for(f, p, grid_size))
        vals = np.abs(f.evaluate_batch(nodes)) ** p
        return float(np.dot(w, vals) ** (1 / p))
    if estimator == "monte-carlo":
        return lp_norm_mc(f, p, n_samples=n_samples, seed=seed)[0]
    raise ValueError(f"unknown estimator {estimator!r}")


def lp_norm_mc(f, p, n_samples=100_000, seed=DEFAULT_SEED):
    """Monte Carlo ``L^p(mu)`` norm and its delta-method standard error."""
    if p < 1:
        raise ValueError("p must be >= 1")
    xs = ComplexGaussianMeasure(f.n_vars).sample(n_samples, make_rng(seed))
    mean, meansq = kernels.abs_pow_moments(f.evaluate_batch(xs), p)
    val, se = _norm_from_moments(mean, meansq, p, n_samples)
    return float(val[0]), float(se[0])


@dataclass
class HyperReport:
    p: float
    t: float
    theta: float
    variant: str
    q: float
    lhs: float
    lhs_se: float
    rhs: float
    rhs_se: float
    margin: float
    passed: bool

    def as_row(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _judge(lhs, lhs_se, rhs, rhs_se, k, rtol):
    margin = rhs - lhs
    se = math.hypot(lhs_se, rhs_se)
    return margin, bool(margin >= -(k * se + rtol * max(rhs, 1.0)))


def hyper_check(f, p, t, params, variant="proof", estimator="monte-carlo", *,
                n_samples=100_000, seed=DEFAULT_SEED, grid_size=None, k=4.0):
    """Compare ``||T_t f||_q`` with ``||f||_p`` for one polynomial.

    Both norms use the same draws (or the same grid), so ``t = 0`` gives a
    margin of exactly zero. ``passed`` allows ``k`` combined standard errors
    of slack for Monte Carlo; quadrature allows a relative ``1e-9``.
    """
    pr = _as_params(params)
    q = q_exponent(p, t, pr, variant)
    tf = spectral_semigroup(expand(f), t, pr).reconstruct() if t > 0 else f
    if estimator == "monte-carlo":
        xs = ComplexGaussianMeasure(f.n_vars).sample(n_samples, make_rng(seed))
        mf, sf = kernels.abs_pow_moments(f.evaluate_batch(xs), p)
        mt, st = kernels.abs_pow_moments(tf.evaluate_batch(xs), q)
        rhs, rhs_se = _norm_from_moments(mf, sf, p, n_samples)
        lhs, lhs_se = _norm_from_moments(mt, st, q, n_samples)
        lhs, lhs_se, rhs, rhs_se = float(lhs[0]), float(lhs_se[0]), float(rhs[0]), float(rhs_se[0])
        rtol = 1e-12
    elif estimator == "quadrature":
        g = grid_size or max(_grid_for(f, p, None), _grid_for(tf, q, None))
        lhs = lp_norm(tf, q, "quadrature", grid_size=g)
        rhs = lp_norm(f, p, "quadrature", grid_size=g)
        lhs_se = rhs_se = 0.0
        rtol = 1e-9
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    margin, ok = _judge(lhs, lhs_se, rhs, rhs_se, k, rtol)
    return HyperReport(float(p), float(t), pr.theta, variant, q, lhs, lhs_se, rhs, rhs_se,
                       margin, ok)


def _basis_matrix(dim, degree, xs):
    idx = list(iter_indices(dim, degree))
    cols = [basis_polynomial(i, dim).evaluate_batch(xs) for i in idx]
    return idx, np.stack(cols, axis=1)


def _random_coeffs(rng, n_basis, n_polys):
    c = (rng.standard_normal((n_basis, n_polys)) + 1j * rng.standard_normal((n_basis, n_polys))) / math.sqrt(2)
    c[0] *= rng.uniform(0.0, 3.0, size=n_polys)
    return c


def hyper_scan(degree, dim, p_grid, t_grid, theta_grid, n_polys=20, n_samples=100_000,
               seed=DEFAULT_SEED, variant="proof", k=4.0):
    """Randomised search for violations over a ``(p, t, theta)`` grid.

    ``n_polys`` random polynomials of degree ``<= degree`` in ``dim``
    coordinates (complex normal orthonormal-basis coefficients, constant term
    reweighted by a uniform factor in ``[0, 3)``) are tested in every cell,
    all against one sample set of size ``n_samples``. Sharing polynomials and
    draws across cells keeps the cells comparable and lets ``||f||_p`` be
    computed once per ``p``.

    Returns one row per cell describing the polynomial with the smallest
    margin in standard-error units, with ``n_violations`` counting
    polynomials whose margin is below ``-k`` standard errors. Violations are
    reported, never raised.
    """
    if not (len(p_grid) and len(t_grid) and len(theta_grid)):
        raise ValueError("grids must be nonempty")
    rng_x, rng_c = spawn_rngs(seed, 2)
    xs = ComplexGaussianMeasure(dim).sample(n_samples, rng_x)
    idx, basis = _basis_matrix(dim, degree, xs)
    orders = [i.order for i in idx]
    c = _random_coeffs(rng_c, len(idx), n_polys)
    fv = basis @ c
    f_r2 = fv.real ** 2 + fv.imag ** 2
    rhs_by_p = {p: _norm_from_moments(*kernels.pow_moments(f_r2, 0.5 * p), p, n_samples)
                for p in p_grid}
    out = {}
    for t in t_grid:
        for th in theta_grid:
            pr = _as_params(th)
            if t == 0:
                t_r2 = f_r2
            else:
                mult = np.array([multiplier(m, n, t, pr) for m, n in orders])
                tv = basis @ (c * mult[:, None])
                t_r2 = tv.real ** 2 + tv.imag ** 2
            for p in p_grid:
                q = q_exponent(p, t, pr, variant)
                rhs, rhs_se = rhs_by_p[p]
                lhs, lhs_se = _norm_from_moments(*kernels.pow_moments(t_r2, 0.5 * q), q, n_samples)
                out[(p, t, th)] = _cell_row(p, t, pr.theta, variant, q, lhs, lhs_se, rhs, rhs_se, k)
    return [out[(p, t, th)] for p in p_grid for t in t_grid for th in theta_grid]


def _cell_row(p, t, theta, variant, q, lhs, lhs_se, rhs, rhs_se, k):
    margin = rhs - lhs
    se = np.hypot(lhs_se, rhs_se)
    bad = margin < -(k * se + 1e-12 * np.maximum(rhs, 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, margin / se, np.where(margin >= 0, np.inf, -np.inf))
    w = int(np.argmin(z))
    return {
        "p": float(p), "t": float(t), "theta": theta, "variant": variant, "q": q,
        "lhs": float(lhs[w]), "lhs_se": float(lhs_se[w]), "rhs": float(rhs[w]),
        "rhs_se": float(rhs_se[w]), "margin": float(margin[w]), "pass": not bool(bad.any()),
        "n_violations": int(bad.sum()), "min_margin": float(margin.min()),
    }


def scan_to_csv(rows, columns=SCAN_COLUMNS, extra=()):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(columns) + [c for c in extra if c not in columns]
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in cols])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)
