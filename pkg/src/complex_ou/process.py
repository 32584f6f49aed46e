"""Simulation of the complex OU process ``dZ = -alpha Z dt + sqrt(2 sigma^2) dzeta``.

``alpha = a e^{i theta} = r + i Omega`` and ``zeta = B1 + i B2`` is a complex
Brownian motion, so each real coordinate carries diffusion ``2 sigma^2``.
The stationary law has per-real-coordinate variance ``sigma^2 / r``.

Noise draws always follow ``xi = g1 + i g2`` with independent standard normals
(``E|xi|^2 = 2``), the same convention as :mod:`complex_ou.hermite`.
"""
from dataclasses import dataclass, field
import cmath
import math
import warnings

import numpy as np
from scipy import stats

from . import kernels
from .generator import RotationParams
from .montecarlo import DEFAULT_SEED, make_rng

__all__ = [
    "SDEParams", "PathConfig", "SampleBatch", "EulerInstabilityWarning",
    "exact_step", "euler_step", "sample_path", "sample_paths",
    "stationary_samples", "normalization_map", "rotation_invariance_check",
    "convolution_check", "euler_weak_errors", "ks_marginal_test",
]

# rows of noise generated per kernel call; bounds memory at ~16 MB per block
_BLOCK_DRAWS = 1 << 20


class EulerInstabilityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SDEParams:
    a: float = 1.0
    theta: float = 0.0
    sigma2: float = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise ValueError("theta must lie in (-pi/2, pi/2)")
        if self.sigma2 is None:
            object.__setattr__(self, "sigma2", self.r)
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")

    @classmethod
    def normalized(cls, theta):
        """``a = 1`` and ``sigma^2 = r = cos(theta)``: stationary law is the standard complex Gaussian."""
        return cls(1.0, theta, math.cos(theta))

    @property
    def alpha(self):
        return self.a * cmath.exp(1j * self.theta)

    @property
    def r(self):
        return self.a * math.cos(self.theta)

    @property
    def omega(self):
        return self.a * math.sin(self.theta)

    @property
    def stationary_variance(self):
        """Per-real-coordinate stationary variance ``sigma^2 / r``."""
        return self.sigma2 / self.r

    def transition(self, dt):
        """``(factor, scale)`` of the exact step ``z' = factor z + scale xi``."""
        factor = cmath.exp(-self.alpha * dt)
        scale = math.sqrt(self.stationary_variance * -math.expm1(-2 * self.r * dt))
        return factor, scale

    def euler(self, dt):
        return 1 - self.alpha * dt, math.sqrt(2 * self.sigma2 * dt)


def normalization_map(p):
    """Map general parameters onto the normalised family.

    ``W_s = space_scale * Z_{s / time_scale}`` solves the SDE with
    ``SDEParams.normalized(theta)``. Returns
    ``(RotationParams(theta), space_scale, time_scale)``.
    """
    return RotationParams(p.theta), math.sqrt(p.r / p.sigma2), p.a


def exact_step(z, dt, p, noise):
    """One draw from the exact transition law over ``dt``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    factor, scale = p.transition(dt)
    return factor * np.asarray(z) + scale * np.asarray(noise)


def euler_step(z, dt, p, noise):
    """Explicit Euler-Maruyama step ``z - alpha z dt + sqrt(2 sigma^2 dt) xi``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    factor, scale = p.euler(dt)
    if abs(factor) >= 1:
        warnings.warn(f"|1 - alpha dt| = {abs(factor):.3g} >= 1: Euler scheme unstable",
                      EulerInstabilityWarning, stacklevel=2)
    return factor * np.asarray(z) + scale * np.asarray(noise)


@dataclass(frozen=True)
class PathConfig:
    z0: complex = 0j
    t_end: float = 1.0
    n_steps: int = 100
    seed: int = DEFAULT_SEED
    scheme: str = "exact"

    def __post_init__(self):
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.n_steps < 1:
            raise ValueError("n_steps must be positive")
        if self.scheme not in ("exact", "euler"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def dt(self):
        return self.t_end / self.n_steps


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", int(np.asarray(self.values).shape[0]))

    def moments(self, max_order=2):
        """Sample means of ``z^j conj(z)^k`` for ``j + k <= max_order``."""
        v = self.values
        return {(j, k): complex(np.mean(v ** j * np.conj(v) ** k))
                for j in range(max_order + 1) for k in range(max_order + 1 - j)}


def _step_coeffs(cfg, p):
    if cfg.scheme == "exact":
        return p.transition(cfg.dt)
    factor, scale = p.euler(cfg.dt)
    if abs(factor) >= 1:
        warnings.warn(f"|1 - alpha dt| = {abs(factor):.3g} >= 1: Euler scheme unstable",
                      EulerInstabilityWarning, stacklevel=3)
    return factor, scale


def _run(z0, cfg, p, rng, record):
    n_paths = z0.shape[0]
    if cfg.t_end == 0:
        z = z0.copy()
        if record:
            return z, np.repeat(z0[None, :], cfg.n_steps, axis=0)
        return z
    factor, scale = _step_coeffs(cfg, p)
    rows = max(1, _BLOCK_DRAWS // max(n_paths, 1))
    z = z0
    chunks = []
    done = 0
    while done < cfg.n_steps:
        k = min(rows, cfg.n_steps - done)
        g = rng.standard_normal((k, n_paths, 2))
        res = kernels.linear_recursion(z, factor, scale, g[..., 0], g[..., 1], record=record)
        if record:
            z, traj = res
            chunks.append(traj)
        else:
            z = res
        done += k
    if record:
        return z, np.concatenate(chunks, axis=0)
    return z


def sample_path(cfg, p):
    """One path ``Z_0, Z_dt, ..., Z_t_end`` (length ``n_steps + 1``); deterministic in ``cfg.seed``."""
    z0 = np.array([complex(cfg.z0)])
    _, traj = _run(z0, cfg, p, make_rng(cfg.seed), record=True)
    return np.concatenate([z0, traj[:, 0]])


def sample_paths(cfg, p, n_paths, z0=None, record=False):
    """Simulate ``n_paths`` independent paths.

    ``z0`` may be an array of starting points (one per path); defaults to
    ``cfg.z0``. Returns a :class:`SampleBatch` of terminal values, or the
    full ``(n_steps + 1, n_paths)`` array when ``record`` is set.
    """
    if z0 is None:
        z0 = np.full(n_paths, complex(cfg.z0))
    z0 = np.asarray(z0, dtype=complex)
    if z0.shape != (n_paths,):
        raise ValueError("z0 must have one entry per path")
    rng = make_rng(cfg.seed)
    if record:
        _, traj = _run(z0, cfg, p, rng, record=True)
        return np.concatenate([z0[None, :], traj], axis=0)
    return SampleBatch(_run(z0, cfg, p, rng, record=False), cfg.seed)


def stationary_samples(p, n, seed=DEFAULT_SEED):
    rng = make_rng(seed)
    g = rng.standard_normal((n, 2))
    return math.sqrt(p.stationary_variance) * (g[:, 0] + 1j * g[:, 1])


def _paired_diff_stats(d):
    d = np.asarray(d)
    n = d.size
    return complex(d.mean()), float(np.std(d.real, ddof=1) / math.sqrt(n)), float(np.std(d.imag, ddof=1) / math.sqrt(n))


def _within(mean, se_re, se_im, k):
    return abs(mean.real) <= k * se_re + 1e-12 and abs(mean.imag) <= k * se_im + 1e-12


@dataclass
class MomentReport:
    rows: list
    passed: bool
    extra: dict = field(default_factory=dict)


def rotation_invariance_check(n, seed, angle, max_order=4, k=3.0):
    """Moments of ``e^{i angle} xi`` against those of ``xi`` on the same draws.

    For each ``(j, l)`` with ``j + l <= max_order`` the paired difference
    ``(e^{i angle (j-l)} - 1) xi^j conj(xi)^l`` must have mean within ``k``
    standard errors of zero. The angular histogram of the rotated batch is
    also tested for uniformity (KS p-value reported in ``extra``).
    """
    if n < 10_000:
        raise ValueError("rotation check needs N >= 1e4")
    rng = make_rng(seed)
    g = rng.standard_normal((n, 2))
    xi = g[:, 0] + 1j * g[:, 1]
    rot = cmath.exp(1j * angle) * xi
    rows = []
    ok = True
    for j in range(max_order + 1):
        for l in range(max_order + 1 - j):
            if j == l == 0:
                continue
            d = rot ** j * np.conj(rot) ** l - xi ** j * np.conj(xi) ** l
            mean, se_re, se_im = _paired_diff_stats(d)
            good = _within(mean, se_re, se_im, k)
            ok &= good
            rows.append({"j": j, "l": l, "diff": mean, "se_re": se_re, "se_im": se_im, "pass": good})
    radial = float(np.max(np.abs(np.abs(rot) - np.abs(xi))))
    ang = (np.angle(rot) + math.pi) / (2 * math.pi)
    ks = stats.kstest(ang, "uniform")
    return MomentReport(rows, ok, {"radial_max_diff": radial, "angle_ks_pvalue": float(ks.pvalue)})


def convolution_check(n, seed, t=1.0, s=1.0, k=3.0):
    """``sqrt(t) xi1 + sqrt(s) xi2`` against ``sqrt(t+s) xi3`` (independent batches).

    Compares ``E|w|^2 = 2(t+s)`` and ``E|w|^4 = 8(t+s)^2`` plus the mean,
    each within ``k`` two-sample standard errors.
    """
    rng = make_rng(seed)
    g = rng.standard_normal((3, n, 2))
    xi = g[..., 0] + 1j * g[..., 1]
    lhs = math.sqrt(t) * xi[0] + math.sqrt(s) * xi[1]
    rhs = math.sqrt(t + s) * xi[2]
    rows = []
    ok = True
    for name, fn in (("mean", lambda w: w), ("abs2", lambda w: np.abs(w) ** 2),
                     ("abs4", lambda w: np.abs(w) ** 4), ("w2", lambda w: w * w)):
        a, b = fn(lhs), fn(rhs)
        diff = complex(np.mean(a) - np.mean(b))
        se_re = float(math.sqrt(np.var(np.real(a), ddof=1) / n + np.var(np.real(b), ddof=1) / n))
        se_im = float(math.sqrt(np.var(np.imag(a), ddof=1) / n + np.var(np.imag(b), ddof=1) / n))
        good = _within(diff, se_re, se_im, k)
        ok &= good
        rows.append({"moment": name, "diff": diff, "se_re": se_re, "se_im": se_im, "pass": good})
    ratio = float(np.mean(np.abs(lhs) ** 2) / np.mean(np.abs(rhs) ** 2))
    return MomentReport(rows, ok, {"abs2_ratio": ratio})


def ks_marginal_test(p, z0, t_end, steps_a, steps_b, n_paths, seed):
    """Two-sample KS p-values (real, imag) between exact-scheme marginals at ``t_end``."""
    ca = PathConfig(z0, t_end, steps_a, seed, "exact")
    cb = PathConfig(z0, t_end, steps_b, seed + 1, "exact")
    a = sample_paths(ca, p, n_paths).values
    b = sample_paths(cb, p, n_paths).values
    return (float(stats.ks_2samp(a.real, b.real).pvalue),
            float(stats.ks_2samp(a.imag, b.imag).pvalue))


def euler_weak_errors(p, z0, t_end, steps, n_paths, seed):
    """``|MC mean of Euler Z_T - e^{-alpha T} z0|`` for each entry of ``steps``.

    Each level uses its own spawned stream.
    """
    exact = cmath.exp(-p.alpha * t_end) * complex(z0)
    ss = np.random.SeedSequence(seed).spawn(len(steps))
    out = []
    for n_steps, s in zip(steps, ss):
        cfg = PathConfig(z0, t_end, n_steps, int(s.generate_state(1, np.uint64)[0]), "euler")
        batch = sample_paths(cfg, p, n_paths)
        out.append(abs(batch.values.mean() - exact))
    return np.asarray(out)
