"""Seeded generators and Monte Carlo estimates."""
from dataclasses import dataclass

import numpy as np

__all__ = ["make_rng", "spawn_rngs", "McEstimate"]

DEFAULT_SEED = 20240601


def make_rng(seed=DEFAULT_SEED):
    """``numpy.random.Generator`` (PCG64) from a 64-bit seed or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))


def spawn_rngs(seed, n):
    """``n`` statistically independent generators derived from one seed."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1))
    return [np.random.default_rng(s) for s in ss.spawn(n)]


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of complex draws with per-component standard errors."""

    value: complex
    stderr_re: float
    stderr_im: float
    n: int

    @classmethod
    def from_samples(cls, samples):
        s = np.asarray(samples, dtype=complex).ravel()
        n = s.size
        if n < 2:
            raise ValueError("need at least two samples")
        se_re = float(np.std(s.real, ddof=1) / np.sqrt(n))
        se_im = float(np.std(s.imag, ddof=1) / np.sqrt(n))
        return cls(complex(s.mean()), se_re, se_im, n)

    def zscores(self, target, atol=1e-12):
        """``(re, im)`` deviations from ``target`` in standard errors.

        Deviations below ``atol`` count as zero, so a component with no
        sampling spread (e.g. the imaginary part of a real integrand) does
        not turn rounding into an infinite score.
        """
        d = self.value - complex(target)
        return _z(d.real, self.stderr_re, atol), _z(d.imag, self.stderr_im, atol)

    def within(self, target, k=3.0, atol=1e-12):
        """True when both components sit within ``k`` standard errors (plus ``atol``)."""
        d = self.value - complex(target)
        return (abs(d.real) <= k * self.stderr_re + atol) and (abs(d.imag) <= k * self.stderr_im + atol)


def _z(d, se, atol):
    d = abs(d)
    if d <= atol:
        return 0.0
    return d / se if se > 0 else float("inf")
