"""Ito-Wiener chaos: Fourier-Hermite-Ito basis, expansion, projection.

The coordinates ``z_k`` play the role of ``<x, phi_k>`` for a fixed
orthonormal system, so the basis element for ``(m, n)`` is

    prod_k J_{m_k, n_k}(z_k) / sqrt(2^(m_k+n_k) m_k! n_k!)

Expansions store coefficients against the *unnormalised* products
``prod_k J_{m_k,n_k}``; for exact inputs those coefficients are exact
rationals, which makes reconstruction and Parseval exact.
"""
from dataclasses import dataclass
from functools import lru_cache
import json
import math

from .gaussint import exact_div
from .hermite import gaussian_inner_product, hermite_norm_sq, make_hermite
from .polynomial import WirtingerPolynomial, _compositions

__all__ = [
    "ChaosIndex", "ChaosExpansion", "basis_polynomial", "hermite_product",
    "basis_norm_sq", "iter_indices", "expand", "project",
]


@dataclass(frozen=True, order=True)
class ChaosIndex:
    """Pair of finitely supported nonnegative sequences ``(m, n)``.

    Trailing positions where both sequences vanish are stripped, so
    ``ChaosIndex((1, 0), (0, 0)) == ChaosIndex((1,), (0,))``.
    """

    m: tuple
    n: tuple

    def __post_init__(self):
        m = [int(x) for x in self.m]
        n = [int(x) for x in self.n]
        if len(m) != len(n):
            k = max(len(m), len(n))
            m += [0] * (k - len(m))
            n += [0] * (k - len(n))
        if min(m + n, default=0) < 0:
            raise ValueError("chaos index entries must be nonnegative")
        while m and m[-1] == 0 and n[-1] == 0:
            m.pop()
            n.pop()
        object.__setattr__(self, "m", tuple(m))
        object.__setattr__(self, "n", tuple(n))

    @property
    def order(self):
        """``(|m|, |n|)``."""
        return sum(self.m), sum(self.n)

    @property
    def support(self):
        return len(self.m)

    def padded(self, n_vars):
        if self.support > n_vars:
            raise ValueError(f"index {self} needs {self.support} variables, have {n_vars}")
        pad = (0,) * (n_vars - self.support)
        return self.m + pad, self.n + pad


def basis_norm_sq(idx):
    out = 1
    for a, b in zip(idx.m, idx.n):
        out *= hermite_norm_sq(a, b)
    return out


@lru_cache(maxsize=4096)
def hermite_product(idx, n_vars):
    """Unnormalised ``prod_k J_{m_k,n_k}(z_k)`` with integer coefficients."""
    m, n = idx.padded(n_vars)
    out = WirtingerPolynomial.constant(1, n_vars)
    for k in range(n_vars):
        if m[k] or n[k]:
            out = out * make_hermite(m[k], n[k], j=k, n_vars=n_vars)
    return out


def basis_polynomial(idx, n_vars=None):
    """Normalised Fourier-Hermite-Ito polynomial (unit ``L^2(mu)`` norm)."""
    if n_vars is None:
        n_vars = max(idx.support, 1)
    return hermite_product(idx, n_vars).scale(1 / math.sqrt(basis_norm_sq(idx)))


def iter_indices(n_vars, max_degree):
    """All indices with ``|m| + |n| <= max_degree``.

    Ordered by total degree, then reverse-lex on the concatenated ``(m, n)``
    exponent vector (the order :func:`_compositions` yields).
    """
    for tot in range(max_degree + 1):
        for e in _compositions(tot, 2 * n_vars):
            yield ChaosIndex(e[:n_vars], e[n_vars:])


class ChaosExpansion:
    """Finite chaos expansion on ``n_vars`` coordinates.

    ``raw`` maps :class:`ChaosIndex` to the coefficient on the unnormalised
    product basis; :attr:`coefficients` gives the orthonormal-basis view.
    """

    __slots__ = ("n_vars", "raw")

    def __init__(self, n_vars, raw):
        self.n_vars = int(n_vars)
        self.raw = {k: v for k, v in raw.items() if v != 0}
        for k in self.raw:
            k.padded(self.n_vars)

    @classmethod
    def from_normalized(cls, n_vars, coeffs):
        return cls(n_vars, {k: c / math.sqrt(basis_norm_sq(k)) for k, c in coeffs.items()})

    @property
    def coefficients(self):
        return {k: v * math.sqrt(basis_norm_sq(k)) for k, v in self.sorted_items()}

    def sorted_items(self):
        return sorted(self.raw.items(), key=lambda kv: (sum(kv[0].order), kv[0].m, kv[0].n))

    def __len__(self):
        return len(self.raw)

    def __eq__(self, other):
        if not isinstance(other, ChaosExpansion):
            return NotImplemented
        return self.n_vars == other.n_vars and self.raw == other.raw

    def __repr__(self):
        return f"ChaosExpansion(n_vars={self.n_vars}, terms={len(self.raw)})"

    def norm_sq(self):
        """Parseval: ``sum |c|^2`` over the orthonormal coefficients."""
        acc = 0
        for k, v in self.raw.items():
            acc = acc + v * v.conjugate() * basis_norm_sq(k)
        return acc

    def component(self, m, n):
        return ChaosExpansion(self.n_vars, {k: v for k, v in self.raw.items() if k.order == (m, n)})

    def map(self, fn):
        """New expansion with ``raw[k] -> fn(k, raw[k])``."""
        return ChaosExpansion(self.n_vars, {k: fn(k, v) for k, v in self.raw.items()})

    def reconstruct(self):
        acc = WirtingerPolynomial.zero(self.n_vars)
        for k, v in self.sorted_items():
            acc = acc + hermite_product(k, self.n_vars).scale(v)
        return acc

    def to_dict(self):
        return {
            "n_vars": self.n_vars,
            "coeffs": [
                {"m": list(k.padded(self.n_vars)[0]), "n": list(k.padded(self.n_vars)[1]),
                 "re": float(complex(c).real), "im": float(complex(c).imag)}
                for k, c in self.coefficients.items()
            ],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        coeffs = {ChaosIndex(tuple(e["m"]), tuple(e["n"])): complex(e["re"], e.get("im", 0.0))
                  for e in d["coeffs"]}
        return cls.from_normalized(int(d["n_vars"]), coeffs)

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def _candidate_indices(f):
    # only indices whose per-variable orders fit under f's per-variable degrees
    # can pair nontrivially with f
    da, db = f.var_degrees()
    deg = f.degree
    for idx in iter_indices(f.n_vars, max(deg, 0)):
        m, n = idx.padded(f.n_vars)
        if all(m[j] <= da[j] and n[j] <= db[j] for j in range(f.n_vars)):
            yield idx


def expand(f):
    """Chaos expansion of a polynomial; exact for exact coefficients."""
    raw = {}
    for idx in _candidate_indices(f):
        c = gaussian_inner_product(f, hermite_product(idx, f.n_vars))
        if c != 0:
            raw[idx] = exact_div(c, basis_norm_sq(idx))
    return ChaosExpansion(f.n_vars, raw)


def project(f, m, n):
    """Component of ``f`` in the chaos ``H_{m,n}``."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    return expand(f).component(m, n).reconstruct()
