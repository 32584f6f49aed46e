"""Sparse polynomials in z_1..z_n and their conjugates.

A term is keyed by two exponent tuples ``(a, b)``: ``a[j]`` is the power of
``z_j`` and ``b[j]`` the power of ``conj(z_j)``. The two families are treated
as independent variables, so ``d_z`` and ``d_zbar`` are plain formal partial
derivatives (Wirtinger derivatives on polynomials).
"""
import json
import numbers
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from . import kernels
from .gaussint import GaussianRational

__all__ = [
    "WirtingerPolynomial", "d_z", "d_zbar", "poly_add", "poly_mul",
    "poly_scale", "evaluate", "random_polynomial",
]


def _is_zero(c):
    return c == 0


class WirtingerPolynomial:
    """Immutable sparse polynomial in ``(z, conj z)``.

    Parameters
    ----------
    n_vars : int
        Number of complex coordinates.
    terms : mapping, optional
        ``{(a, b): coefficient}`` with ``a``, ``b`` length-``n_vars`` tuples of
        nonnegative ints. Zero coefficients are dropped.

    Coefficients may be any Python number; ints, ``Fraction`` and
    ``GaussianRational`` keep arithmetic exact.
    """

    __slots__ = ("n_vars", "_terms", "_hash")

    def __init__(self, n_vars, terms=None):
        if not isinstance(n_vars, numbers.Integral) or n_vars < 1:
            raise ValueError(f"n_vars must be a positive integer, got {n_vars!r}")
        self.n_vars = int(n_vars)
        clean = {}
        if terms:
            for key, c in terms.items():
                a, b = key
                a = tuple(int(x) for x in a)
                b = tuple(int(x) for x in b)
                if len(a) != n_vars or len(b) != n_vars:
                    raise ValueError(f"exponent length mismatch for n_vars={n_vars}: {key}")
                if min(a + b) < 0:
                    raise ValueError(f"negative exponent in {key}")
                if _is_zero(c):
                    continue
                k = (a, b)
                if k in clean:
                    c = clean[k] + c
                    if _is_zero(c):
                        del clean[k]
                        continue
                clean[k] = c
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, n_vars, terms):
        # terms already canonical
        p = cls.__new__(cls)
        p.n_vars = n_vars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, n_vars=1):
        zero = (0,) * n_vars
        return cls(n_vars, {(zero, zero): c})

    @classmethod
    def zero(cls, n_vars=1):
        return cls._raw(n_vars, {})

    @classmethod
    def monomial(cls, a, b, coeff=1):
        a = tuple(a)
        return cls(len(a), {(a, tuple(b)): coeff})

    @classmethod
    def z(cls, j=0, n_vars=1):
        a = [0] * n_vars
        a[j] = 1
        return cls.monomial(a, [0] * n_vars)

    @classmethod
    def zbar(cls, j=0, n_vars=1):
        b = [0] * n_vars
        b[j] = 1
        return cls.monomial([0] * n_vars, b)

    # -- basic properties ---------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self._terms)

    def var_degrees(self):
        """Per-coordinate maximal powers ``(max a_j, max b_j)``."""
        da = [0] * self.n_vars
        db = [0] * self.n_vars
        for a, b in self._terms:
            for j in range(self.n_vars):
                da[j] = max(da[j], a[j])
                db[j] = max(db[j], b[j])
        return tuple(da), tuple(db)

    def sorted_terms(self):
        """Terms in graded-lex order on (total degree, a, b)."""
        return sorted(self._terms.items(),
                      key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), kv[0][0], kv[0][1]))

    def coefficient(self, a, b):
        return self._terms.get((tuple(a), tuple(b)), 0)

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def lift(self, n_vars, offset=0):
        """Embed into ``n_vars`` coordinates starting at ``offset``."""
        if offset + self.n_vars > n_vars:
            raise ValueError("target space too small")
        pad_l = (0,) * offset
        pad_r = (0,) * (n_vars - offset - self.n_vars)
        return WirtingerPolynomial._raw(
            n_vars, {(pad_l + a + pad_r, pad_l + b + pad_r): c for (a, b), c in self._terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if other.n_vars != self.n_vars:
            raise ValueError(f"n_vars mismatch: {self.n_vars} vs {other.n_vars}")

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = WirtingerPolynomial.constant(other, self.n_vars)
        if not isinstance(other, WirtingerPolynomial):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = out[k] + c
                if _is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return WirtingerPolynomial._raw(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return WirtingerPolynomial._raw(self.n_vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if _is_zero(c):
            return WirtingerPolynomial.zero(self.n_vars)
        out = {}
        for k, v in self._terms.items():
            w = v * c
            if not _is_zero(w):
                out[k] = w
        return WirtingerPolynomial._raw(self.n_vars, out)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if not isinstance(other, WirtingerPolynomial):
            return NotImplemented
        self._check(other)
        n = self.n_vars
        out = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (tuple(a1[j] + a2[j] for j in range(n)),
                     tuple(b1[j] + b2[j] for j in range(n)))
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return WirtingerPolynomial._raw(n, {k: c for k, c in out.items() if not _is_zero(c)})

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c):
        if not isinstance(c, numbers.Number):
            return NotImplemented
        out = {}
        for k, v in self._terms.items():
            if isinstance(v, int) and isinstance(c, int):
                w = Fraction(v, c)
            else:
                w = v / c
            out[k] = w
        return WirtingerPolynomial._raw(self.n_vars, out)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = WirtingerPolynomial.constant(1, self.n_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        """Pointwise complex conjugate: conjugate coefficients, swap a and b."""
        return WirtingerPolynomial._raw(
            self.n_vars, {(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def map_coefficients(self, fn):
        return WirtingerPolynomial(self.n_vars, {k: fn(c) for k, c in self._terms.items()})

    def to_complex(self):
        """Same polynomial with floating complex coefficients."""
        return self.map_coefficients(complex)

    # -- calculus -----------------------------------------------------------

    def d_z(self, j):
        return self._diff(j, conj=False)

    def d_zbar(self, j):
        return self._diff(j, conj=True)

    def _diff(self, j, conj):
        if not 0 <= j < self.n_vars:
            raise IndexError(f"coordinate {j} out of range for n_vars={self.n_vars}")
        out = {}
        for (a, b), c in self._terms.items():
            e = b if conj else a
            k = e[j]
            if k == 0:
                continue
            e2 = e[:j] + (k - 1,) + e[j + 1:]
            key = (a, e2) if conj else (e2, b)
            out[key] = c * k
        return WirtingerPolynomial._raw(self.n_vars, out)

    # -- evaluation ---------------------------------------------------------

    def to_arrays(self):
        """``(exps_a, exps_b, coeffs)`` numpy arrays for the kernels."""
        items = self.sorted_terms()
        n = self.n_vars
        ea = np.array([k[0] for k, _ in items], dtype=np.int64).reshape(-1, n)
        eb = np.array([k[1] for k, _ in items], dtype=np.int64).reshape(-1, n)
        cs = np.array([complex(c) for _, c in items], dtype=np.complex128)
        return ea, eb, cs

    def __call__(self, point):
        return evaluate(self, point)

    def evaluate_batch(self, points):
        """Evaluate at each row of an ``(N, n_vars)`` complex array."""
        points = np.asarray(points, dtype=np.complex128)
        if points.ndim == 1:
            points = points[:, None] if self.n_vars == 1 else points[None, :]
        if points.shape[1] != self.n_vars:
            raise ValueError(f"points have {points.shape[1]} columns, expected {self.n_vars}")
        return kernels.eval_terms(*self.to_arrays(), points)

    # -- comparison / io ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = WirtingerPolynomial.constant(other, self.n_vars)
        if not isinstance(other, WirtingerPolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return f"WirtingerPolynomial({self.n_vars}, 0)"
        return f"WirtingerPolynomial({self.n_vars}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            mono = []
            for j in range(self.n_vars):
                name = "z" if self.n_vars == 1 else f"z{j}"
                if a[j]:
                    mono.append(name + (f"^{a[j]}" if a[j] > 1 else ""))
                if b[j]:
                    mono.append(name + "~" + (f"^{b[j]}" if b[j] > 1 else ""))
            parts.append(f"{c}" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    def to_dict(self):
        return {
            "n_vars": self.n_vars,
            "terms": [
                {"a": list(a), "b": list(b),
                 "re": float(complex(c).real), "im": float(complex(c).imag)}
                for (a, b), c in self.sorted_terms()
            ],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        n = int(d["n_vars"])
        terms = {}
        for t in d["terms"]:
            re, im = float(t["re"]), float(t.get("im", 0.0))
            c = (int(re) if re.is_integer() and abs(re) < 2**53 else re) if im == 0 else complex(re, im)
            terms[(tuple(t["a"]), tuple(t["b"]))] = c
        return cls(n, terms)

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_scale(p, c):
    return p.scale(c)


def d_z(p, j=0):
    return p.d_z(j)


def d_zbar(p, j=0):
    return p.d_zbar(j)


def evaluate(p, point):
    """Substitute ``z_j = point[j]`` and ``conj z_j = conj(point[j])``."""
    pt = np.atleast_1d(np.asarray(point, dtype=np.complex128))
    if pt.shape != (p.n_vars,):
        raise ValueError(f"point must have length {p.n_vars}")
    zs = [complex(v) for v in pt]
    acc = 0j
    for (a, b), c in p._terms.items():
        m = complex(c)
        for j, z in enumerate(zs):
            if a[j]:
                m *= z ** a[j]
            if b[j]:
                m *= z.conjugate() ** b[j]
        acc += m
    return acc


def random_polynomial(rng, n_vars, degree, n_terms=None, coeff_range=3, exact=True):
    """Random polynomial of total degree at most ``degree``.

    Coefficients are Gaussian integers with parts in ``[-coeff_range, coeff_range]``
    (``exact=True``) or standard complex normals otherwise.
    """
    keys = []
    for tot in range(degree + 1):
        keys.extend(_exponent_pairs(n_vars, tot))
    if n_terms is None:
        n_terms = min(len(keys), 2 * degree + 2)
    n_terms = min(n_terms, len(keys))
    picks = rng.choice(len(keys), size=n_terms, replace=False)
    terms = {}
    for i in picks:
        if exact:
            re, im = rng.integers(-coeff_range, coeff_range + 1, size=2)
            c = GaussianRational(int(re), int(im))
            if not c:
                c = GaussianRational(1)
        else:
            c = complex(rng.standard_normal(), rng.standard_normal())
        terms[keys[i]] = c
    return WirtingerPolynomial(n_vars, terms)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _exponent_pairs(n_vars, total):
    out = []
    for e in _compositions(total, 2 * n_vars):
        out.append((e[:n_vars], e[n_vars:]))
    return out
