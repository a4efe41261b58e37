"""Exact symmetric-function combinatorics in n variables.

Symmetric Laurent polynomials are stored by orbit: one dominant
(weakly decreasing) exponent vector per S_n-orbit of monomials. The
coefficient ring is generic; anything supporting +, *, == 0 works
(ints, Fractions, QSqrt scalars, QPolynomial).
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "Partition",
    "QPolynomial",
    "SymLaurentPoly",
    "WeightMismatchWarning",
    "check_dominant",
    "partitions",
    "dominates",
    "distinct_permutations",
    "orbit_size",
    "ssyt",
    "kostka_number",
    "schur_expand",
    "to_schur",
    "from_schur",
    "lr_coefficients",
    "lr_multiply",
    "charge",
    "reading_word",
    "kostka_foulkes",
    "hall_littlewood_P",
    "dual",
    "evaluate",
    "evaluate_many",
]

Weight = tuple[int, ...]


class WeightMismatchWarning(UserWarning):
    """Kostka-Foulkes requested for partitions of different sizes."""


# ---------------------------------------------------------------------------
# partitions and weights


class Partition(tuple):
    """Weakly decreasing tuple of non-negative ints with trailing zeros trimmed."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def padded(self, n: int) -> Weight:
        if len(self) > n:
            raise ValueError(f"partition {tuple(self)} longer than {n}")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for x in self if x > j) for j in range(self[0]))

    def n_statistic(self) -> int:
        """sum (i-1) * lambda_i, the degree shift in Kostka-Foulkes theory."""
        return sum(i * x for i, x in enumerate(self))

    def __repr__(self):
        return f"Partition({tuple(self)})"


def check_dominant(w: Sequence[int], n: int | None = None) -> Weight:
    """Validate a weakly decreasing integer vector; returns it as a tuple."""
    w = tuple(int(x) for x in w)
    if n is not None and len(w) != n:
        raise ValueError(f"weight {w} has length {len(w)}, expected rank {n}")
    for i in range(len(w) - 1):
        if w[i] < w[i + 1]:
            raise ValueError(f"weight {w} is not dominant: entry {i} < entry {i + 1}")
    return w


def partitions(total: int, max_len: int | None = None, max_part: int | None = None) -> Iterator[Weight]:
    """Partitions of ``total`` in reverse lexicographic order."""
    if max_part is None:
        max_part = total
    if max_len is None:
        max_len = total

    def rec(rem, cap, slots):
        if rem == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(rem, cap), 0, -1):
            if first * slots < rem:
                break
            for rest in rec(rem - first, first, slots - 1):
                yield (first,) + rest

    yield from rec(total, max_part, max_len)


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Dominance order a >= b for equal-sum sequences (compared after sorting)."""
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    m = max(len(a), len(b))
    a = a + [0] * (m - len(a))
    b = b + [0] * (m - len(b))
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            return False
    return True


@lru_cache(maxsize=None)
def distinct_permutations(w: Weight) -> tuple[Weight, ...]:
    """All distinct rearrangements of ``w``."""
    if len(w) <= 1:
        return (tuple(w),)
    out = []
    seen = set()
    for i, x in enumerate(w):
        if x in seen:
            continue
        seen.add(x)
        rest = w[:i] + w[i + 1:]
        for tail in distinct_permutations(rest):
            out.append((x,) + tail)
    return tuple(out)


@lru_cache(maxsize=None)
def orbit_size(w: Weight) -> int:
    counts = defaultdict(int)
    for x in w:
        counts[x] += 1
    size = math.factorial(len(w))
    for c in counts.values():
        size //= math.factorial(c)
    return size


def _sorted_desc(w) -> Weight:
    return tuple(sorted(w, reverse=True))


def _is_zero(c) -> bool:
    return c == 0


# ---------------------------------------------------------------------------
# polynomials in one formal variable


class QPolynomial:
    """Exact polynomial in one variable, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        cs = [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in cs]
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    @classmethod
    def constant(cls, c) -> "QPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPolynomial":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lowest_degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return -1

    def _lift(self, other):
        if isinstance(other, QPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return QPolynomial((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        m = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = o.coeffs + (0,) * (m - len(o.coeffs))
        return QPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return QPolynomial()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(o.coeffs):
                out[i + j] += x * y
        return QPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = QPolynomial((1,))
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, other: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.coeffs[-1])
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return QPolynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return QPolynomial(quot), QPolynomial(rem)

    __divmod__ = divmod

    def exact_div(self, other: "QPolynomial") -> "QPolynomial":
        q, r = self.divmod(other)
        if r.coeffs:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def reversed(self) -> "QPolynomial":
        """q^deg * f(1/q)."""
        return QPolynomial(reversed(self.coeffs))

    def shift_down(self) -> "QPolynomial":
        """Divide by the largest power of q dividing f."""
        low = self.lowest_degree
        if low <= 0:
            return self
        return QPolynomial(self.coeffs[low:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_palindromic(self) -> bool:
        core = self.shift_down().coeffs
        return core == core[::-1]

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"QPolynomial({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# symmetric Laurent polynomials


class SymLaurentPoly:
    """Symmetric Laurent polynomial stored as orbit sums of monomials.

    ``terms`` maps a dominant weight w to the coefficient of every monomial
    x^v with v a rearrangement of w. Zero coefficients are dropped.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | None = None):
        if n < 1:
            raise ValueError("rank must be positive")
        clean = {}
        for w, c in (terms or {}).items():
            w = check_dominant(w, n)
            if not _is_zero(c):
                clean[w] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __setattr__(self, name, value):
        raise AttributeError("SymLaurentPoly is immutable")

    # constructors
    @classmethod
    def zero(cls, n: int) -> "SymLaurentPoly":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c=1) -> "SymLaurentPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def one(cls, n: int) -> "SymLaurentPoly":
        return cls.constant(n, 1)

    @classmethod
    def monomial(cls, w: Sequence[int], c=1) -> "SymLaurentPoly":
        """The orbit sum m_w (w is sorted first)."""
        w = _sorted_desc(w)
        return cls(len(w), {w: c})

    @classmethod
    def from_exponents(cls, n: int, monomials: Mapping[Sequence[int], object]) -> "SymLaurentPoly":
        """Build from a full monomial dictionary, checking symmetry."""
        reps: dict[Weight, object] = {}
        for e, c in monomials.items():
            if _is_zero(c):
                continue
            key = _sorted_desc(e)
            if key in reps:
                if reps[key] != c:
                    raise ValueError(f"not symmetric at orbit {key}")
            else:
                reps[key] = c
        for key, c in reps.items():
            for v in distinct_permutations(key):
                if monomials.get(v, 0) != c:
                    raise ValueError(f"not symmetric: missing {v}")
        return cls(n, reps)

    # basic accessors
    def coefficient(self, w: Sequence[int]):
        return self.terms.get(_sorted_desc(w), 0)

    def items(self):
        return self.terms.items()

    def monomials(self) -> Iterator[tuple[Weight, object]]:
        """Every monomial of the full expansion."""
        for w, c in self.terms.items():
            for v in distinct_permutations(w):
                yield v, c

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(w == (0,) * self.n for w in self.terms)

    def degree_range(self) -> tuple[int, int]:
        """(min, max) of total degree over monomials: the naive Laurent degree."""
        if not self.terms:
            return (0, 0)
        sums = [sum(w) for w in self.terms]
        return (min(sums), max(sums))

    def spread_degree(self) -> int:
        """max over terms of (max entry - min entry); ignores determinant twists."""
        if not self.terms:
            return 0
        return max(w[0] - w[-1] for w in self.terms)

    # arithmetic
    def _check(self, other: "SymLaurentPoly"):
        if other.n != self.n:
            raise ValueError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, SymLaurentPoly):
            other = SymLaurentPoly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return SymLaurentPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SymLaurentPoly(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SymLaurentPoly):
            other = SymLaurentPoly.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SymLaurentPoly":
        return SymLaurentPoly(self.n, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SymLaurentPoly):
            return self.scale(other)
        self._check(other)
        if len(self.terms) > len(other.terms):
            big, small = self, other
        else:
            big, small = other, self
        out: dict[Weight, object] = {}
        for a, ca in small.terms.items():
            oa = orbit_size(a)
            for b, cb in big.terms.items():
                tally: dict[Weight, int] = defaultdict(int)
                for beta in distinct_permutations(b):
                    tally[_sorted_desc(x + y for x, y in zip(a, beta))] += 1
                cab = ca * cb
                for key, count in tally.items():
                    mult, rem = divmod(oa * count, orbit_size(key))
                    assert rem == 0
                    contrib = cab * mult
                    out[key] = out[key] + contrib if key in out else contrib
        return SymLaurentPoly(self.n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = SymLaurentPoly.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "SymLaurentPoly":
        """Multiply by (x_1 ... x_n)^k."""
        return SymLaurentPoly(self.n, {tuple(x + k for x in w): c for w, c in self.terms.items()})

    def map_coefficients(self, f: Callable) -> "SymLaurentPoly":
        return SymLaurentPoly(self.n, {w: f(c) for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SymLaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = SymLaurentPoly.constant(self.n, other)
            else:
                return NotImplemented
        if self.n != other.n:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        inner = ", ".join(f"{w}: {c}" for w, c in sorted(self.terms.items(), reverse=True))
        return f"SymLaurentPoly(n={self.n}, {{{inner}}})"


def dual(poly: SymLaurentPoly) -> SymLaurentPoly:
    """x_i -> 1/x_i with complex-conjugated coefficients."""

    def conj(c):
        f = getattr(c, "conjugate", None)
        return f() if f is not None else c

    return SymLaurentPoly(
        poly.n, {tuple(-x for x in reversed(w)): conj(c) for w, c in poly.terms.items()}
    )


def _to_complex(c):
    if isinstance(c, Fraction):
        return c.numerator / c.denominator
    return complex(c)


def evaluate(poly: SymLaurentPoly, alpha: Sequence[complex], precision: int | None = None):
    """Evaluate at the point alpha.

    With ``precision`` (decimal digits) the computation runs in mpmath and
    returns an ``mpmath.mpc``; otherwise ordinary complex floats are used.
    """
    alpha = list(alpha)
    if len(alpha) != poly.n:
        raise ValueError(f"expected {poly.n} coordinates, got {len(alpha)}")
    if any(a == 0 for a in alpha):
        raise ValueError("evaluation point has a zero coordinate")
    if precision is None:
        total = 0j
        for v, c in poly.monomials():
            term = _to_complex(c)
            for a, e in zip(alpha, v):
                term *= complex(a) ** e
            total += term
        return total

    import mpmath

    with mpmath.workdps(precision):
        pts = [mpmath.mpc(a) for a in alpha]
        total = mpmath.mpc(0)
        for v, c in poly.monomials():
            term = _mp_coefficient(c)
            for a, e in zip(pts, v):
                term *= a ** e
            total += term
        return +total


def _mp_coefficient(c):
    import mpmath

    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return mpmath.mpf(c.numerator) / c.denominator
    if hasattr(c, "a") and hasattr(c, "b") and hasattr(c, "p"):
        return _mp_coefficient(c.a) + _mp_coefficient(c.b) * mpmath.sqrt(c.p)
    return mpmath.mpmathify(c)


def evaluate_many(poly: SymLaurentPoly, alphas, chunk: int = 4096) -> np.ndarray:
    """Vectorised float evaluation at each row of an (m, n) complex array."""
    alphas = np.asarray(alphas, dtype=complex)
    if alphas.ndim != 2 or alphas.shape[1] != poly.n:
        raise ValueError(f"expected shape (m, {poly.n})")
    if np.any(alphas == 0):
        raise ValueError("evaluation point has a zero coordinate")
    mons = list(poly.monomials())
    if not mons:
        return np.zeros(alphas.shape[0], dtype=complex)
    expo = np.array([v for v, _ in mons], dtype=np.int64)
    coef = np.array([_to_complex(c) for _, c in mons], dtype=complex)
    lo = int(expo.min())
    hi = int(expo.max())
    out = np.empty(alphas.shape[0], dtype=complex)
    for start in range(0, alphas.shape[0], chunk):
        block = alphas[start:start + chunk]
        # table of powers a_i^k for k in [lo, hi]
        ks = np.arange(lo, hi + 1)
        powers = block[:, :, None] ** ks[None, None, :]
        vals = np.ones((block.shape[0], len(mons)), dtype=complex)
        for i in range(poly.n):
            vals *= powers[:, i, expo[:, i] - lo]
        out[start:start + chunk] = vals @ coef
    return out


# ---------------------------------------------------------------------------
# tableaux


def _horizontal_strips(inner: Weight, outer: Weight, size: int) -> Iterator[Weight]:
    """Shapes rho with inner <= rho <= outer and rho/inner a horizontal strip of ``size``."""
    m = len(outer)

    def rec(j, rem, acc):
        if j == m:
            if rem == 0:
                yield tuple(acc)
            return
        cap = outer[j] if j == 0 else min(outer[j], inner[j - 1])
        lo = inner[j]
        for r in range(min(cap, lo + rem), lo - 1, -1):
            acc.append(r)
            yield from rec(j + 1, rem - (r - lo), acc)
            acc.pop()

    yield from rec(0, size, [])


def ssyt(shape: Sequence[int], content: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Semistandard tableaux of ``shape`` whose content is ``content``.

    Tableaux are tuples of rows (English convention), letters 1..len(content).
    """
    shape = tuple(Partition(shape))
    content = tuple(int(c) for c in content)
    if sum(shape) != sum(content) or any(c < 0 for c in content):
        return
    rows_len = len(shape)

    def rec(letter, current, rows):
        if letter > len(content):
            if current == shape:
                yield tuple(tuple(r) for r in rows)
            return
        for nxt in _horizontal_strips(current, shape, content[letter - 1]):
            added = [nxt[j] - current[j] for j in range(rows_len)]
            for j, a in enumerate(added):
                rows[j].extend([letter] * a)
            yield from rec(letter + 1, nxt, rows)
            for j, a in enumerate(added):
                if a:
                    del rows[j][-a:]

    yield from rec(1, (0,) * rows_len, [[] for _ in range(rows_len)])


@lru_cache(maxsize=None)
def kostka_number(shape: Weight, content: Weight) -> int:
    """Number of SSYT of the given shape and content (content any composition)."""
    shape = tuple(Partition(shape))
    content = tuple(content)
    if sum(shape) != sum(content):
        return 0

    @lru_cache(maxsize=None)
    def count(letter, current):
        if letter == len(content):
            return 1 if current == shape else 0
        return sum(count(letter + 1, nxt) for nxt in _horizontal_strips(current, shape, content[letter]))

    return count(0, (0,) * len(shape))


# ---------------------------------------------------------------------------
# Schur functions


def _schur_by_tableaux(lam: Weight, n: int) -> dict[Weight, int]:
    out = {}
    for mu in partitions(sum(lam), max_len=n):
        if not dominates(lam, mu):
            continue
        k = kostka_number(tuple(Partition(lam)), mu)
        if k:
            out[mu + (0,) * (n - len(mu))] = k
    return out


@lru_cache(maxsize=None)
def _complete_homogeneous(k: int, n: int) -> SymLaurentPoly:
    if k < 0:
        return SymLaurentPoly.zero(n)
    return SymLaurentPoly(n, {mu + (0,) * (n - len(mu)): 1 for mu in partitions(k, max_len=n)})


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _schur_by_jacobi_trudi(lam: Weight, n: int) -> dict[Weight, int]:
    lam = tuple(Partition(lam))
    ell = len(lam)
    if ell == 0:
        return {(0,) * n: 1}
    total = SymLaurentPoly.zero(n)
    for perm in permutations(range(ell)):
        idx = [lam[i] - i + perm[i] for i in range(ell)]
        if min(idx) < 0:
            continue
        term = SymLaurentPoly.constant(n, _permutation_sign(perm))
        for k in idx:
            if k:
                term = term * _complete_homogeneous(k, n)
        total = total + term
    return dict(total.terms)


@lru_cache(maxsize=None)
def _schur_cached(lam: Weight, n: int, method: str) -> SymLaurentPoly:
    if method == "tableaux":
        return SymLaurentPoly(n, _schur_by_tableaux(lam, n))
    return SymLaurentPoly(n, _schur_by_jacobi_trudi(lam, n))


def schur_expand(nu: Sequence[int], n: int | None = None, method: str = "auto") -> SymLaurentPoly:
    """Monomial expansion of the Schur polynomial s_nu in n variables.

    ``nu`` may have negative entries; the minimal entry is factored out as a
    power of x_1...x_n. ``method`` is "tableaux", "jacobi_trudi", or "auto"
    (tableaux up to weight 8, Jacobi-Trudi above).
    """
    nu = tuple(int(x) for x in nu)
    if n is None:
        n = len(nu)
    if len(nu) < n and all(x >= 0 for x in nu):
        nu = nu + (0,) * (n - len(nu))
    nu = check_dominant(nu, n)
    shift = nu[-1]
    lam = tuple(x - shift for x in nu)
    if method == "auto":
        method = "tableaux" if sum(lam) <= 8 else "jacobi_trudi"
    if method not in ("tableaux", "jacobi_trudi"):
        raise ValueError(f"unknown expansion method {method!r}")
    base = _schur_cached(lam, n, method)
    return base.shift(shift) if shift else base


def to_schur(poly: SymLaurentPoly) -> dict[Weight, object]:
    """Schur-basis coefficients of a symmetric Laurent polynomial.

    Peels off the lexicographically largest orbit, which is always the top
    of a Schur function, until nothing is left.
    """
    remaining = dict(poly.terms)
    out: dict[Weight, object] = {}
    while remaining:
        top = max(remaining)
        c = remaining[top]
        out[top] = c
        for w, k in schur_expand(top, poly.n).terms.items():
            v = remaining.get(w, 0) - c * k
            if _is_zero(v):
                remaining.pop(w, None)
            else:
                remaining[w] = v
    return out


def from_schur(coeffs: Mapping[Sequence[int], object], n: int) -> SymLaurentPoly:
    """Inverse of :func:`to_schur`."""
    out: dict[Weight, object] = {}
    for nu, c in coeffs.items():
        if _is_zero(c):
            continue
        for w, k in schur_expand(tuple(nu), n).terms.items():
            v = c * k
            out[w] = out[w] + v if w in out else v
    return SymLaurentPoly(n, out)


# ---------------------------------------------------------------------------
# Littlewood-Richardson


def _is_lattice(word: Sequence[int]) -> bool:
    counts = defaultdict(int)
    for x in word:
        counts[x] += 1
        if x > 1 and counts[x] > counts[x - 1]:
            return False
    return True


@lru_cache(maxsize=None)
def lr_coefficients(lam: Weight, mu: Weight, max_len: int | None = None) -> Mapping[Weight, int]:
    """c^nu_{lam, mu} for all nu, optionally keeping only len(nu) <= max_len.

    Counts skew tableaux of shape nu/lam and content mu whose reverse reading
    word (rows top to bottom, each right to left) is a lattice word.
    """
    lam = tuple(Partition(lam))
    mu = tuple(Partition(mu))
    rows = len(lam) + len(mu)
    start = lam + (0,) * (rows - len(lam))
    outer = (start[0] + sum(mu),) * rows if rows else ()
    out: dict[Weight, int] = defaultdict(int)

    def rec(letter, current, fill):
        if letter > len(mu):
            word = [x for row in fill for x in reversed(row)]
            if _is_lattice(word):
                nu = tuple(Partition(current))
                if max_len is None or len(nu) <= max_len:
                    out[nu] += 1
            return
        for nxt in _horizontal_strips(current, outer, mu[letter - 1]):
            added = [nxt[j] - current[j] for j in range(rows)]
            for j, a in enumerate(added):
                fill[j].extend([letter] * a)
            if _is_lattice([x for row in fill for x in reversed(row)]):
                rec(letter + 1, nxt, fill)
            for j, a in enumerate(added):
                if a:
                    del fill[j][-a:]

    rec(1, start, [[] for _ in range(rows)])
    return MappingProxyType(dict(out))


def _lr_schur_product(a: Mapping, b: Mapping, n: int) -> dict[Weight, object]:
    out: dict[Weight, object] = {}
    for alpha, ca in a.items():
        for beta, cb in b.items():
            shift = alpha[-1] + beta[-1]
            la = tuple(Partition(x - alpha[-1] for x in alpha))
            lb = tuple(Partition(x - beta[-1] for x in beta))
            for nu, c in lr_coefficients(la, lb, n).items():
                key = tuple(x + shift for x in nu + (0,) * (n - len(nu)))
                v = ca * cb * c
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if not _is_zero(v)}


def lr_multiply(a: SymLaurentPoly, b: SymLaurentPoly, method: str = "lr") -> dict[Weight, object]:
    """Schur-basis coefficients of the product a*b.

    ``method``: "lr" expands both factors in the Schur basis and applies the
    Littlewood-Richardson rule; "monomial" convolves monomials and re-expands;
    "both" runs the two and raises ``ArithmeticError`` if they differ.
    """
    if a.n != b.n:
        raise ValueError(f"rank mismatch: {a.n} vs {b.n}")
    if method == "monomial":
        return to_schur(a * b)
    lr = _lr_schur_product(to_schur(a), to_schur(b), a.n)
    if method == "lr":
        return lr
    if method == "both":
        mono = to_schur(a * b)
        keys = set(lr) | set(mono)
        if any(lr.get(k, 0) != mono.get(k, 0) for k in keys):
            raise ArithmeticError("Littlewood-Richardson and monomial products disagree")
        return lr
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# charge and Kostka-Foulkes


def reading_word(tableau: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Rows from bottom to top, each read left to right."""
    return tuple(x for row in reversed(tableau) for x in row)


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a word with partition content."""
    letters = list(word)
    total = 0
    while letters:
        m = max(letters)
        if sorted(set(letters)) != list(range(1, m + 1)):
            raise ValueError("word content is not a partition")
        L = len(letters)
        picked = []
        pos = L  # start scanning from the right end
        index = 0
        prev_pos = None
        for r in range(1, m + 1):
            # scan leftward cyclically from pos - 1 for letter r
            found = None
            for step in range(1, L + 1):
                j = (pos - step) % L
                if letters[j] == r and j not in picked:
                    found = j
                    break
            if found is None:
                raise ValueError("word content is not a partition")
            if prev_pos is not None and found > prev_pos:
                index += 1
            total += index
            picked.append(found)
            prev_pos = found
            pos = found
        keep = set(range(L)) - set(picked)
        letters = [letters[j] for j in sorted(keep)]
    return total


# (lam, mu) -> K_{lam, mu}; the CLI seeds and persists this table
KOSTKA_FOULKES_TABLE: dict[tuple[Weight, Weight], QPolynomial] = {}


def _kostka_foulkes_cached(lam: Weight, mu: Weight) -> QPolynomial:
    hit = KOSTKA_FOULKES_TABLE.get((lam, mu))
    if hit is not None:
        return hit
    coeffs: dict[int, int] = defaultdict(int)
    for t in ssyt(lam, mu):
        coeffs[charge(reading_word(t))] += 1
    out = QPolynomial(coeffs.get(i, 0) for i in range(max(coeffs) + 1)) if coeffs else QPolynomial()
    KOSTKA_FOULKES_TABLE[(lam, mu)] = out
    return out


def kostka_foulkes(lam: Sequence[int], mu: Sequence[int]) -> QPolynomial:
    """K_{lam, mu}(q) as the charge generating function over SSYT(lam, mu).

    Partitions of different sizes give the zero polynomial and a
    :class:`WeightMismatchWarning`.
    """
    lam = tuple(Partition(lam))
    mu = tuple(Partition(mu))
    if sum(lam) != sum(mu):
        warnings.warn(f"|{lam}| != |{mu}|", WeightMismatchWarning, stacklevel=2)
        return QPolynomial()
    return _kostka_foulkes_cached(lam, mu)


# ---------------------------------------------------------------------------
# Hall-Littlewood


def _t_factorial(m: int) -> QPolynomial:
    """prod_{j=1}^m (1 - t^j)/(1 - t)."""
    out = QPolynomial((1,))
    for j in range(1, m + 1):
        out = out * QPolynomial((1,) * j)
    return out


@lru_cache(maxsize=None)
def _hall_littlewood_cached(lam: Weight, n: int) -> SymLaurentPoly:
    one = QPolynomial((1,))
    minus_t = QPolynomial((0, -1))
    poly: dict[Weight, QPolynomial] = {lam: one}
    for i in range(n):
        for j in range(i + 1, n):
            nxt: dict[Weight, QPolynomial] = defaultdict(QPolynomial)
            for e, c in poly.items():
                ei = list(e)
                ei[i] += 1
                nxt[tuple(ei)] = nxt[tuple(ei)] + c
                ej = list(e)
                ej[j] += 1
                nxt[tuple(ej)] = nxt[tuple(ej)] + c * minus_t
            poly = {e: c for e, c in nxt.items() if c}
    # antisymmetrise; only strictly decreasing rearrangements survive
    alt: dict[Weight, QPolynomial] = defaultdict(QPolynomial)
    for e, c in poly.items():
        if len(set(e)) < n:
            continue
        order = sorted(range(n), key=lambda k: -e[k])
        alt[tuple(e[k] for k in order)] += c * _permutation_sign(order)
    delta = tuple(range(n - 1, -1, -1))
    acc: dict[Weight, QPolynomial] = defaultdict(QPolynomial)
    for alpha, c in alt.items():
        if not c:
            continue
        kappa = tuple(a - d for a, d in zip(alpha, delta))
        for w, k in schur_expand(kappa, n).terms.items():
            acc[w] = acc[w] + c * k
    counts = defaultdict(int)
    for x in lam:
        counts[x] += 1
    v = QPolynomial((1,))
    for m in counts.values():
        v = v * _t_factorial(m)
    return SymLaurentPoly(n, {w: c.exact_div(v) for w, c in acc.items() if c})


def hall_littlewood_P(lam: Sequence[int], n: int, t=None) -> SymLaurentPoly:
    """Hall-Littlewood P_lam(x_1..x_n; t).

    With ``t`` omitted the coefficients are QPolynomials in t; otherwise they
    are specialised at the given exact value.
    """
    lam = tuple(Partition(lam))
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")
    base = _hall_littlewood_cached(lam + (0,) * (n - len(lam)), n)
    if t is None:
        return base
    return base.map_coefficients(lambda c: c(t))
