"""Orbital integrals for GL(2) over Q_p, Weyl discriminants and root-datum descriptors."""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import ConvergenceError
from .padic import valuation
from .scalars import QSqrt, u_power

__all__ = [
    "ConjClassData",
    "GL2OrbitalInput",
    "OrbitalCount",
    "gl2_orbital",
    "gl2_orbital_oracle",
    "oracle_normalization",
    "gl2_invariants",
    "is_padic_square",
    "weyl_disc",
    "weyl_disc_valuation",
    "wild_set",
    "classify_root_datum",
]

CASES = ("split", "elliptic-unramified", "elliptic-ramified")
_ALIASES = {"unramified": "elliptic-unramified", "ramified": "elliptic-ramified"}

_x = sympy.Symbol("x")


# ---------------------------------------------------------------------------
# conjugacy-class data


@dataclass(frozen=True)
class ConjClassData:
    """Semisimple class of GL(n, Q) through its characteristic polynomial.

    ``charpoly`` lists integer coefficients from the leading one down.
    ``factorization`` lists (degree of irreducible factor, multiplicity).
    """

    n: int
    charpoly: tuple[int, ...]
    factorization: tuple[tuple[int, int], ...] | None = None
    unimodular: bool = False

    def __post_init__(self):
        cp = tuple(int(c) for c in self.charpoly)
        object.__setattr__(self, "charpoly", cp)
        if len(cp) != self.n + 1:
            raise ValueError(f"characteristic polynomial of degree {len(cp) - 1}, rank {self.n}")
        if cp[0] != 1:
            raise ValueError("characteristic polynomial must be monic")
        if cp[-1] == 0:
            raise ValueError("zero eigenvalue: not an invertible class")
        if self.unimodular and abs(cp[-1]) != 1:
            raise ValueError("|det| = 1 asserted but constant term is not +-1")
        if self.factorization is not None:
            fac = tuple((int(d), int(m)) for d, m in self.factorization)
            object.__setattr__(self, "factorization", fac)
            if any(d < 1 or m < 1 for d, m in fac):
                raise ValueError("factor degrees and multiplicities must be positive")
            if sum(d * m for d, m in fac) != self.n:
                raise ValueError(f"sum d*m = {sum(d * m for d, m in fac)} != n = {self.n}")

    @classmethod
    def identity(cls, n: int) -> "ConjClassData":
        cp = sympy.Poly((_x - 1) ** n, _x).all_coeffs()
        return cls(n, tuple(int(c) for c in cp), ((1, n),))

    def poly(self) -> sympy.Poly:
        return sympy.Poly(list(self.charpoly), _x, domain="ZZ")


def _sqf_parts(poly: sympy.Poly) -> list[tuple[sympy.Poly, int]]:
    _, parts = poly.sqf_list()
    return [(h.monic(), k) for h, k in parts]


def weyl_disc(cc: ConjClassData) -> Fraction:
    """D(gamma) = prod over ordered pairs of distinct eigenvalues of (1 - a/b), exactly.

    Eigenvalues are taken with multiplicity; equal pairs are skipped.
    """
    parts = _sqf_parts(cc.poly())
    D = Fraction(1)
    info = []
    for h, k in parts:
        d = h.degree()
        norm = Fraction(int((-1) ** d * h.eval(0)))
        info.append((h, k, d, norm))
        if d >= 2:
            disc = Fraction(int(h.discriminant()))
            D *= (Fraction((-1) ** (d * (d - 1) // 2)) * disc / norm ** (d - 1)) ** (k * k)
    for i in range(len(info)):
        for j in range(i + 1, len(info)):
            h1, k1, d1, n1 = info[i]
            h2, k2, d2, n2 = info[j]
            res = Fraction(int(sympy.resultant(h1.as_expr(), h2.as_expr(), _x)))
            D *= (Fraction((-1) ** (d1 * d2)) * res ** 2 / (n1 ** d2 * n2 ** d1)) ** (k1 * k2)
    return D


def weyl_disc_valuation(cc: ConjClassData, p: int) -> int:
    """p-adic valuation of the Weyl discriminant."""
    return int(valuation(weyl_disc(cc), p))


def wild_set(cc: ConjClassData) -> frozenset[int]:
    """Primes up to n! together with primes dividing the Weyl discriminant."""
    bound = math.factorial(cc.n)
    primes = set(sympy.primerange(2, bound + 1))
    D = weyl_disc(cc)
    primes |= set(sympy.factorint(abs(D.numerator)))
    primes |= set(sympy.factorint(D.denominator))
    primes.discard(1)
    return frozenset(primes)


def classify_root_datum(cc: ConjClassData) -> tuple[tuple[int, int], ...]:
    """Canonical multiset of (field degree, GL-rank) for the centralizer.

    The factorization is supplied by the caller; it is checked against the
    square-free decomposition of the characteristic polynomial.
    """
    if cc.factorization is None:
        raise ValueError("classification needs a caller-supplied factorization")
    by_mult: dict[int, int] = {}
    for d, m in cc.factorization:
        by_mult[m] = by_mult.get(m, 0) + d
    sqf = {k: h.degree() for h, k in _sqf_parts(cc.poly())}
    if by_mult != sqf:
        raise ValueError(f"factorization {cc.factorization} inconsistent with square-free degrees {sqf}")
    return tuple(sorted(cc.factorization))


# ---------------------------------------------------------------------------
# GL(2) table


@dataclass(frozen=True)
class GL2OrbitalInput:
    p: int
    case: str
    m: int
    disc_val: int

    def __post_init__(self):
        case = _ALIASES.get(self.case, self.case)
        object.__setattr__(self, "case", case)
        if case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        if self.m < 0:
            raise ValueError("m must be non-negative")
        v, p = self.disc_val, self.p
        if case == "elliptic-unramified" and (v < 0 or v % 2):
            raise ValueError("unramified elliptic classes have even, non-negative discriminant valuation")
        if case == "elliptic-ramified":
            if v < 0:
                raise ValueError("elliptic classes have non-negative discriminant valuation")
            # with val det even the ramified discriminant carries the odd part of the uniformizer
            if self.m == 0 and p != 2 and v % 2 == 0:
                raise ValueError("ramified classes with m = 0 at odd p have odd discriminant valuation")
            if self.m == 0 and p == 2 and v < 2:
                raise ValueError("ramified classes with m = 0 at p = 2 have discriminant valuation >= 2")

    @property
    def half_integral(self) -> bool:
        """True when |D|^{1/2} = p^{-val/2} is an odd power of sqrt(p)."""
        return self.disc_val % 2 == 1


def gl2_orbital(inp: GL2OrbitalInput) -> QSqrt:
    """Tabulated J(gamma, tau_xi) for semisimple gamma in GL(2, Q_p), m = xi_1 - xi_2."""
    p, m = inp.p, inp.m
    P = Fraction(p)
    half = u_power(-inp.disc_val, p)  # |D|^{1/2}
    one = QSqrt(1, 0, p)
    if inp.case == "split":
        return one if m == 0 else one * (P ** m * (1 - 1 / P))
    if inp.case == "elliptic-unramified":
        if m == 0:
            return one + (one - half) * Fraction(2, p - 1)
        return one * ((1 + 1 / P) * P ** m)
    if m == 0:
        return 2 * one + (one - half) * Fraction(2, p - 1)
    return one * (2 * P ** m)


# ---------------------------------------------------------------------------
# lattice-count oracle


def is_padic_square(a: int, p: int) -> bool:
    if a == 0:
        return True
    v = int(valuation(a, p))
    if v % 2:
        return False
    w = a // p ** v
    if p == 2:
        return w % 8 == 1
    return pow(w % p, (p - 1) // 2, p) == 1


def gl2_invariants(charpoly: Sequence[int], p: int) -> tuple[str, int, int]:
    """(case tag, val_p D, val_p det) for x^2 + b x + c."""
    one, b, c = (int(x) for x in charpoly)
    if one != 1:
        raise ValueError("characteristic polynomial must be monic")
    delta = b * b - 4 * c
    if delta == 0:
        raise ValueError("non-regular class (repeated eigenvalue)")
    if c == 0:
        raise ValueError("singular class")
    dval = int(valuation(delta, p))
    cval = int(valuation(c, p))
    if is_padic_square(delta, p):
        case = "split"
    else:
        w = delta // p ** dval
        if dval % 2 == 0 and ((p == 2 and w % 8 == 5) or p != 2):
            case = "elliptic-unramified"
        else:
            case = "elliptic-ramified"
    return case, dval - cval, cval


def _sqrt_mod(w: int, p: int, N: int) -> int:
    """Square root of a unit square w modulo p^N (Hensel lifting, digit by digit for p = 2)."""
    if p == 2:
        roots = [r for r in (1, 3, 5, 7) if (r * r - w) % 8 == 0]
        s = roots[0]
        for k in range(3, N + 1):
            if (s * s - w) % (2 ** (k + 1)):
                s += 2 ** (k - 1)
        return s % 2 ** max(N, 1)
    s = next(r for r in range(1, p) if (r * r - w) % p == 0)
    mod = p
    for _ in range(N):
        mod *= p
        s = (s - (s * s - w) * pow(2 * s, -1, mod)) % mod
    return s % p ** N


@dataclass(frozen=True)
class OrbitalCount:
    value: QSqrt
    count: int
    radius: int
    case: str
    disc_val: int


def gl2_orbital_oracle(
    charpoly: Sequence[int],
    xi: Sequence[int],
    p: int,
    radius: int | None = None,
    max_radius: int = 14,
) -> OrbitalCount:
    """|D|^{1/2} * integral over G_gamma \\ G of tau_xi(x^{-1} gamma x), by lattice counting.

    Elliptic classes: count vertices of the tree (Hermite cosets of index-p^j
    cyclic sublattices) where the conjugate lies in K p^xi K; the quotient
    E^x / Q_p^x gets volume 1. Split classes: count c in p^{-R} Z_p / Z_p with
    the conjugate of diag(r1, r2) by the unipotent with entry c in K p^xi K,
    T(Z_p) and N(Z_p) getting volume 1. Counting stops once two consecutive
    outer shells contribute nothing past the radius where hits are possible.
    """
    xi = tuple(int(x) for x in xi)
    if xi[0] < xi[1]:
        raise ValueError("xi must be dominant")
    case, dval, detval = gl2_invariants(charpoly, p)
    half = u_power(-dval, p)
    zero = OrbitalCount(QSqrt(0, 0, p), 0, 0, case, dval)
    if detval != xi[0] + xi[1]:
        return zero
    m = xi[0] - xi[1]
    if radius is None:
        radius = max(abs(dval), 0) + m + 3
    if case == "split":
        count, R = _split_count(charpoly, xi, p, radius, max_radius)
    else:
        count, R = _tree_count(charpoly, xi, p, radius, max_radius)
    return OrbitalCount(half * count * oracle_normalization(p), count, R, case, dval)


@lru_cache(maxsize=None)
def oracle_normalization(p: int) -> Fraction:
    """Measure constant fixed once from the split m = 0 anchor (x - 1)(x - 1 - p), xi = 0.

    The anchor must come out as exactly 1; the resulting constant is then
    reused unchanged for every other class.
    """
    charpoly = (1, -(2 + p), 1 + p)
    case, dval, _ = gl2_invariants(charpoly, p)
    count, _ = _split_count(charpoly, (0, 0), p, dval + 3, 14)
    raw = u_power(-dval, p) * count
    if not raw.is_rational or raw.rational() == 0:
        raise ArithmeticError("calibration anchor is not a non-zero rational")
    return 1 / raw.rational()


def _tree_shell(j: int, p: int):
    """Hermite data (a, b, c) of index-p^j cyclic sublattices of Z_p^2."""
    for a in range(j + 1):
        b = j - a
        for c in range(p ** a):
            if a > 0 and b > 0 and c % p == 0:
                continue
            yield a, b, c


def _tree_count(charpoly, xi, p, radius, max_radius) -> tuple[int, int]:
    _, b0, c0 = (int(x) for x in charpoly)
    # companion matrix of x^2 + b0 x + c0
    g = ((0, -c0), (1, -b0))
    target = xi[1]
    shells = []
    j = 0
    while True:
        hits = 0
        for a, b, c in _tree_shell(j, p):
            # adj(x) g x with x = [[p^a, c], [0, p^b]]; valuations shift by a + b
            pa, pb = p ** a, p ** b
            x = ((pa, c), (0, pb))
            adj = ((pb, -c), (0, pa))
            gx = [[g[r][0] * x[0][k] + g[r][1] * x[1][k] for k in range(2)] for r in range(2)]
            M = [[adj[r][0] * gx[0][k] + adj[r][1] * gx[1][k] for k in range(2)] for r in range(2)]
            low = min(valuation(M[r][k], p) for r in range(2) for k in range(2)) - (a + b)
            if low == target:
                hits += 1
        shells.append(hits)
        if j >= radius and len(shells) >= 2 and shells[-1] == 0 and shells[-2] == 0:
            return sum(shells), j
        if j >= max_radius:
            partial = sorted({sum(shells[:k + 1]) for k in range(len(shells))})[-2:]
            raise ConvergenceError(f"tree count not stabilised by radius {j}", partial=partial)
        j += 1


def _split_count(charpoly, xi, p, radius, max_radius) -> tuple[int, int]:
    _, b0, c0 = (int(x) for x in charpoly)
    delta = b0 * b0 - 4 * c0
    dv = int(valuation(delta, p))
    N = max_radius + dv + 4 + (2 if p == 2 else 0)
    mod = p ** (N + 1)
    s = p ** (dv // 2) * _sqrt_mod(delta // p ** dv, p, N + 2)
    if (s * s - delta) % mod:
        raise ArithmeticError("square root lift failed")
    # roots (-b0 +- s)/2 modulo p^N
    if p == 2:
        r1 = ((-b0 + s) // 2) % (mod // 2) if (-b0 + s) % 2 == 0 else None
        r2 = ((-b0 - s) // 2) % (mod // 2) if (-b0 - s) % 2 == 0 else None
        if r1 is None or r2 is None:
            raise ArithmeticError("roots not integral at 2")
        prec = N
    else:
        inv2 = pow(2, -1, mod)
        r1 = ((-b0 + s) * inv2) % mod
        r2 = ((-b0 - s) * inv2) % mod
        prec = N + 1

    def val(x):
        v = valuation(x % p ** prec, p)
        if v >= prec:
            raise ArithmeticError("insufficient p-adic precision")
        return int(v)

    v1, v2 = val(r1), val(r2)
    vdiff = val(r1 - r2)
    target = xi[1]
    counts = []
    R = 0
    while True:
        # c = k / p^R; entry c (r1 - r2) has valuation val(k) + vdiff - R
        hits = 0
        for k in range(p ** R):
            vk = valuation(k, p)
            low = min(v1, v2, vk + vdiff - R)
            if low == target:
                hits += 1
        counts.append(hits)
        if R >= radius and len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            return counts[-1], R
        if R >= max_radius:
            raise ConvergenceError(f"split count not stabilised by radius {R}", partial=counts[-2:])
        R += 1
