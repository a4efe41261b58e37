"""Spherical Hecke algebra of GL(n, Q_p) and its Satake transform.

Coefficients live in Q[u]/(u^2 - p) so half-integral powers of p stay exact.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded
from .padic import (
    double_coset_representatives,
    elementary_divisor_batch,
    valuation,
)
from .scalars import QSqrt, u_power
from .symfunc import (
    SymLaurentPoly,
    check_dominant,
    dual,
    evaluate,
    from_schur,
    hall_littlewood_P,
    lr_multiply,
)

__all__ = [
    "HeckeElement",
    "SatakeParam",
    "pairing_2rho",
    "satake",
    "satake_inverse",
    "satake_oracle",
    "degree",
    "convolve",
    "central_sum",
    "ramanujan_polynomials",
    "ramanujan_detector",
    "random_unitary_det_one",
    "detector_value",
    "calibrate_oracle",
]

Weight = tuple[int, ...]


def pairing_2rho(xi: Sequence[int]) -> int:
    """<xi, 2 rho> with rho = ((n-1)/2, (n-3)/2, ..., -(n-1)/2)."""
    n = len(xi)
    return sum(x * (n - 1 - 2 * i) for i, x in enumerate(xi))


class HeckeElement:
    """Finite combination of double-coset indicators tau_xi = 1_{K p^xi K}."""

    __slots__ = ("p", "n", "terms")

    def __init__(self, p: int, n: int, terms: Mapping[Sequence[int], object] | None = None):
        clean = {}
        for xi, c in (terms or {}).items():
            xi = check_dominant(xi, n)
            c = c if isinstance(c, QSqrt) else QSqrt(c, 0, p)
            if c.p != p:
                raise ValueError(f"scalar over u^2={c.p} in an element over p={p}")
            if c:
                clean[xi] = clean[xi] + c if xi in clean else c
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("HeckeElement is immutable")

    @classmethod
    def basis(cls, xi: Sequence[int], p: int) -> "HeckeElement":
        xi = tuple(xi)
        return cls(p, len(xi), {xi: 1})

    @classmethod
    def unit(cls, n: int, p: int) -> "HeckeElement":
        return cls.basis((0,) * n, p)

    @property
    def support_integral(self) -> bool:
        return all(xi[-1] >= 0 for xi in self.terms)

    def shift(self, k: int) -> "HeckeElement":
        """Translate by the central element p^k."""
        return HeckeElement(self.p, self.n, {tuple(x + k for x in xi): c for xi, c in self.terms.items()})

    def shift_to_integral(self) -> "HeckeElement":
        if not self.terms:
            return self
        low = min(xi[-1] for xi in self.terms)
        return self.shift(-low) if low < 0 else self

    def dual(self) -> "HeckeElement":
        """f(g) -> f(g^{-1})."""
        return HeckeElement(self.p, self.n, {tuple(-x for x in reversed(xi)): c for xi, c in self.terms.items()})

    def _check(self, other: "HeckeElement"):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError(f"mixed Hecke algebras: (p={self.p}, n={self.n}) vs (p={other.p}, n={other.n})")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for xi, c in other.terms.items():
            out[xi] = out[xi] + c if xi in out else c
        return HeckeElement(self.p, self.n, out)

    def __neg__(self):
        return HeckeElement(self.p, self.n, {xi: -c for xi, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HeckeElement":
        return HeckeElement(self.p, self.n, {xi: v * c for xi, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.n, frozenset(self.terms.items())))

    def __repr__(self):
        inner = ", ".join(f"{xi}: {c}" for xi, c in sorted(self.terms.items(), reverse=True))
        return f"HeckeElement(p={self.p}, n={self.n}, {{{inner}}})"


@dataclass(frozen=True)
class SatakeParam:
    """Unordered n-tuple of nonzero complex numbers with flags checked on construction."""

    alpha: tuple[complex, ...]
    tol: float = 1e-9

    def __post_init__(self):
        if any(a == 0 for a in self.alpha):
            raise ValueError("Satake parameters must be nonzero")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def unitary(self) -> bool:
        remaining = list(self.alpha)
        for a in self.alpha:
            target = 1 / np.conj(a)
            j = min(range(len(remaining)), key=lambda k: abs(remaining[k] - target))
            if abs(remaining[j] - target) > self.tol * max(1.0, abs(target)):
                return False
            remaining.pop(j)
        return True

    @property
    def det_one(self) -> bool:
        return abs(np.prod(self.alpha) - 1) <= self.tol

    @property
    def sup_norm(self) -> float:
        return max(abs(a) for a in self.alpha)


# ---------------------------------------------------------------------------
# Satake transform


def _satake_basis(xi: Weight, p: int) -> SymLaurentPoly:
    n = len(xi)
    low = xi[-1]
    lam = tuple(x - low for x in xi)
    scale = u_power(pairing_2rho(xi), p)
    hl = hall_littlewood_P(lam, n, t=Fraction(1, p))
    poly = hl.map_coefficients(lambda c: scale * c)
    return poly.shift(low) if low else poly


_SATAKE_CACHE: dict[tuple[Weight, int], SymLaurentPoly] = {}


def _satake_basis_cached(xi: Weight, p: int) -> SymLaurentPoly:
    key = (xi, p)
    if key not in _SATAKE_CACHE:
        _SATAKE_CACHE[key] = _satake_basis(xi, p)
    return _SATAKE_CACHE[key]


def satake(h: HeckeElement) -> SymLaurentPoly:
    """Satake transform; tau_xi maps to u^{<xi,2rho>} P_xi(x; 1/p)."""
    out = SymLaurentPoly.zero(h.n)
    for xi, c in h.terms.items():
        out = out + _satake_basis_cached(xi, h.p).scale(c)
    return out


def satake_inverse(phi: SymLaurentPoly, p: int, max_steps: int = 10_000) -> HeckeElement:
    """Invert the Satake transform by back-substitution in dominance order."""
    remaining = {w: (c if isinstance(c, QSqrt) else QSqrt(c, 0, p)) for w, c in phi.terms.items()}
    out: dict[Weight, QSqrt] = {}
    steps = 0
    while remaining:
        steps += 1
        if steps > max_steps:
            raise BudgetExceeded(f"Satake inversion exceeded {max_steps} steps")
        top = max(remaining)
        coef = remaining[top] / u_power(pairing_2rho(top), p)
        out[top] = coef
        for w, k in _satake_basis_cached(top, p).terms.items():
            v = remaining.get(w, QSqrt(0, 0, p)) - coef * k
            if v:
                remaining[w] = v
            else:
                remaining.pop(w, None)
    return HeckeElement(p, phi.n, out)


# frozen calibration: delta_B^{1/2}(p^mu) = p^{-<mu, rho>}, i.e. u^{-<mu, 2 rho>}.
# ``calibrate_oracle`` recomputes the anchor case and fails loudly if it drifts.
_DELTA_SIGN = -1


def satake_oracle(xi: Sequence[int], mu: Sequence[int], p: int, budget: int = 2_000_000) -> QSqrt:
    """Coefficient of x^mu in satake(tau_xi) from the constant-term integral.

    Computes delta_B^{1/2}(p^mu) * vol{u in U(Q_p) : p^mu u in K p^xi K}
    by enumerating upper unipotent u modulo a lattice fine enough that
    membership is constant on cells. Elementary divisors decide membership.
    """
    xi = check_dominant(xi)
    mu = tuple(int(x) for x in mu)
    n = len(xi)
    if len(mu) != n:
        raise ValueError("xi and mu must have the same length")
    shift = xi[-1]
    xs = tuple(x - shift for x in xi)
    ms = tuple(x - shift for x in mu)
    delta = u_power(_DELTA_SIGN * pairing_2rho(mu), p)
    if sum(xs) != sum(ms) or min(ms) < 0:
        return QSqrt(0, 0, p)
    M = max(xs) + 1
    slots = n * (n - 1) // 2
    cells = (p ** M) ** slots
    if cells > budget:
        raise BudgetExceeded(f"{cells} unipotent cells exceed budget {budget}")
    count = _count_members(xs, ms, p, M, slots)
    scale = Fraction(p) ** sum(ms[i] * (n - 1 - i) for i in range(n))
    vol = scale * count / Fraction(p) ** (M * slots)
    return delta * vol


def _count_members(xs: Weight, ms: Weight, p: int, M: int, slots: int) -> int:
    n = len(xs)
    mod = p ** M
    grids = np.meshgrid(*[np.arange(mod, dtype=np.int64)] * slots, indexing="ij") if slots else []
    flat = [g.ravel() for g in grids]
    size = flat[0].size if flat else 1
    batch = np.zeros((size, n, n), dtype=np.int64)
    for i in range(n):
        batch[:, i, i] = p ** ms[i]
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            batch[:, i, j] = flat[k]
            k += 1
    cap = sum(xs) + 1
    target = np.array(sorted(xs, reverse=True))
    total = 0
    for start in range(0, size, 1 << 16):
        exps = elementary_divisor_batch(batch[start:start + (1 << 16)], p, cap)
        total += int(np.all(exps == target, axis=1).sum())
    return total


def calibrate_oracle(p: int = 2) -> QSqrt:
    """Anchor case: n = 2, xi = (1, 0), mu = (1, 0) must give u."""
    value = satake_oracle((1, 0), (1, 0), p)
    if value != QSqrt.u(p):
        raise ArithmeticError(f"oracle calibration drifted: got {value}")
    return value


# ---------------------------------------------------------------------------
# degrees


def _degree_closed_form(xi: Weight, p: int) -> int | None:
    n = len(xi)
    P = Fraction(p)
    if len(set(xi)) == 1:
        return 1
    if n == 2:
        return int((1 + 1 / P) * P ** (xi[0] - xi[1]))
    if n == 3:
        base = (1 + 1 / P + 1 / P ** 2) * P ** (2 * (xi[0] - xi[2]))
        if xi[0] > xi[1] > xi[2]:
            base *= 1 + 1 / P
        return int(base)
    return None


def degree(xi: Sequence[int], p: int, method: str = "auto", budget: int = 10**6) -> int:
    """Number of right K-cosets in K p^xi K.

    ``method``: "closed" (n <= 3 only), "enumerate" (Hermite representatives
    filtered by Smith type), "satake" (evaluate the Satake transform at the
    trivial parameter), or "auto" (closed form when available).
    """
    xi = check_dominant(xi)
    if xi[-1] < 0:
        raise ValueError("degree needs min xi >= 0")
    n = len(xi)
    if method in ("auto", "closed"):
        value = _degree_closed_form(xi, p)
        if value is not None:
            return value
        if method == "closed":
            raise ValueError(f"no closed form for rank {n}")
        method = "enumerate"
    if method == "enumerate":
        low = xi[-1]
        return len(double_coset_representatives(tuple(x - low for x in xi), p, budget))
    if method == "satake":
        return int(_trivial_evaluation(_satake_basis_cached(xi, p), p).rational())
    raise ValueError(f"unknown method {method!r}")


def _trivial_evaluation(poly: SymLaurentPoly, p: int) -> QSqrt:
    """Exact value at x_i = u^{n+1-2i}."""
    n = poly.n
    total = QSqrt(0, 0, p)
    for v, c in poly.monomials():
        total = total + c * u_power(sum(e * (n - 1 - 2 * i) for i, e in enumerate(v)), p)
    return total


# ---------------------------------------------------------------------------
# convolution


def convolve(a: HeckeElement, b: HeckeElement, method: str = "satake", budget: int = 10**6) -> HeckeElement:
    """Convolution product.

    ``method``: "satake" (transform, multiply in the Schur basis, invert),
    "cosets" (count coset pairs), or "both" (raise if they differ).
    """
    a._check(b)
    if method == "satake":
        return _convolve_satake(a, b)
    if method == "cosets":
        return _convolve_cosets(a, b, budget)
    if method == "both":
        x = _convolve_satake(a, b)
        y = _convolve_cosets(a, b, budget)
        if x != y:
            raise ArithmeticError(f"convolution routes disagree: {x} vs {y}")
        return x
    raise ValueError(f"unknown method {method!r}")


def _convolve_satake(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    product = from_schur(lr_multiply(satake(a), satake(b)), a.n)
    return satake_inverse(product, a.p)


def _structure_constants(x1: Weight, x2: Weight, p: int, budget: int) -> dict[Weight, int]:
    reps1 = double_coset_representatives(x1, p, budget)
    reps2 = double_coset_representatives(x2, p, budget)
    if len(reps1) * len(reps2) > budget:
        raise BudgetExceeded(f"{len(reps1) * len(reps2)} coset pairs exceed budget {budget}")
    n = len(x1)
    A = np.array(reps1, dtype=object)
    B = np.array(reps2, dtype=object)
    counts: dict[Weight, int] = defaultdict(int)
    for X in A:
        prods = np.einsum("ij,kjl->kil", X, B)
        for P in prods:
            diag = tuple(int(valuation(P[i][i], p)) for i in range(n))
            if any(diag[i] < diag[i + 1] for i in range(n - 1)):
                continue
            if all(valuation(P[i][j], p) >= diag[i] for i in range(n) for j in range(i + 1, n)):
                counts[diag] += 1
    return dict(counts)


def _convolve_cosets(a: HeckeElement, b: HeckeElement, budget: int) -> HeckeElement:
    p = a.p
    out: dict[Weight, QSqrt] = {}
    for x1, c1 in a.terms.items():
        for x2, c2 in b.terms.items():
            s1, s2 = x1[-1], x2[-1]
            y1 = tuple(x - s1 for x in x1)
            y2 = tuple(x - s2 for x in x2)
            for mu, cnt in _structure_constants(y1, y2, p, budget).items():
                key = tuple(x + s1 + s2 for x in mu)
                v = c1 * c2 * cnt
                out[key] = out[key] + v if key in out else v
    return HeckeElement(p, a.n, out)


def central_sum(h: HeckeElement) -> QSqrt:
    """Sum of h over the centre p^m, m >= 0: the coefficients of constant weights."""
    if not h.support_integral:
        raise ValueError("central_sum needs integral support; shift the element first")
    total = QSqrt(0, 0, h.p)
    for xi, c in h.terms.items():
        if len(set(xi)) == 1:
            total = total + c
    return total


# ---------------------------------------------------------------------------
# polynomials detecting non-tempered parameters


def ramanujan_polynomials(n: int) -> list[SymLaurentPoly]:
    """phi_j = e_{j-1}, where e_m = 2^m * sum over all permutations of x_s(1)...x_s(m)."""
    if n < 1:
        raise ValueError("rank must be positive")
    out = []
    for m in range(n + 1):
        c = 2 ** m * math.factorial(m) * math.factorial(n - m)
        out.append(SymLaurentPoly(n, {(1,) * m + (0,) * (n - m): c}))
    return out


def ramanujan_detector(n: int, k: int) -> SymLaurentPoly:
    """sum_j (phi_j * dual(phi_j))^k."""
    if k < 1:
        raise ValueError("k must be positive")
    total = SymLaurentPoly.zero(n)
    for phi in ramanujan_polynomials(n):
        total = total + (phi * dual(phi)) ** k
    return total


def random_unitary_det_one(n: int, rng: np.random.Generator, r_max: float = 2.0) -> tuple[complex, ...]:
    """Random alpha with {alpha} = {1/conj(alpha)} and product 1.

    Coordinates come in pairs (z, 1/conj z) with |z| in [1, r_max], padded by
    points on the unit circle; the last angle is adjusted so the product is 1.
    """
    pairs = int(rng.integers(0, n // 2 + 1))
    alpha = []
    for _ in range(pairs):
        r = rng.uniform(1.0, r_max)
        z = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
        alpha += [z, 1 / np.conj(z)]
    for _ in range(n - 2 * pairs):
        alpha.append(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    prod = np.prod(alpha)
    phase = prod / abs(prod)
    if n - 2 * pairs > 0:
        alpha[-1] /= phase
    else:
        # all pairs: rotate the last pair, which multiplies their product by w^2
        w = np.exp(-0.5j * np.angle(phase))
        alpha[-2] *= w
        alpha[-1] *= w
    return tuple(complex(a) for a in alpha)


def detector_value(n: int, k: int, alpha: Sequence[complex]) -> complex:
    return evaluate(ramanujan_detector(n, k), alpha)
