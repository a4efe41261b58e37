"""p-adic integer-matrix utilities: valuations, elementary divisors, Hermite cosets."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded

INF = float("inf")


def valuation(x, p: int) -> float:
    """p-adic valuation of an int or Fraction; +inf for zero."""
    if x == 0:
        return INF
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def elementary_divisor_exponents(matrix: Sequence[Sequence], p: int) -> tuple[int, ...]:
    """Valuations of the Smith form over Z_(p), sorted decreasingly.

    Exact rational arithmetic; raises ``ValueError`` if the matrix is singular.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("square matrix required")
    exps = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                v = valuation(a[i][j], p)
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best[0] == INF:
            raise ValueError("singular matrix")
        v, i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for j in range(k + 1, n):
            a[k][j] = Fraction(0)
        exps.append(int(v))
    return tuple(sorted(exps, reverse=True))


def _val_array(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Elementwise valuation of an integer array, capped at ``cap`` (zero -> cap)."""
    x = np.abs(x.astype(np.int64))
    out = np.zeros(x.shape, dtype=np.int64)
    alive = x != 0
    out[~alive] = cap
    cur = x.copy()
    for _ in range(cap):
        div = alive & (cur % p == 0)
        if not div.any():
            break
        out[div] += 1
        cur[div] //= p
        alive = div
    return np.minimum(out, cap)


def _minors(batch: np.ndarray, k: int) -> list[np.ndarray]:
    n = batch.shape[-1]
    rows = list(combinations(range(n), k))
    out = []
    for r in rows:
        for c in rows:
            sub = batch[:, list(r)][:, :, list(c)]
            out.append(_int_det(sub))
    return out


def _int_det(sub: np.ndarray) -> np.ndarray:
    k = sub.shape[-1]
    if k == 1:
        return sub[:, 0, 0]
    if k == 2:
        return sub[:, 0, 0] * sub[:, 1, 1] - sub[:, 0, 1] * sub[:, 1, 0]
    total = np.zeros(sub.shape[0], dtype=np.int64)
    for j in range(k):
        minor = np.delete(np.delete(sub, 0, axis=1), j, axis=2)
        total += (-1) ** j * sub[:, 0, j] * _int_det(minor)
    return total


def elementary_divisor_batch(batch: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Smith exponents (decreasing) for a stack of integer matrices.

    Uses determinantal divisors: d_k = min valuation of k x k minors, and the
    k-th exponent is d_k - d_{k-1}. Valuations are capped at ``cap``; the
    caller must choose ``cap`` above every valuation of interest.
    """
    batch = np.asarray(batch, dtype=np.int64)
    n = batch.shape[-1]
    d = [np.zeros(batch.shape[0], dtype=np.int64)]
    for k in range(1, n + 1):
        vals = [_val_array(m, p, cap) for m in _minors(batch, k)]
        d.append(np.min(np.stack(vals), axis=0))
    exps = np.stack([d[k] - d[k - 1] for k in range(1, n + 1)], axis=1)
    return exps[:, ::-1]


def hermite_cosets(diag_exponents: Sequence[int], p: int) -> Iterator[list[list[int]]]:
    """Upper-triangular representatives of g K with the given diagonal exponents.

    Entry (i, j), i < j, runs over 0..p^{a_i}-1, giving one matrix per coset.
    """
    a = list(diag_exponents)
    n = len(a)
    ranges = [range(p ** a[i]) for i in range(n) for j in range(i + 1, n)]
    for entries in product(*ranges):
        m = [[0] * n for _ in range(n)]
        it = iter(entries)
        for i in range(n):
            m[i][i] = p ** a[i]
            for j in range(i + 1, n):
                m[i][j] = next(it)
        yield m


def coset_count_for_diagonal(diag_exponents: Sequence[int], p: int) -> int:
    n = len(diag_exponents)
    return int(np.prod([p ** (diag_exponents[i] * (n - 1 - i)) for i in range(n)]))


def double_coset_representatives(xi: Sequence[int], p: int, budget: int = 10**6) -> list[list[list[int]]]:
    """All Hermite representatives of K p^xi K / K (requires min xi >= 0)."""
    xi = tuple(sorted(xi, reverse=True))
    if xi[-1] < 0:
        raise ValueError("double coset must be integral")
    total = sum(coset_count_for_diagonal(a, p) for a in _diag_candidates(xi))
    if total > budget:
        raise BudgetExceeded(f"{total} Hermite candidates exceed budget {budget}")
    out = []
    for a in _diag_candidates(xi):
        for m in hermite_cosets(a, p):
            if elementary_divisor_exponents(m, p) == xi:
                out.append(m)
    return out


def _diag_candidates(xi: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Diagonal exponent vectors a with the same sum, entries within [min xi, max xi]."""
    n = len(xi)
    lo, hi, total = min(xi), max(xi), sum(xi)
    for a in product(range(lo, hi + 1), repeat=n):
        if sum(a) == total:
            yield a

