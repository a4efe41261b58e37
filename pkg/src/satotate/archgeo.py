"""Geometry of GL(n, R)^1: Cartan and Iwasawa projections, norms, discriminants."""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

import numpy as np
from scipy.linalg import rq
from scipy.optimize import linprog
from scipy.stats import ortho_group

from .errors import Refusal

__all__ = [
    "as_group_matrix",
    "normalize_det",
    "cartan_X",
    "ell",
    "group_norm",
    "iwasawa_H0",
    "parabolic_decomposition",
    "in_weyl_hull",
    "majorizes",
    "weyl_disc_real",
    "delta_minus",
    "haar_orthogonal",
    "random_group_matrix",
    "bounded_group_matrix",
]

DET_TOL = 1e-12


def as_group_matrix(g, tol: float = DET_TOL) -> np.ndarray:
    """Validate a real square matrix with |det| = 1 (up to ``tol``)."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("square matrix required")
    d = abs(np.linalg.det(g))
    if d == 0 or not np.isfinite(d):
        raise ValueError("singular matrix")
    if abs(d - 1) > tol * max(1.0, np.linalg.cond(g)):
        raise ValueError(f"|det g| = {d!r} is not 1")
    return g


def normalize_det(g) -> np.ndarray:
    """Rescale an invertible matrix to |det| = 1."""
    g = np.asarray(g, dtype=float)
    d = abs(np.linalg.det(g))
    if d == 0:
        raise ValueError("singular matrix")
    return g / d ** (1.0 / g.shape[0])


def cartan_X(g) -> np.ndarray:
    """Decreasing logs of the singular values, i.e. X with g in K e^X K."""
    g = as_group_matrix(g)
    s = np.linalg.svd(g, compute_uv=False)
    x = np.log(s)
    return x - x.mean()


def ell(g) -> float:
    """log(tr(g g^t) / n); zero exactly on K."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    return max(0.0, float(np.log(np.sum(g * g) / n)))


def group_norm(g) -> float:
    return float(np.exp(np.linalg.norm(cartan_X(g))))


def parabolic_decomposition(g, blocks: Sequence[int] | None = None):
    """g = m u k with m block diagonal, u block unipotent upper, k orthogonal.

    ``blocks`` gives the Levi block sizes; the default is the Borel (all ones).
    The diagonal of m is made positive, moving signs into k.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    blocks = tuple(blocks) if blocks is not None else (1,) * n
    if sum(blocks) != n or min(blocks) < 1:
        raise ValueError("block sizes must be positive and sum to n")
    r, q = rq(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1
    r = r * signs
    q = signs[:, None] * q
    m = np.zeros_like(r)
    start = 0
    for b in blocks:
        m[start:start + b, start:start + b] = r[start:start + b, start:start + b]
        start += b
    u = np.linalg.solve(m, r)
    return m, u, q


def iwasawa_H0(g) -> np.ndarray:
    """Trace-zero log of the diagonal of the triangular factor in g = (upper)(orthogonal)."""
    g = np.asarray(g, dtype=float)
    r, _ = rq(g)
    h = np.log(np.abs(np.diag(r)))
    return h - h.mean()


def in_weyl_hull(h, x, tol: float = 1e-9) -> bool:
    """Feasibility of h = sum_w c_w w(x), c >= 0, sum c = 1, by linear programming."""
    h = np.asarray(h, dtype=float)
    x = np.asarray(x, dtype=float)
    verts = np.array(sorted(set(permutations(x.tolist()))))
    k, n = verts.shape
    # minimize slack s with |verts^T c - h| <= s
    c_obj = np.zeros(k + 1)
    c_obj[-1] = 1.0
    A = np.vstack([
        np.hstack([verts.T, -np.ones((n, 1))]),
        np.hstack([-verts.T, -np.ones((n, 1))]),
    ])
    b = np.concatenate([h, -h])
    A_eq = np.hstack([np.ones((1, k)), np.zeros((1, 1))])
    res = linprog(c_obj, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * (k + 1), method="highs")
    if not res.success:
        raise RuntimeError(f"linear program failed: {res.message}")
    return float(res.fun) <= tol


def majorizes(x, h, tol: float = 1e-9) -> bool:
    """True when h is majorized by x (equal sums, dominated partial sums)."""
    xs = np.sort(np.asarray(x, dtype=float))[::-1]
    hs = np.sort(np.asarray(h, dtype=float))[::-1]
    if abs(xs.sum() - hs.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(hs) <= np.cumsum(xs) + tol))


def _clusters(eig: np.ndarray, tol: float, ambiguity: float):
    n = len(eig)
    d = np.abs(eig[:, None] - eig[None, :])
    grey = (d > tol) & (d < ambiguity * tol)
    if grey.any():
        i, j = np.argwhere(grey)[0]
        raise Refusal(
            f"eigenvalue gap {d[i, j]:.3e} is within a factor {ambiguity:g} of the "
            f"clustering tolerance {tol:.3e}"
        )
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= tol:
                a, b = label[i], label[j]
                label = [a if l == b else l for l in label]
    return label


def weyl_disc_real(g, cluster_tol: float | None = None, ambiguity: float = 1e3) -> float:
    """prod over ordered pairs of distinct eigenvalue clusters of |1 - rho_i / rho_j|.

    Eigenvalues closer than ``cluster_tol`` (default 1e-8 |g|) are treated as
    equal. Gaps between the tolerance and ``ambiguity`` times it are refused.
    """
    g = np.asarray(g, dtype=float)
    eig = np.linalg.eigvals(g)
    if cluster_tol is None:
        cluster_tol = 1e-8 * float(np.linalg.norm(g, 2))
    label = _clusters(eig, cluster_tol, ambiguity)
    out = 1.0
    n = len(eig)
    for i in range(n):
        for j in range(n):
            if label[i] != label[j]:
                out *= abs(1 - eig[i] / eig[j])
    return float(out)


def delta_minus(eigenvalues, roots: str = "all", tol: float = 1e-12) -> float:
    """prod of max(1, |1 - a|^-1) over root values a = rho_i / rho_j != 1.

    ``roots="all"`` runs over i != j and is invariant under permutation and
    inversion of the eigenvalues. ``roots="positive"`` takes i < j in the order given.
    """
    ev = np.asarray(eigenvalues, dtype=complex)
    n = len(ev)
    if roots == "all":
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    elif roots == "positive":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        raise ValueError(f"unknown root set {roots!r}")
    out = 1.0
    for i, j in pairs:
        gap = abs(1 - ev[i] / ev[j])
        if gap > tol:
            out *= max(1.0, 1.0 / gap)
    return out


# ---------------------------------------------------------------------------
# samplers


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.array([[1.0 if rng.random() < 0.5 else -1.0]])
    return ortho_group.rvs(n, random_state=rng)


def random_group_matrix(n: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    """Gaussian perturbation of the identity, rescaled to |det| = 1."""
    while True:
        g = np.eye(n) + spread * rng.standard_normal((n, n))
        if abs(np.linalg.det(g)) > 1e-6:
            return normalize_det(g)


def bounded_group_matrix(n: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """k1 e^X k2 with Haar k1, k2 and ||X|| <= radius."""
    x = rng.standard_normal(n)
    x -= x.mean()
    nx = np.linalg.norm(x)
    if nx > 0:
        x *= radius * rng.random() ** (1.0 / max(n - 1, 1)) / nx
    return haar_orthogonal(n, rng) @ np.diag(np.exp(x)) @ haar_orthogonal(n, rng)
