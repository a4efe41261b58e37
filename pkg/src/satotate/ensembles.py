"""Limiting zero statistics of the classical symmetry types.

The 1-level densities for SO(even) and SO(odd) are the standard Katz-Sarnak
kernels; results computed from them carry ``source="standard-literature
extension"`` in their metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import sici

from .errors import Refusal

__all__ = [
    "ENSEMBLES",
    "BandLimitedTestFn",
    "PairingResult",
    "sine_kernel",
    "k_level_density_U",
    "one_level_density",
    "atom_weight",
    "density_pairing",
]

ENSEMBLES = ("U", "Sp", "SOeven", "SOodd")
_EXTENSION = {"SOeven", "SOodd"}


def sine_kernel(x, y):
    """sin(pi(x-y)) / (pi(x-y)), equal to 1 on the diagonal."""
    return np.sinc(np.subtract(x, y))


def k_level_density_U(xs: Sequence[float]) -> float:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 1:
        raise ValueError("need at least one point")
    return float(np.linalg.det(sine_kernel(xs[:, None], xs[None, :])))


def _sign(ensemble: str) -> int:
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    return {"U": 0, "Sp": -1, "SOeven": 1, "SOodd": -1}[ensemble]


def one_level_density(ensemble: str, x):
    """Absolutely continuous part of the 1-level density W(x); see ``atom_weight`` for SOodd."""
    eps = _sign(ensemble)
    x = np.asarray(x, dtype=float)
    out = 1.0 + eps * np.sinc(2 * x)
    return float(out) if out.ndim == 0 else out


def atom_weight(ensemble: str) -> float:
    """Mass of the point atom at 0: 1 for SOodd, else 0."""
    _sign(ensemble)
    return 1.0 if ensemble == "SOodd" else 0.0


@dataclass(frozen=True)
class BandLimitedTestFn:
    """Fejer kernel (sin(pi s x) / (pi s x))^2 with Fourier transform (1/s)(1 - |xi|/s)_+."""

    sigma: float
    scale: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def __call__(self, x):
        return self.scale * np.sinc(self.sigma * np.asarray(x, dtype=float)) ** 2

    def fourier(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        return self.scale * np.maximum(0.0, 1 - xi / self.sigma) / self.sigma

    @property
    def integral(self) -> float:
        return self.scale / self.sigma

    def tail(self, L: float) -> float:
        """Exact integral of the function over |x| > L."""
        a = math.pi * self.sigma
        si, _ = sici(2 * a * L)
        return 2 * self.scale / a * (math.sin(a * L) ** 2 / (a * L) + math.pi / 2 - si)

    def envelope(self) -> float:
        """C with f(x) <= C / x^2."""
        return self.scale / (math.pi * self.sigma) ** 2


@dataclass
class PairingResult:
    value: float
    tail_bound: float
    method: str
    metadata: dict = field(default_factory=dict)


def _panels(L: float, width: float, order: int):
    count = max(1, int(math.ceil(2 * L / width)))
    edges = np.linspace(-L, L, count + 1)
    u, w = np.polynomial.legendre.leggauss(order)
    half = np.diff(edges) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    x = (mid[:, None] + half[:, None] * u[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return x, wt


def _direct_one(phi: BandLimitedTestFn, eps: int, L: float) -> tuple[float, float]:
    # W = 1 + eps sinc(2x): the constant part is integrated on [-L, L] and
    # completed by the exact tail, the oscillating part is truncated
    width = min(0.5, 0.5 / phi.sigma)
    x, w = _panels(L, width, 16)
    f = phi(x)
    value = float(np.dot(f, w)) + phi.tail(L)
    bound = 0.0
    if eps:
        value += eps * float(np.dot(f * np.sinc(2 * x), w))
        # |f sinc(2x)| <= C / (2 pi |x|^3)
        bound = phi.envelope() / (2 * math.pi * L * L)
    return value, bound


def _fourier_one(phi: BandLimitedTestFn, eps: int) -> float:
    # the transform of sinc(2x) is (1/2) on [-1, 1]; both pieces are piecewise linear
    m = min(1.0, phi.sigma)
    u, w = np.polynomial.legendre.leggauss(8)
    xi = m * (u + 1) / 2
    half_mass = float(np.dot(phi.fourier(xi), w)) * m / 2
    return float(phi.fourier(0.0)) + eps * half_mass


def _direct_two(p1: BandLimitedTestFn, p2: BandLimitedTestFn, L: float, chunk: int = 512):
    width = min(0.5, 0.5 / max(p1.sigma, p2.sigma))
    x, w = _panels(L, width, 10)
    f1, f2 = p1(x) * w, p2(x) * w
    one1 = float(f1.sum()) + p1.tail(L)
    one2 = float(f2.sum()) + p2.tail(L)
    cross = 0.0
    for s in range(0, len(x), chunk):
        blk = np.sinc(x[s:s + chunk, None] - x[None, :]) ** 2
        cross += float(f1[s:s + chunk] @ blk @ f2)
    # outside the box: |x| > L or |y| > L; the inner integral of
    # f(y) sinc^2(x - y) is at most 4 (I + pi^2 C) / (pi^2 x^2)
    return one1 * one2 - cross, _two_tail(p1, p2) / L ** 3


def _two_tail(p1: BandLimitedTestFn, p2: BandLimitedTestFn) -> float:
    def far(a, b):
        c = 4 * (b.integral + b.envelope() * math.pi ** 2) / math.pi ** 2
        return 2 * a.envelope() * c / 3
    return far(p1, p2) + far(p2, p1)


def _fourier_two(p1: BandLimitedTestFn, p2: BandLimitedTestFn) -> float:
    # integral of f1(x) f2(y) sinc^2(x - y) = integral of F1(xi) F2(xi) (1 - |xi|)_+
    m = min(1.0, p1.sigma, p2.sigma)
    u, w = np.polynomial.legendre.leggauss(16)
    xi = m * (u + 1) / 2
    cross = 2 * float(np.dot(p1.fourier(xi) * p2.fourier(xi) * (1 - xi), w)) * m / 2
    return float(p1.fourier(0.0) * p2.fourier(0.0)) - cross


def density_pairing(
    ensemble: str,
    k: int,
    phis: Sequence[BandLimitedTestFn],
    method: str = "direct",
    max_support: float | None = None,
    include_atom: bool = False,
    tol: float = 1e-7,
    L: float | None = None,
) -> PairingResult:
    """Integral of phi_1(x_1)...phi_k(x_k) W(x) for the ensemble's k-level density W.

    ``method`` is "direct" (x-space quadrature on [-L, L]^k with a tail bound)
    or "fourier" (Parseval against the transforms). Pairings are available for
    k = 1 and, for U, k = 2. ``max_support`` is the caller's admissible bound on
    every sigma; nothing is assumed when it is None.
    """
    _sign(ensemble)
    if len(phis) != k:
        raise ValueError(f"expected {k} test functions, got {len(phis)}")
    if max_support is not None and any(f.sigma > max_support for f in phis):
        raise ValueError(f"test function support exceeds the declared bound {max_support}")
    meta = {"ensemble": ensemble, "k": k}
    if ensemble in _EXTENSION:
        meta["source"] = "standard-literature extension"
    eps = _sign(ensemble)
    if k == 1:
        phi = phis[0]
        if method == "direct":
            if L is None:
                L = max(100.0, math.sqrt(phi.envelope() / (math.pi * tol)))
            value, bound = _direct_one(phi, eps, L)
        elif method == "fourier":
            value, bound = _fourier_one(phi, eps), 0.0
        else:
            raise ValueError(f"unknown method {method!r}")
        if include_atom and atom_weight(ensemble):
            value += atom_weight(ensemble) * float(phi(0.0))
            meta["atom"] = atom_weight(ensemble)
    elif k == 2 and ensemble == "U":
        if method == "direct":
            if L is None:
                L = max(60.0, (2 * _two_tail(*phis) / tol) ** (1 / 3))
            value, bound = _direct_two(phis[0], phis[1], L)
        elif method == "fourier":
            value, bound = _fourier_two(phis[0], phis[1]), 0.0
        else:
            raise ValueError(f"unknown method {method!r}")
    else:
        raise ValueError(f"no {k}-level pairing for ensemble {ensemble}")
    if bound > tol:
        raise Refusal(f"tail bound {bound:.3e} exceeds tolerance {tol:.1e}; enlarge L")
    return PairingResult(float(value), float(bound), method, meta)
