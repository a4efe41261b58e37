"""Spherical functions, the Harish-Chandra c-function and the Weyl-law main term for GL(n, R)^1."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

import numpy as np
from scipy.special import loggamma
from scipy.stats import ortho_group

from .archgeo import as_group_matrix, cartan_X
from .errors import ConvergenceError, Refusal

__all__ = [
    "QuadratureSpec",
    "SphericalValue",
    "rho",
    "iwasawa_H0_batch",
    "spherical_phi",
    "c_function",
    "plancherel_density",
    "weyl_main_term",
    "MainTerm",
    "DecayReport",
    "decay_audit",
    "weyl_orbit",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """How to integrate over SO(n).

    ``product-angles`` (n <= 3) doubles ``nodes`` per angle until two
    successive estimates differ by less than ``tol``, giving up once a rule
    would exceed ``max_nodes`` per angle or ``max_points`` evaluations in all.
    ``monte-carlo`` draws ``nodes`` Haar samples from ``seed`` and reports the
    standard error.
    """

    method: str = "product-angles"
    nodes: int = 32
    seed: int = 0
    tol: float = 1e-10
    max_nodes: int = 1 << 16
    max_points: int = 1 << 28

    def __post_init__(self):
        if self.method not in ("product-angles", "monte-carlo"):
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if self.nodes < 2:
            raise ValueError("need at least two nodes")


@dataclass(frozen=True)
class SphericalValue:
    value: complex
    error: float
    nodes: int


def rho(n: int) -> np.ndarray:
    return np.array([(n - 1) / 2 - i for i in range(n)])


def iwasawa_H0_batch(g: np.ndarray) -> np.ndarray:
    """Trace-zero Iwasawa projections for a stack of matrices of shape (N, n, n).

    If g = R Q then (J g)^t = Q' R' with J the reversal, and diag R is diag R' reversed.
    """
    flipped = np.swapaxes(g[:, ::-1, :], 1, 2)
    r = np.linalg.qr(flipped, mode="r")
    h = np.log(np.abs(np.diagonal(r, axis1=1, axis2=2)))[:, ::-1]
    return h - h.mean(axis=1, keepdims=True)


def _integrand(lam: np.ndarray, g: np.ndarray, ks: np.ndarray) -> np.ndarray:
    h = iwasawa_H0_batch(ks @ g)
    return np.exp(h @ (1j * lam + rho(len(lam))))


def _so2(theta):
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty((len(theta), 2, 2))
    out[:, 0, 0], out[:, 0, 1], out[:, 1, 0], out[:, 1, 1] = c, -s, s, c
    return out


def _rz(a):
    c, s = np.cos(a), np.sin(a)
    out = np.zeros((len(a), 3, 3))
    out[:, 0, 0], out[:, 0, 1], out[:, 1, 0], out[:, 1, 1], out[:, 2, 2] = c, -s, s, c, 1
    return out


def _ry(b):
    c, s = np.cos(b), np.sin(b)
    out = np.zeros((len(b), 3, 3))
    out[:, 0, 0], out[:, 0, 2], out[:, 2, 0], out[:, 2, 2], out[:, 1, 1] = c, s, -s, c, 1
    return out


def _so3_rule(lam, x, N: int) -> complex:
    """Tensor rule on SO(3) for the integrand at diag(e^x).

    With k = Rz(A) Ry(B) Rz(C) and g = k a (a diagonal, det 1) the triangular
    factor of g = R Q has |R_33| = |k_3 a| and |R_22 R_33| = |k_1 a^-1|, since
    k_2 x k_3 = k_1 on SO(3). Only rows 1 and 3 of k are needed.
    """
    nu = 1j * np.asarray(lam) + rho(3)
    a = np.exp(x)
    t = 2 * np.pi * np.arange(N) / N
    cA, sA = np.cos(t)[:, None], np.sin(t)[:, None]
    cC, sC = np.cos(t)[None, :], np.sin(t)[None, :]
    c, w = np.polynomial.legendre.leggauss(N)
    total = 0j
    for cB, wB in zip(c, w):
        sB = math.sqrt(max(0.0, 1 - cB * cB))
        r33 = np.sqrt((sB * cC * a[0]) ** 2 + (sB * sC * a[1]) ** 2 + (cB * a[2]) ** 2)
        q = np.sqrt(
            ((cA * cB * cC - sA * sC) / a[0]) ** 2
            + ((-cA * cB * sC - sA * cC) / a[1]) ** 2
            + (cA * sB / a[2]) ** 2
        )
        lr33, lq = np.log(r33), np.log(q)
        expo = -nu[0] * lq + nu[1] * (lq - lr33) + nu[2] * lr33
        total += wB * complex(np.exp(expo).sum())
    return complex(total) / (2 * N * N)


def _product_rule(lam, g, N: int) -> complex:
    n = len(lam)
    if n == 2:
        theta = 2 * np.pi * np.arange(N) / N
        return complex(_integrand(lam, g, _so2(theta)).mean())
    # ZYZ Euler angles; Haar weight sin(beta) absorbed by Gauss-Legendre in cos(beta).
    # The integrand is right K-invariant and the Haar measure left invariant,
    # so only the Cartan part of g matters.
    return _so3_rule(lam, cartan_X(g), N)


def spherical_phi(lam: Sequence[float], g, quad: QuadratureSpec = QuadratureSpec()) -> SphericalValue:
    """phi at the spectral parameter i*lam: the integral over K of exp(<i lam + rho, H0(k g)>)."""
    lam = np.asarray(lam, dtype=float)
    g = as_group_matrix(g)
    n = g.shape[0]
    if lam.shape != (n,):
        raise ValueError("spectral parameter and matrix have different ranks")
    if abs(lam.sum()) > 1e-12 * max(1.0, np.abs(lam).max()):
        raise ValueError("spectral parameter must sum to zero")
    if n == 1:
        return SphericalValue(1.0 + 0j, 0.0, 1)
    if quad.method == "monte-carlo" or n > 3:
        rng = np.random.default_rng(quad.seed)
        ks = ortho_group.rvs(n, size=quad.nodes, random_state=rng)
        vals = _integrand(lam, g, ks.reshape(quad.nodes, n, n))
        err = float(np.std(vals) / math.sqrt(quad.nodes))
        return SphericalValue(complex(vals.mean()), err, quad.nodes)
    N = quad.nodes
    prev = _product_rule(lam, g, N)
    while True:
        N *= 2
        if N > quad.max_nodes or N ** (1 if n == 2 else 3) > quad.max_points:
            raise ConvergenceError(
                f"spherical quadrature not within {quad.tol:g} at {N // 2} nodes per angle",
                partial=prev,
            )
        cur = _product_rule(lam, g, N)
        err = float(abs(cur - prev))
        if err < quad.tol:
            return SphericalValue(cur, err, N)
        prev = cur


# ---------------------------------------------------------------------------
# c-function


def _root_values(lam) -> list:
    lam = np.asarray(lam, dtype=complex)
    n = len(lam)
    return [lam[i] - lam[j] for i in range(n) for j in range(i + 1, n)]


def c_function(lam: Sequence[complex], pole_tol: float = 1e-10) -> complex:
    """pi^{|Phi+|/2} prod over i<j of Gamma(a/2) / Gamma((a+1)/2), a = lam_i - lam_j."""
    roots = _root_values(lam)
    log_c = 0j
    for a in roots:
        z = a / 2
        k = round(-z.real)
        if k >= 0 and abs(z + k) < pole_tol:
            raise Refusal(f"root value {a} is at a Gamma pole")
        log_c += loggamma(z) - loggamma(z + 0.5)
    log_c += len(roots) * math.log(math.pi) / 2
    return complex(np.exp(log_c))


def plancherel_density(s) -> np.ndarray:
    """|c(i s)|^{-2} = prod over i<j of (x/2) tanh(pi x/2) / pi, x = s_i - s_j.

    Accepts a single vector or a stack of shape (N, n). Vanishes on the walls.
    """
    s = np.asarray(s, dtype=float)
    single = s.ndim == 1
    s = np.atleast_2d(s)
    n = s.shape[1]
    out = np.ones(s.shape[0])
    for i in range(n):
        for j in range(i + 1, n):
            x = s[:, i] - s[:, j]
            out *= 0.5 * x * np.tanh(np.pi * x / 2) / np.pi
    return out[0] if single else out


def _trace_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (rows) of the sum-zero hyperplane in R^n."""
    m = np.eye(n)[:, : n - 1] - np.eye(n)[:, 1:]
    q, _ = np.linalg.qr(m)
    return q.T


@dataclass(frozen=True)
class MainTerm:
    value: float
    exponent: float
    d: int
    nodes: tuple[int, int]


def _ball_integral(n: int, radius: float, radial: int, angular: int) -> float:
    basis = _trace_zero_basis(n)
    r = n - 1
    x, w = np.polynomial.legendre.leggauss(radial)
    rad = radius * (x + 1) / 2
    rw = w * radius / 2
    if r == 1:
        pts = rad[:, None] * basis[0]
        return 2 * float(np.dot(plancherel_density(pts), rw))
    if r == 2:
        # Gauss-Legendre on each sector between walls: the density is smooth
        # inside a sector but varies on a scale 1/radius next to the walls
        walls = []
        for i in range(n):
            for j in range(i + 1, n):
                a = basis[0, i] - basis[0, j]
                b = basis[1, i] - basis[1, j]
                base = math.atan2(-a, b)
                walls += [base % (2 * np.pi), (base + np.pi) % (2 * np.pi)]
        walls = sorted(walls) + [sorted(walls)[0] + 2 * np.pi]
        u, v = np.polynomial.legendre.leggauss(angular)
        total = 0.0
        for lo, hi in zip(walls, walls[1:]):
            th = lo + (hi - lo) * (u + 1) / 2
            tw = v * (hi - lo) / 2
            dirs = np.cos(th)[:, None] * basis[0] + np.sin(th)[:, None] * basis[1]
            pts = rad[:, None, None] * dirs[None, :, :]
            vals = plancherel_density(pts.reshape(-1, n)).reshape(radial, angular)
            total += float(np.dot(vals @ tw * rad, rw))
        return total
    raise ValueError("main term quadrature is implemented for n = 2, 3")


def weyl_main_term(
    omega: float,
    t: float,
    n: int,
    volume: float = 1.0,
    rtol: float = 1e-9,
    max_nodes: int = 4096,
) -> MainTerm:
    """volume * (2/|W|) * integral over the ball of radius omega*t of |c|^{-2}.

    Radial Gauss-Legendre times Gauss-Legendre on each angular sector between
    walls, doubled until the relative change is below ``rtol``. ``exponent`` is the log-ratio
    between radii t and 2t.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if omega <= 0:
        raise ValueError("omega must be positive")
    d = n * (n + 1) // 2 - 1

    def adaptive(R):
        radial, angular = 32, 32
        prev = _ball_integral(n, R, radial, angular)
        while True:
            radial, angular = 2 * radial, 2 * angular
            if radial > max_nodes:
                raise ConvergenceError(f"main term quadrature stalled at radius {R}", partial=prev)
            cur = _ball_integral(n, R, radial, angular)
            if abs(cur - prev) <= rtol * abs(cur):
                return cur, (radial, angular)
            prev = cur

    scale = volume * 2 / math.factorial(n)
    v1, nodes = adaptive(omega * t)
    v2, _ = adaptive(2 * omega * t)
    return MainTerm(scale * v1, math.log(v2 / v1) / math.log(2), d, nodes)


# ---------------------------------------------------------------------------
# decay audit


@dataclass
class DecayReport:
    cells: list[dict] = field(default_factory=list)
    caps: list[float] = field(default_factory=list)
    sup_by_cap: list[float] = field(default_factory=list)
    imag_violations: list[dict] = field(default_factory=list)
    excluded: list[dict] = field(default_factory=list)
    stable: bool = False

    @property
    def sup(self) -> float:
        return max(self.sup_by_cap) if self.sup_by_cap else float("nan")


def decay_audit(
    lams: Sequence[Sequence[float]],
    gs: Sequence,
    quad: QuadratureSpec = QuadratureSpec(),
    imag_tol: float = 1e-8,
    ratio: float = 1.1,
) -> DecayReport:
    """sup of (1 + |lam| |X(g)|)^{1/2} |phi_lam(g)| over the grid, by dyadic caps on |lam|.

    Cells whose quadrature fails are excluded and listed. ``stable`` says
    whether the last two dyadic sups differ by at most the factor ``ratio``.
    """
    rep = DecayReport()
    for g in gs:
        xg = float(np.linalg.norm(cartan_X(g)))
        for lam in lams:
            ln = float(np.linalg.norm(lam))
            try:
                phi = spherical_phi(lam, g, quad)
            except ConvergenceError as exc:
                rep.excluded.append({"lambda": list(lam), "reason": str(exc)})
                continue
            weighted = math.sqrt(1 + ln * xg) * abs(phi.value)
            cell = {"lambda_norm": ln, "x_norm": xg, "phi": phi.value, "weighted": weighted}
            rep.cells.append(cell)
            if abs(phi.value.imag) > imag_tol:
                rep.imag_violations.append(cell)
    if not rep.cells:
        return rep
    top = max(c["lambda_norm"] for c in rep.cells)
    low = min(c["lambda_norm"] for c in rep.cells)
    cap = 2.0 ** math.ceil(math.log2(low) - 1e-9) if low > 0 else 1.0
    while True:
        rep.caps.append(cap)
        rep.sup_by_cap.append(max(c["weighted"] for c in rep.cells if c["lambda_norm"] <= cap + 1e-12))
        if cap >= top:
            break
        cap *= 2
    if len(rep.sup_by_cap) >= 2:
        a, b = rep.sup_by_cap[-2], rep.sup_by_cap[-1]
        rep.stable = bool(np.isfinite(b) and b <= ratio * a)
    return rep


def weyl_orbit(lam: Sequence[float]) -> list[tuple[float, ...]]:
    return sorted(set(permutations(tuple(float(x) for x in lam))))
