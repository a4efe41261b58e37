"""Moments of the unramified Plancherel measure of PGL(n, Q_p).

Three routes to the same numbers:
    kato_moment       closed form through Kostka-Foulkes polynomials
    moment_via_hecke  invert the Satake transform, sum over the centre
    macdonald_moment  quadrature of the Macdonald density on the torus
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .errors import ConvergenceError
from .hecke import central_sum, degree, pairing_2rho, satake_inverse
from .scalars import QSqrt, u_power
from .symfunc import (
    QPolynomial,
    SymLaurentPoly,
    check_dominant,
    dual,
    evaluate_many,
    kostka_foulkes,
    schur_expand,
    to_schur,
)

__all__ = [
    "MomentReport",
    "RecursionResult",
    "kl_polynomial",
    "kato_moment",
    "moment_via_hecke",
    "gamma_coeff",
    "gamma_weight",
    "recursion_check",
    "macdonald_moment",
    "family_character",
    "family_moment",
    "satotate_moment",
    "moment_report",
]


@dataclass
class MomentReport:
    target: object
    p: int
    routes: list[tuple[str, object]] = field(default_factory=list)
    tolerance: float = 0.0
    agreement: bool = True

    def value(self, route: str):
        for name, v in self.routes:
            if name == route:
                return v
        raise KeyError(route)


# ---------------------------------------------------------------------------
# exact routes


def kl_polynomial(nu: Sequence[int], normalization: str = "reversed") -> QPolynomial:
    """P_{0,nu}(q) from K_{nu_hat, (k^n)}.

    "reversed" gives q^{deg} K(1/q), the normalization under which
    p^{-<nu,rho>} P(p) is the Plancherel moment. "lowest" divides K by its
    lowest power of q instead; the two agree exactly when K is palindromic.
    Returns the zero polynomial when n does not divide |nu_hat|.
    """
    if normalization not in ("reversed", "lowest"):
        raise ValueError(f"unknown normalization {normalization!r}")
    nu = check_dominant(nu)
    n = len(nu)
    hat = tuple(x - nu[-1] for x in nu)
    size = sum(hat)
    if size % n:
        return QPolynomial()
    K = kostka_foulkes(hat, (size // n,) * n)
    if normalization == "reversed":
        return K.reversed()
    return K.shift_down()


def kato_moment(nu: Sequence[int], p: int, normalization: str = "reversed") -> Fraction:
    """Integral of s_nu against the Plancherel measure."""
    nu = check_dominant(nu)
    P = kl_polynomial(nu, normalization)
    if not P:
        return Fraction(0)
    twice = pairing_2rho(nu)
    assert twice % 2 == 0, "weight-zero weights have integral <nu, rho>"
    return Fraction(P(p)) / Fraction(p) ** (twice // 2)


def moment_via_hecke(phi: SymLaurentPoly, p: int) -> QSqrt:
    """Sum over the centre of the Hecke element whose Satake transform is phi."""
    h = satake_inverse(phi, p)
    # translating by the centre permutes central cosets, so the sum is unchanged
    return central_sum(h.shift_to_integral())


def gamma_weight(exponents: Sequence[int]) -> tuple[int, ...]:
    """Map exponents (e_1..e_{n-1}) of gamma(p^e_1, ..., p^e_{n-1}) to nu with nu_n = 0.

    nu_{n-1} = e_1, nu_{n-2} - nu_{n-1} = e_2, and so on.
    """
    n = len(exponents) + 1
    nu = [0] * n
    for j in range(1, n):
        nu[n - 1 - j] = nu[n - j] + exponents[j - 1]
    return tuple(nu)


def gamma_coeff(ms: Sequence[int], p: int | None = None) -> Fraction:
    """gamma(m_1, ..., m_{n-1}) as a product of local Plancherel moments.

    With ``p`` given, every m_i must be a power of p. Without it the m_i are
    factored and the local factors multiplied.
    """
    ms = [int(m) for m in ms]
    if any(m < 1 for m in ms):
        raise ValueError("gamma indices must be positive integers")
    if p is not None:
        exps = []
        for m in ms:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"index is not a power of {p}")
            exps.append(e)
        return kato_moment(gamma_weight(exps), p)
    primes = set()
    for m in ms:
        primes |= set(sympy.factorint(m))
    value = Fraction(1)
    for q in sorted(primes):
        exps = [sympy.multiplicity(q, m) for m in ms]
        value *= kato_moment(gamma_weight(exps), q)
    return value


@dataclass(frozen=True)
class RecursionResult:
    holds: bool
    lhs: QSqrt
    rhs: QSqrt


def recursion_check(kappa1: int, kappa2: int, p: int, n: int) -> RecursionResult:
    """Compare the gamma-side and degree-side of the product recursion exactly."""
    if n not in (2, 3):
        raise ValueError("recursion identities are available for n = 2, 3")
    k1, k2 = kappa1, kappa2
    total = k1 + k2
    gsum = Fraction(0)
    for e in range(min(k1, k2) + 1):
        exps = [total - 2 * e] if n == 2 else [total - 2 * e, e]
        gsum += gamma_coeff([p ** x for x in exps], p)
    lhs = u_power(total if n == 2 else 2 * total, p) * gsum
    rhs = Fraction(0)
    if total % n == 0:
        cap = total // n
        if n == 2:
            for xi in range(-(-k1 // 2), min(k1, cap) + 1):
                rhs += degree((2 * xi, k1), p)
        else:
            for x1 in range(-(-k1 // 3), min(k1, cap) + 1):
                for x2 in range(-(-(k1 - x1) // 2), min(k1 - x1, x1) + 1):
                    rhs += degree((2 * x1 + x2, 2 * x2 + x1, k1), p)
    rhs = QSqrt(rhs, 0, p)
    return RecursionResult(lhs == rhs, lhs, rhs)


# ---------------------------------------------------------------------------
# quadrature route


def _torus_density(theta: np.ndarray, t: float) -> np.ndarray:
    """prod_{j != k} (1 - z_jk)/(1 - t z_jk), z_jk = exp(i(theta_j - theta_k))."""
    n = theta.shape[1]
    dens = np.ones(theta.shape[0])
    for j in range(n):
        for k in range(j + 1, n):
            z = np.exp(1j * (theta[:, j] - theta[:, k]))
            dens *= np.abs(1 - z) ** 2 / np.abs(1 - t * z) ** 2
    return dens


def _trapezoid(phi: SymLaurentPoly, p: int, N: int) -> tuple[complex, float]:
    n = phi.n
    axes = [2 * np.pi * np.arange(N) / N] * (n - 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    theta = np.stack([m.ravel() for m in mesh] + [-sum(m.ravel() for m in mesh)], axis=1)
    dens = _torus_density(theta, 1.0 / p)
    vals = evaluate_many(phi, np.exp(1j * theta))
    m = dens.size
    return complex(np.dot(vals, dens)) / m, float(dens.sum()) / m


def macdonald_moment(
    phi: SymLaurentPoly,
    p: int,
    start: int = 16,
    tol: float = 1e-10,
    max_points: int = 1 << 22,
) -> tuple[complex, float]:
    """Numerical Plancherel moment; returns (value, error estimate).

    Tensor trapezoid rule on the sum-zero section of the torus, doubled until
    both the normalisation and the moment change by less than ``tol``
    (normalisation threshold 1e-9 at most).
    """
    n = phi.n
    if n == 1:
        return complex(evaluate_many(phi, np.ones((1, 1)))[0]), 0.0
    spread = max((max(w) - min(w) for w in phi.terms), default=0)
    N = max(start, 2 * (spread + 2))
    prev = None
    ztol = min(tol, 1e-9)
    while True:
        if N ** (n - 1) > max_points:
            residual = None if prev is None else prev[2]
            raise ConvergenceError(
                f"normalisation not converged within {max_points} nodes", partial=residual
            )
        num, Z = _trapezoid(phi, p, N)
        value = num / Z
        if prev is not None:
            z_res = abs(Z - prev[1]) / abs(Z)
            err = abs(value - prev[0])
            if z_res < ztol and err < tol:
                return value, err
            prev = (value, Z, z_res)
        else:
            prev = (value, Z, None)
        N *= 2


# ---------------------------------------------------------------------------
# families and the large-p limit


def family_character(rep: str, n: int) -> SymLaurentPoly:
    """Character of std, sym2, ext2 or ad as a symmetric Laurent polynomial."""
    pad = lambda *xs: tuple(xs) + (0,) * (n - len(xs))
    if rep == "std":
        return schur_expand(pad(1), n)
    if rep == "sym2":
        return schur_expand(pad(2), n)
    if rep == "ext2":
        if n < 2:
            raise ValueError("ext2 needs n >= 2")
        return schur_expand(pad(1, 1), n)
    if rep == "ad":
        s = schur_expand(pad(1), n)
        return s * dual(s) - SymLaurentPoly.one(n)
    raise ValueError(f"unknown representation {rep!r}")


def _schur_moment(phi: SymLaurentPoly, p: int):
    total = Fraction(0)
    for nu, c in to_schur(phi).items():
        m = kato_moment(nu, p)
        if m:
            total = total + c * m
    return total


def family_moment(rep: str, n: int, p: int) -> Fraction:
    """Plancherel moment of the character of ``rep``."""
    return _schur_moment(family_character(rep, n), p)


def satotate_moment(phi: SymLaurentPoly):
    """Haar integral over SU(n): total coefficient of determinant powers in the Schur expansion."""
    total = 0
    for nu, c in to_schur(phi).items():
        if len(set(nu)) == 1:
            total = total + c
    return total


def moment_report(
    phi_or_nu,
    p: int,
    routes: Sequence[str] = ("kato", "hecke", "quad"),
    tolerance: float = 1e-6,
) -> MomentReport:
    """Compute the moment by each requested route and record agreement."""
    if isinstance(phi_or_nu, SymLaurentPoly):
        phi, target = phi_or_nu, "poly"
        nu = None
    else:
        nu = check_dominant(phi_or_nu)
        phi, target = schur_expand(nu, len(nu)), nu
    report = MomentReport(target=target, p=p, tolerance=tolerance)
    exact = []
    numeric = []
    for r in routes:
        if r == "kato":
            v = kato_moment(nu, p) if nu is not None else _schur_moment(phi, p)
            report.routes.append(("kato", v))
            exact.append(QSqrt(v, 0, p))
        elif r == "hecke":
            v = moment_via_hecke(phi, p)
            report.routes.append(("hecke", v))
            exact.append(v)
        elif r == "quad":
            v, err = macdonald_moment(phi, p)
            report.routes.append(("quad", v))
            numeric.append(v)
        else:
            raise ValueError(f"unknown route {r!r}")
    ok = all(e == exact[0] for e in exact)
    if exact:
        ref = complex(exact[0])
        ok = ok and all(abs(v - ref) <= tolerance for v in numeric)
    elif len(numeric) > 1:
        ok = all(abs(v - numeric[0]) <= tolerance for v in numeric)
    report.agreement = ok
    return report
