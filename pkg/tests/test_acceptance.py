"""Acceptance criteria; each test prints one PASS/FAIL line.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import sys
import time
from fractions import Fraction as F

import numpy as np
import pytest

from satotate.archgeo import (
    bounded_group_matrix,
    cartan_X,
    ell,
    in_weyl_hull,
    iwasawa_H0,
    majorizes,
    weyl_disc_real,
)
from satotate.ensembles import BandLimitedTestFn, density_pairing
from satotate.errors import Refusal
from satotate.hecke import (
    HeckeElement,
    calibrate_oracle,
    degree,
    ramanujan_detector,
    ramanujan_polynomials,
    random_unitary_det_one,
    satake,
    satake_oracle,
)
from satotate.orbital import GL2OrbitalInput, gl2_invariants, gl2_orbital, gl2_orbital_oracle
from satotate.plancherel import (
    family_moment,
    gamma_coeff,
    kato_moment,
    macdonald_moment,
    moment_via_hecke,
    recursion_check,
    satotate_moment,
)
from satotate.scalars import QSqrt
from satotate.spherical import (
    decay_audit,
    spherical_phi,
    weyl_main_term,
    weyl_orbit,
)
from satotate.symfunc import evaluate_many, schur_expand

from conftest import VERDICTS


def verdict(number, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed <= budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail} [{elapsed:.2f}s of {budget:g}s]"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def dominant(n, top, low=0):
    return [w for w in itertools.product(range(low, top + 1), repeat=n) if list(w) == sorted(w, reverse=True)]


def test_criterion_01_gamma_table():
    t0 = time.perf_counter()
    bad = []
    for p in (2, 3, 5, 7):
        cases = [
            ([p], F(0)),
            ([p * p], F(1, p)),
            ([p, p], F(1, p) + F(1, p * p)),
            ([p ** 3, 1], F(1, p ** 3)),
            ([1, p], F(0)),
        ]
        for ms, want in cases:
            got = gamma_coeff(ms, p)
            if got != want:
                bad.append((p, ms, got, want))
    verdict(1, not bad, f"gamma table, {len(bad)} mismatches", time.perf_counter() - t0, 1)


def test_criterion_02_recursions():
    t0 = time.perf_counter()
    bad, total = [], 0
    for n in (2, 3):
        for p in (2, 3, 5):
            for k1 in range(7):
                for k2 in range(7):
                    total += 1
                    r = recursion_check(k1, k2, p, n)
                    if not r.holds:
                        bad.append((n, p, k1, k2))
    verdict(2, not bad, f"{total} recursion identities, {len(bad)} failures", time.perf_counter() - t0, 30)


def test_criterion_03_plancherel_routes():
    t0 = time.perf_counter()
    exact_bad, quad_err, count = [], 0.0, 0
    for p in (2, 3):
        for n in (1, 2, 3):
            for nu in dominant(n, 2, low=-1):
                if max(nu) - min(nu) > 2 or nu[-1] not in (0, -1):
                    continue
                count += 1
                k = kato_moment(nu, p)
                phi = schur_expand(nu, n)
                if moment_via_hecke(phi, p) != QSqrt(k, 0, p):
                    exact_bad.append((p, nu))
                v, _ = macdonald_moment(phi, p)
                quad_err = max(quad_err, abs(v - float(k)))
    ok = not exact_bad and quad_err <= 1e-6
    verdict(3, ok, f"{count} weights, {len(exact_bad)} exact mismatches, max quadrature error {quad_err:.2e}",
            time.perf_counter() - t0, 300)


def test_criterion_04_satake_oracle():
    t0 = time.perf_counter()
    calibrate_oracle(2)
    calibrate_oracle(3)
    bad, count = [], 0
    for p in (2, 3):
        for n in (1, 2, 3):
            for xi in dominant(n, 2):
                phi = satake(HeckeElement.basis(xi, p))
                for mu in dominant(n, 2):
                    if sum(mu) != sum(xi):
                        continue
                    count += 1
                    if satake_oracle(xi, mu, p) != phi.coefficient(mu):
                        bad.append((p, xi, mu))
    verdict(4, not bad, f"{count} coefficients vs lattice enumeration, {len(bad)} mismatches",
            time.perf_counter() - t0, 600)


def test_criterion_05_degree_closed_forms():
    t0 = time.perf_counter()
    bad, count = [], 0
    for p in (2, 3):
        for n in (2, 3):
            for xi in dominant(n, 2):
                count += 1
                if degree(xi, p, method="closed") != degree(xi, p, method="enumerate"):
                    bad.append((p, xi))
    verdict(5, not bad, f"{count} degrees, {len(bad)} mismatches", time.perf_counter() - t0, 120)


def _orbital_classes():
    """One representative x^2 - t x + d per (p, case, m, val D) with m <= 2, |val D| <= 2."""
    found = {}
    for p in (2, 3, 5):
        for t in range(-40, 41):
            for d in range(-200, 201):
                if d == 0 or t * t - 4 * d == 0:
                    continue
                case, dval, detval = gl2_invariants((1, -t, d), p)
                if abs(dval) > 2 or detval > 4:
                    continue
                for m in range(3):
                    if (detval - m) % 2 or detval < m:
                        continue
                    key = (p, case, m, dval)
                    if key not in found:
                        found[key] = ((1, -t, d), ((detval + m) // 2, (detval - m) // 2))
    return found


def test_criterion_06_gl2_orbital_table():
    t0 = time.perf_counter()
    classes = _orbital_classes()
    cases_seen = {case for (_, case, _, _) in classes}
    bad = []
    for key in sorted(classes):
        cp, xi = classes[key]
        p, case, m, dval = key
        oracle = gl2_orbital_oracle(cp, xi, p).value
        try:
            table = gl2_orbital(GL2OrbitalInput(p, case, m, dval))
        except ValueError as exc:
            table = f"rejected: {exc}"
        if table != oracle:
            bad.append((key, oracle, table))
    for key, oracle, table in bad:
        print(f"    mismatch {key}: oracle {oracle}, table {table}")
    detail = f"{len(classes)} class types over {sorted(cases_seen)}, {len(bad)} mismatches"
    if bad:
        (p, case, m, dval), oracle, table = bad[0]
        detail += f"; first: p={p} {case} m={m} val D={dval} oracle {oracle} vs table {table}"
    verdict(6, not bad, detail, time.perf_counter() - t0, 300)


def test_criterion_07_rank_zero_moments():
    t0 = time.perf_counter()
    bad = []
    for p in (2, 3, 5, 7, 11, 13):
        for n, want in ((2, F(1)), (3, 1 + F(1, p))):
            if family_moment("std", n, p) != 0:
                bad.append(("std", n, p))
            if p * family_moment("ad", n, p) != want:
                bad.append(("ad", n, p))
    verdict(7, not bad, f"std and ad moments, {len(bad)} failures", time.perf_counter() - t0, 1)


def test_criterion_08_sato_tate_convergence():
    t0 = time.perf_counter()
    primes = (2, 3, 5, 7, 11, 13)
    ok, parts = True, []
    for nu in ((2, 1, 0), (1, 1, 0)):
        limit = satotate_moment(schur_expand(nu, 3))
        gaps = [abs(kato_moment(nu, p) - limit) for p in primes]
        monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
        small = gaps[-1] <= F(2, 13)
        ok = ok and monotone and small
        parts.append(f"{nu}: gap at 13 = {float(gaps[-1]):.4f}, monotone {monotone}")
    verdict(8, ok, "; ".join(parts), time.perf_counter() - t0, 10)


def test_criterion_09_spherical_decay_audit():
    t0 = time.perf_counter()
    direction = np.array([1.0, -1.0]) / math.sqrt(2)
    lams = [direction * 2 ** (k / 4) for k in range(25)]
    gs = [np.diag([math.exp(t), math.exp(-t)]) for t in (0.25, 0.5, 1.0, 2.0)]
    gs.append(bounded_group_matrix(2, np.random.default_rng(9), 1.5))
    rep = decay_audit(lams, gs)
    caps = dict(zip(rep.caps, rep.sup_by_cap))
    ratio = caps[64.0] / caps[32.0]
    stable = ratio <= 1.1 and not rep.excluded
    # phi at the identity and Weyl invariance, for n = 2 and n = 3
    rng = np.random.default_rng(10)
    one_err, weyl_err = 0.0, 0.0
    for lam in lams[::4]:
        one_err = max(one_err, abs(spherical_phi(lam, np.eye(2)).value - 1))
        g = gs[-1]
        weyl_err = max(weyl_err, abs(spherical_phi(-lam, g).value - spherical_phi(lam, g).value))
    for lam in ([0.5, 0.1, -0.6], [2.0, -0.5, -1.5], [4.0, 1.0, -5.0]):
        one_err = max(one_err, abs(spherical_phi(lam, np.eye(3)).value - 1))
        g = bounded_group_matrix(3, rng, 1.0)
        ref = spherical_phi(lam, g).value
        for w in weyl_orbit(lam):
            weyl_err = max(weyl_err, abs(spherical_phi(w, g).value - ref))
    ok = stable and one_err <= 1e-8 and weyl_err <= 1e-8
    detail = (f"sup ratio cap 64 / cap 32 = {ratio:.4f}, phi(1) error {one_err:.1e}, "
              f"Weyl invariance error {weyl_err:.1e}")
    verdict(9, ok, detail, time.perf_counter() - t0, 600)


def test_criterion_10_weyl_main_term_exponent():
    t0 = time.perf_counter()
    ok, parts = True, []
    ts = np.geomspace(50, 200, 5)
    for n, d in ((2, 2), (3, 5)):
        vals = [weyl_main_term(1.0, t, n).value for t in ts]
        slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
        ok = ok and abs(slope - d) <= 0.02 * d
        parts.append(f"n={n}: fitted {slope:.4f} vs {d}")
    verdict(10, ok, "; ".join(parts), time.perf_counter() - t0, 120)


def test_criterion_11_ramanujan_detector():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    sup_violations = 0
    for n in range(1, 6):
        polys = ramanujan_polynomials(n)
        count = 100_000 // 5
        alphas = np.exp(rng.uniform(-3, 3, (count, n)) + 1j * rng.uniform(0, 2 * np.pi, (count, n)))
        best = np.max(np.abs(np.stack([evaluate_many(f, alphas) for f in polys])), axis=0)
        sup = np.max(np.abs(alphas), axis=1)
        sup_violations += int(np.sum(best < sup * (1 - 1e-12)))
    det_bad = 0
    for n in range(1, 6):
        alphas = np.array([random_unitary_det_one(n, rng) for _ in range(10_000 // 5)])
        sup = np.max(np.abs(alphas), axis=1)
        for k in (1, 2, 3):
            vals = evaluate_many(ramanujan_detector(n, k), alphas)
            scale = np.maximum(1.0, np.abs(vals))
            bad = (np.abs(vals.imag) > 1e-10 * scale) | (vals.real < 0) | (vals.real < sup ** (2 * k) * (1 - 1e-12))
            det_bad += int(bad.sum())
    ok = sup_violations == 0 and det_bad == 0
    verdict(11, ok, f"sup-norm violations {sup_violations} of 1e5, detector violations {det_bad}",
            time.perf_counter() - t0, 60)


def test_criterion_12_ensemble_densities():
    t0 = time.perf_counter()
    phi = BandLimitedTestFn(1.0)
    d = density_pairing("Sp", 1, [phi], method="direct").value
    f = density_pairing("Sp", 1, [phi], method="fourier").value
    two_d = density_pairing("U", 2, [phi, phi], method="direct").value
    two_f = density_pairing("U", 2, [phi, phi], method="fourier").value
    e1, e2 = abs(d - f), abs(two_d - two_f)
    verdict(12, e1 <= 1e-6 and e2 <= 1e-6,
            f"Sp 1-level |direct - Fourier| = {e1:.1e}; U 2-level |1 - sinc^2 integral - Fourier| = {e2:.1e}",
            time.perf_counter() - t0, 60)


def test_criterion_13_inequality_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(13)
    ell_bad = hull_bad = refused = 0
    worst = 0.0
    samples = 10_000
    for i in range(samples):
        n = 2 + i % 3
        g = bounded_group_matrix(n, rng, radius=3.0)
        x = cartan_X(g)
        nx = float(np.linalg.norm(x))
        if ell(g) > 2 * nx + 1e-12:
            ell_bad += 1
        try:
            disc = weyl_disc_real(g)
        except Refusal:
            refused += 1
        else:
            # ordered pairs give 2 + r + 1/r <= 4 e^{sqrt2 |X|} per unordered pair
            worst = max(worst, disc * math.exp(-n * (n - 1) * nx) / 2 ** (n * (n - 1)))
        h = iwasawa_H0(g)
        if not (in_weyl_hull(h, x, tol=1e-9) and majorizes(x, h)):
            hull_bad += 1
    ok = ell_bad == 0 and hull_bad == 0 and worst <= 1 and refused == 0
    detail = (f"{samples} samples: ell violations {ell_bad}, D bound ratio max {worst:.3e} (<= 1), "
              f"refused {refused}, Kostant violations {hull_bad}")
    verdict(13, ok, detail, time.perf_counter() - t0, 120)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
