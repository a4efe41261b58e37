from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from satotate.errors import BudgetExceeded
from satotate.hecke import (
    HeckeElement,
    SatakeParam,
    calibrate_oracle,
    central_sum,
    convolve,
    degree,
    detector_value,
    pairing_2rho,
    ramanujan_detector,
    ramanujan_polynomials,
    random_unitary_det_one,
    satake,
    satake_inverse,
    satake_oracle,
)
from satotate.scalars import QSqrt, u_power
from satotate.symfunc import SymLaurentPoly, evaluate, from_schur, lr_multiply, schur_expand


def tau(xi, p):
    return HeckeElement.basis(xi, p)


def dominant(n, top):
    return [w for w in product(range(top + 1), repeat=n) if list(w) == sorted(w, reverse=True)]


def test_satake_examples():
    for p in (2, 3):
        u = QSqrt.u(p)
        assert satake(tau((0, 0), p)) == SymLaurentPoly.one(2)
        assert satake(tau((1, 1), p)) == SymLaurentPoly(2, {(1, 1): 1})
        assert satake(tau((1, 0), p)) == schur_expand((1, 0), 2).scale(u)


def test_satake_top_term_and_positivity():
    for p in (2, 3):
        for n in (2, 3):
            for xi in dominant(n, 2):
                coeffs = satake(tau(xi, p)).terms
                top = max(coeffs)
                assert top == xi
                assert coeffs[top] == u_power(pairing_2rho(xi), p)
                assert all(c.sign() > 0 for c in coeffs.values())


def test_satake_inverse_roundtrip():
    for p in (2, 3):
        h = tau((2, 1, 0), p) + tau((1, 1, 1), p).scale(Fraction(2, 3))
        assert satake_inverse(satake(h), p) == h


def test_oracle_examples():
    assert satake_oracle((1, 1), (1, 1), 2) == 1
    assert satake_oracle((1, 0), (1, 0), 2) == QSqrt.u(2)
    assert satake_oracle((1, 0), (0, 1), 2) == QSqrt.u(2)
    assert calibrate_oracle(3) == QSqrt.u(3)


def test_oracle_refuses_over_budget():
    with pytest.raises(BudgetExceeded):
        satake_oracle((3, 1, 0), (2, 1, 1), 5, budget=1000)


def test_degree_examples():
    for p in (2, 3, 5):
        assert degree((1, 0), p) == 1 + p
        assert degree((2, 1, 0), p) == (p * p + p + 1) * (p + 1) * p
        assert degree((4, 4, 4), p) == 1


def test_degree_routes_agree():
    for p in (2, 3):
        for n in (2, 3):
            for xi in dominant(n, 2):
                d = degree(xi, p, method="closed")
                assert degree(xi, p, method="enumerate") == d
                assert degree(xi, p, method="satake") == d


def test_degree_beyond_closed_forms():
    # Grassmannian count of lines in F_p^4
    assert degree((1, 0, 0, 0), 2) == 15
    with pytest.raises(ValueError):
        degree((1, 0, 0, 0), 2, method="closed")


def test_convolve_examples():
    for p in (2, 3):
        one = HeckeElement.unit(2, p)
        t10 = tau((1, 0), p)
        assert one * t10 == t10
        assert convolve(t10, t10, method="both") == tau((2, 0), p) + tau((1, 1), p).scale(p + 1)
        assert convolve(t10, tau((1, 1), p), method="both") == tau((2, 1), p)


def test_convolve_is_satake_homomorphism():
    for p in (2, 3):
        for n in (2, 3):
            for a in dominant(n, 2):
                for b in dominant(n, 2):
                    if max(a) + max(b) > 3:
                        continue
                    c = convolve(tau(a, p), tau(b, p))
                    lhs = satake(c)
                    rhs = from_schur(lr_multiply(satake(tau(a, p)), satake(tau(b, p))), n)
                    assert lhs == rhs


def test_convolve_commutative_associative():
    p = 2
    a, b, c = tau((1, 0, 0), p), tau((1, 1, 0), p), tau((2, 0, 0), p) + tau((1, 0, 0), p)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


def test_central_sum_examples():
    for p in (2, 3):
        assert central_sum(tau((1, 1), p)) == 1
        assert central_sum(tau((1, 0), p)) == 0
        t = tau((1, 0), p)
        assert central_sum((t * t.dual()).shift_to_integral()) == p + 1
        with pytest.raises(ValueError):
            central_sum(tau((0, -1), p))


def test_ramanujan_polynomial_examples():
    phis = ramanujan_polynomials(2)
    assert phis[1] == SymLaurentPoly(2, {(1, 0): 2})
    assert evaluate(phis[1], (2, 0.5)).real == pytest.approx(5)
    assert evaluate(phis[0], (0.3, 0.1)).real == pytest.approx(2)


def test_detector_examples():
    for k in (1, 2):
        val = detector_value(3, k, (1, 1, 1))
        phis = ramanujan_polynomials(3)
        assert val.real == pytest.approx(sum(abs(evaluate(f, (1, 1, 1))) ** (2 * k) for f in phis))
    for theta in np.linspace(0, np.pi, 7):
        v = detector_value(2, 1, (np.exp(1j * theta), np.exp(-1j * theta)))
        assert abs(v.imag) <= 1e-10 * max(1, abs(v)) and v.real >= 0
    # a non-tempered parameter pushes the detector past its unitary maximum
    a = 2.0
    assert detector_value(2, 1, (a, 1 / a)).real > detector_value(2, 1, (1, 1)).real


def test_satake_param_flags():
    rng = np.random.default_rng(3)
    for n in range(1, 6):
        alpha = random_unitary_det_one(n, rng)
        sp = SatakeParam(alpha)
        assert sp.unitary and sp.det_one
    assert not SatakeParam((2.0, 0.25)).unitary


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3))
def test_detector_bound_property(n, k):
    rng = np.random.default_rng(n * 10 + k)
    det = ramanujan_detector(n, k)
    for _ in range(20):
        alpha = random_unitary_det_one(n, rng)
        v = evaluate(det, alpha)
        scale = max(1.0, abs(v))
        assert abs(v.imag) <= 1e-10 * scale
        assert v.real >= -1e-10 * scale
        assert v.real >= max(abs(a) for a in alpha) ** (2 * k) * (1 - 1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=5, max_size=5))
def test_some_polynomial_dominates_sup_norm(n, coords):
    alpha = [complex(a, b) for a, b in coords[:n]]
    if min(abs(a) for a in alpha) < 1e-6:
        return
    best = max(abs(evaluate(f, alpha)) for f in ramanujan_polynomials(n))
    assert best >= max(abs(a) for a in alpha) * (1 - 1e-12)


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        tau((1, 0), 2) * tau((1, 0), 3)
