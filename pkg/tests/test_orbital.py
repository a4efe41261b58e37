from fractions import Fraction

import pytest

from satotate.orbital import (
    ConjClassData,
    GL2OrbitalInput,
    classify_root_datum,
    gl2_invariants,
    gl2_orbital,
    gl2_orbital_oracle,
    is_padic_square,
    oracle_normalization,
    weyl_disc,
    weyl_disc_valuation,
    wild_set,
)
from satotate.scalars import QSqrt


def test_conj_class_validation():
    with pytest.raises(ValueError):
        ConjClassData(2, (1, 0, 0))
    with pytest.raises(ValueError):
        ConjClassData(2, (2, 0, 1))
    with pytest.raises(ValueError):
        ConjClassData(2, (1, 0, 2), unimodular=True)
    with pytest.raises(ValueError):
        ConjClassData(3, (1, 0, 0, -2), factorization=((1, 1), (1, 1)))


def test_weyl_disc_examples():
    # diag(2, 1): (1 - 2)(1 - 1/2)
    assert weyl_disc(ConjClassData(2, (1, -3, 2))) == Fraction(-1, 2)
    assert weyl_disc(ConjClassData.identity(3)) == 1
    # x^3 - 2: eigenvalue ratios are primitive cube roots of unity, (1-w)(1-w^2) = 3 per pair
    assert weyl_disc(ConjClassData(3, (1, 0, 0, -2))) == 27
    assert weyl_disc_valuation(ConjClassData(3, (1, 0, 0, -2)), 3) == 3


def test_wild_set():
    assert wild_set(ConjClassData(3, (1, 0, 0, -2))) == frozenset({2, 3, 5})
    assert wild_set(ConjClassData(2, (1, -3, 2))) == frozenset({2})


def test_root_datum():
    cc = ConjClassData(3, (1, -1, -1, 1), factorization=((1, 1), (1, 2)))
    assert classify_root_datum(cc) == ((1, 1), (1, 2))
    with pytest.raises(ValueError):
        classify_root_datum(ConjClassData(3, (1, -1, -1, 1)))
    with pytest.raises(ValueError):
        classify_root_datum(ConjClassData(3, (1, -1, -1, 1), factorization=((1, 3),)))


def test_padic_squares():
    assert is_padic_square(17, 2) and not is_padic_square(5, 2)
    assert is_padic_square(4, 3) and not is_padic_square(2, 3)
    assert not is_padic_square(3, 3)


def test_invariants():
    # discriminant 1, determinant 2: D = disc / det has valuation -1
    assert gl2_invariants((1, -3, 2), 2) == ("split", -1, 1)
    assert gl2_invariants((1, 0, -2), 3)[0] == "elliptic-unramified"
    assert gl2_invariants((1, 0, -3), 3)[0] == "elliptic-ramified"
    with pytest.raises(ValueError):
        gl2_invariants((1, 2, 1), 3)


def test_table_input_validation():
    with pytest.raises(ValueError):
        GL2OrbitalInput(3, "elliptic-unramified", 0, 1)
    with pytest.raises(ValueError):
        GL2OrbitalInput(3, "ramified", 0, 2)
    with pytest.raises(ValueError):
        GL2OrbitalInput(2, "ramified", 0, 1)
    with pytest.raises(ValueError):
        GL2OrbitalInput(3, "split", -1, 0)
    assert GL2OrbitalInput(3, "ramified", 0, 1).half_integral


def test_table_values():
    p = 3
    assert gl2_orbital(GL2OrbitalInput(p, "split", 0, 0)) == 1
    assert gl2_orbital(GL2OrbitalInput(p, "split", 2, 0)) == p * p - p
    assert gl2_orbital(GL2OrbitalInput(p, "unramified", 0, 2)) == 1 + (1 - Fraction(1, p)) * Fraction(2, p - 1)
    assert gl2_orbital(GL2OrbitalInput(p, "ramified", 1, 1)) == 2 * p


def test_oracle_normalization_is_one_at_small_primes():
    for p in (2, 3, 5):
        assert oracle_normalization(p) == 1


def test_oracle_anchor_and_satake_crosscheck():
    # J(diag(1, p), tau_(1, 0)) equals the Satake coefficient of the
    # monomial x_1 in satake(tau_(1, 0)), namely sqrt(p)
    for p in (2, 3):
        r = gl2_orbital_oracle((1, -(1 + p), p), (1, 0), p)
        assert r.case == "split"
        assert r.value == QSqrt.u(p)
        assert gl2_orbital_oracle((1, -(2 + p), 1 + p), (0, 0), p).value == 1


def test_oracle_det_mismatch_is_zero():
    r = gl2_orbital_oracle((1, -3, 2), (0, 0), 2)
    assert r.value == 0 and r.count == 0


def test_oracle_unramified_m0_matches_table():
    # x^2 - x + 1 + stuff: pick a unit-det elliptic unramified class at p = 3
    for cp in [(1, 0, -2), (1, 1, 1 + 3 * 3)]:
        case, dval, detval = gl2_invariants(cp, 3)
        if case != "elliptic-unramified" or detval:
            continue
        got = gl2_orbital_oracle(cp, (0, 0), 3).value
        assert got == gl2_orbital(GL2OrbitalInput(3, case, 0, dval))
