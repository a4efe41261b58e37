import math

import mpmath
import numpy as np
import pytest

from scipy.integrate import quad

from satotate.archgeo import bounded_group_matrix, haar_orthogonal, iwasawa_H0, random_group_matrix
from satotate.errors import ConvergenceError, Refusal
from satotate.spherical import (
    QuadratureSpec,
    c_function,
    decay_audit,
    iwasawa_H0_batch,
    plancherel_density,
    rho,
    spherical_phi,
    weyl_main_term,
    weyl_orbit,
)


def test_rho():
    assert rho(3) == pytest.approx([1, 0, -1])
    assert rho(2) == pytest.approx([0.5, -0.5])


def test_batch_iwasawa_matches_scalar():
    rng = np.random.default_rng(0)
    gs = np.stack([random_group_matrix(3, rng) for _ in range(5)])
    batch = iwasawa_H0_batch(gs)
    for g, h in zip(gs, batch):
        assert h == pytest.approx(iwasawa_H0(g), abs=1e-10)


def test_phi_at_identity_and_on_K():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        lam = np.array([1.3, -1.3]) if n == 2 else np.array([0.7, 0.2, -0.9])
        assert spherical_phi(lam, np.eye(n)).value == pytest.approx(1, abs=1e-12)
        k = haar_orthogonal(n, rng)
        assert spherical_phi(lam, k).value == pytest.approx(1, abs=1e-9)


def test_phi_zero_frozen_value():
    g = np.diag([math.e, 1 / math.e])
    v = spherical_phi([0.0, 0.0], g).value
    assert v.real == pytest.approx(0.795651695605974, abs=1e-12)
    assert abs(v.imag) < 1e-14


@pytest.mark.parametrize("t,s", [(0.3, 0.0), (1.0, 0.7), (0.5, 3.0), (2.0, 16.0), (1.5, 40.0)])
def test_phi_n2_is_conical_legendre_function(t, s):
    # on SL(2, R): phi_(s, -s)(diag(e^t, e^-t)) = P_{-1/2 + i s}(cosh 2t)
    want = complex(mpmath.legenp(-0.5 + 1j * s, 0, math.cosh(2 * t)))
    got = spherical_phi([s, -s], np.diag([math.exp(t), math.exp(-t)])).value
    assert abs(got - want) <= 1e-9


def test_phi_bi_invariance():
    rng = np.random.default_rng(2)
    g = bounded_group_matrix(3, rng, 1.0)
    lam = [1.1, 0.3, -1.4]
    k1, k2 = haar_orthogonal(3, rng), haar_orthogonal(3, rng)
    a = spherical_phi(lam, g).value
    b = spherical_phi(lam, k1 @ g @ k2).value
    assert b == pytest.approx(a, abs=1e-8)


def test_phi_weyl_invariance():
    rng = np.random.default_rng(3)
    g = bounded_group_matrix(3, rng, 1.0)
    lam = (1.1, 0.3, -1.4)
    ref = spherical_phi(lam, g).value
    for w in weyl_orbit(lam):
        assert abs(spherical_phi(w, g).value - ref) <= 1e-8


def test_phi_validation_and_convergence():
    with pytest.raises(ValueError):
        spherical_phi([1.0, 0.0], np.eye(2))
    with pytest.raises(ValueError):
        spherical_phi([1.0, -1.0], np.eye(3))
    with pytest.raises(ConvergenceError):
        spherical_phi([40.0, -40.0], np.diag([5.0, 0.2]), QuadratureSpec(nodes=4, max_nodes=8, tol=1e-14))


def test_monte_carlo_route():
    g = np.diag([math.e, 1 / math.e])
    ref = spherical_phi([0.5, -0.5], g).value
    mc = spherical_phi([0.5, -0.5], g, QuadratureSpec(method="monte-carlo", nodes=20000, seed=5))
    assert abs(mc.value - ref) < 5 * mc.error + 1e-12


def test_monte_carlo_crosschecks_reduced_rule_n3():
    # the sampled route feeds the raw matrix through batched QR
    g = bounded_group_matrix(3, np.random.default_rng(8), 1.0)
    lam = [0.9, -0.2, -0.7]
    ref = spherical_phi(lam, g).value
    mc = spherical_phi(lam, g, QuadratureSpec(method="monte-carlo", nodes=40000, seed=2))
    assert abs(mc.value - ref) < 5 * mc.error


def test_c_function():
    # n = 2, a = 1: sqrt(pi) Gamma(1/2) / Gamma(1) = pi
    assert c_function([0.5, -0.5]) == pytest.approx(math.pi)
    with pytest.raises(Refusal):
        c_function([0.0, 0.0])
    s = np.array([0.8, -0.8])
    c = c_function(1j * s)
    assert 1 / abs(c) ** 2 == pytest.approx(plancherel_density(s), rel=1e-10)


def test_plancherel_density_vanishes_on_walls():
    assert plancherel_density([0.0, 0.0]) == 0
    assert plancherel_density([1.0, 1.0, -2.0]) == 0
    stack = plancherel_density(np.array([[1.0, -1.0], [2.0, -2.0]]))
    assert stack.shape == (2,) and stack[1] > stack[0] > 0


@pytest.mark.parametrize("n,d", [(2, 2), (3, 5)])
def test_main_term_exponent(n, d):
    mt = weyl_main_term(1.0, 50, n)
    assert mt.d == d
    assert abs(mt.exponent - d) / d < 0.02
    with pytest.raises(ValueError):
        weyl_main_term(1.0, 0.5, n)


def test_main_term_n2_closed_form():
    # the unit wall-normal direction has root value x = r sqrt2; both rays contribute
    R = 80.0
    mt = weyl_main_term(1.0, R, 2)
    exact, _ = quad(lambda r: 2 * (r * math.sqrt(2) / 2) * math.tanh(math.pi * r * math.sqrt(2) / 2) / math.pi, 0, R, limit=200)
    assert mt.value == pytest.approx(exact, rel=1e-8)


def test_decay_audit_small():
    lams = [np.array([a, -a]) / math.sqrt(2) for a in (1, 2, 4, 8)]
    gs = [np.diag([math.e, 1 / math.e])]
    rep = decay_audit(lams, gs)
    assert rep.caps == [1, 2, 4, 8]
    assert rep.sup_by_cap == sorted(rep.sup_by_cap)
    assert not rep.excluded and not rep.imag_violations
