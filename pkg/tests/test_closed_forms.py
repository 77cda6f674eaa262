import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced3body import (ComplexStructureParams, DomainError, IsoscelesParams, MassTriple,
                           Shape, angular_momentum, equilateral_embedding, equilateral_family,
                           isosceles_chi, isosceles_embedding, isosceles_hk, lagrange_junction,
                           lift, scaled_energy_momentum)
from balanced3body.closed_forms import (isosceles_curve, isosceles_frequencies,
                                        isosceles_moments)
from balanced3body.dynamics import forces
from balanced3body.state import hamiltonian

mass = st.floats(0.05, 20.0)


def test_equilateral_family_examples():
    e = equilateral_family(MassTriple(1, 1, 1))
    assert e.h_L == -4.5
    assert e.k_max == 0.25
    e = equilateral_family(MassTriple(3, 2, 1).normalized())
    assert e.h_L == pytest.approx(-0.0142639746, abs=5e-11)
    assert e.k_max == pytest.approx(27 / 121, rel=1e-14)
    assert e.k_range == (0.0, e.k_max)


@given(mass, mass, mass)
def test_equilateral_h_matches_lift(m1, m2, m3):
    m = MassTriple(m1, m2, m3)
    e = scaled_energy_momentum(lift(m, Shape(1.0, 1.0, 1.0)))
    assert e.h == pytest.approx(equilateral_family(m).h_L, rel=1e-12)


def test_complex_structure_squares_to_minus_identity(rng):
    for _ in range(20):
        u = ComplexStructureParams.from_vector(rng.standard_normal(3))
        J = u.J
        np.testing.assert_allclose(J @ J, -np.eye(4), atol=1e-14)
        np.testing.assert_allclose(J, -J.T)


def test_complex_structure_rejects_non_unit():
    with pytest.raises(DomainError):
        ComplexStructureParams(1.0, 0.1, 0.0)
    with pytest.raises(DomainError):
        ComplexStructureParams.from_vector([0.0, 0.0, 0.0])


@pytest.mark.parametrize("phi", np.linspace(0.0, math.pi / 2, 7))
def test_equilateral_embedding_is_relative_equilibrium(phi):
    m = MassTriple(3, 2, 1).normalized()
    u = ComplexStructureParams(math.cos(phi), 0.0, math.sin(phi))
    st_ = equilateral_embedding(m, 1.3, u)
    w2 = m.M / 1.3 ** 3
    np.testing.assert_allclose(forces(st_), -w2 * st_.q, atol=1e-13)
    fam = equilateral_family(m)
    inv = angular_momentum(st_).invariants
    s = inv.mu1 + inv.mu2
    assert hamiltonian(st_) * s * s == pytest.approx(fam.h_L, rel=1e-12)
    k = inv.mu1 * inv.mu2 / s ** 2
    assert 0.0 <= k <= fam.k_max * (1 + 1e-12)


def test_equilateral_k_max_reached():
    m = MassTriple(3, 2, 1).normalized()
    ks = []
    for phi in np.linspace(0.0, math.pi / 2, 41):
        inv = angular_momentum(equilateral_embedding(
            m, 1.0, ComplexStructureParams(math.cos(phi), 0.0, math.sin(phi)))).invariants
        ks.append(inv.mu1 * inv.mu2 / (inv.mu1 + inv.mu2) ** 2)
    assert max(ks) == pytest.approx(equilateral_family(m).k_max, rel=1e-12)
    assert min(ks) == pytest.approx(0.0, abs=1e-15)


def test_isosceles_worked_examples():
    assert isosceles_hk(IsoscelesParams(1.0, 1.0)).k == pytest.approx(0.25, rel=1e-15)
    assert isosceles_hk(IsoscelesParams(1.0, 1.0)).h == pytest.approx(-4.5, rel=1e-15)
    p = isosceles_hk(IsoscelesParams(1.0, 0.5))
    assert p.k == pytest.approx(0.234375, rel=1e-14)
    assert p.h == pytest.approx(-1.6, rel=1e-14)


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_isosceles_against_generic_lift(mu):
    for rho in np.linspace(0.05, 1.95, 40):
        p = IsoscelesParams(float(rho), mu)
        e = scaled_energy_momentum(lift(p.masses, p.shape))
        c = isosceles_hk(p)
        assert c.h == pytest.approx(e.h, rel=1e-10)
        assert c.k == pytest.approx(e.k, rel=1e-10)


def test_isosceles_embedding_state(rng):
    for rho, mu in ((0.8, 1.0), (0.3, 2.5), (1.7, 0.4)):
        p = IsoscelesParams(rho, mu, m=1.3, s=0.7)
        eq, st_ = isosceles_embedding(p)
        acc = forces(st_)
        W = eq.omega_matrix()
        xi = np.column_stack([np.zeros(3), eq.planar.x, np.zeros(3), eq.planar.y])
        np.testing.assert_allclose(st_.q, xi)
        # Omega acts on (e1, e2) and (e3, e4): Omega**2 = -diag(w1^2, w1^2, w2^2, w2^2)
        lhs = st_.q @ (W @ W).T
        np.testing.assert_allclose(lhs, acc, atol=1e-12 * np.max(np.abs(acc)))
        th1, th2 = isosceles_moments(p)
        assert eq.theta1 == pytest.approx(th1, rel=1e-12)
        assert eq.theta2 == pytest.approx(th2, rel=1e-12)
        w1s, w2s = isosceles_frequencies(p)
        assert eq.omega1 ** 2 == pytest.approx(w1s, rel=1e-14)
        assert eq.omega2 ** 2 == pytest.approx(w2s, rel=1e-14)
        assert isosceles_chi(p) == pytest.approx(eq.mu1 / eq.mu2, rel=1e-12)


@given(st.floats(1e-3, 100.0), st.floats(0.01, 1.99))
def test_isosceles_chi_matches_moments(mu, rho):
    p = IsoscelesParams(rho, mu)
    th1, th2 = isosceles_moments(p)
    w1, w2 = (math.sqrt(x) for x in isosceles_frequencies(p))
    assert isosceles_chi(p) == pytest.approx(th1 * w1 / (th2 * w2), rel=1e-12)


def test_isosceles_chi_small_rho_continuous():
    a = isosceles_chi(IsoscelesParams(1e-6 * (1 + 1e-12), 1.0))
    b = isosceles_chi(IsoscelesParams(1e-6 * (1 - 1e-12), 1.0))
    assert a == pytest.approx(b, rel=1e-9)
    assert math.isfinite(isosceles_chi(IsoscelesParams(1e-300, 1.0)))


@pytest.mark.parametrize("bad", [0.0, 2.0, -0.1, float("nan")])
def test_isosceles_domain(bad):
    with pytest.raises(DomainError):
        IsoscelesParams(bad, 1.0)


def test_lagrange_junction():
    for mu in np.linspace(0.05, 10.0, 50):
        j = lagrange_junction(float(mu), 1.1)
        c = isosceles_hk(IsoscelesParams(1.0, float(mu), 1.1))
        assert c.k == pytest.approx(j.k, rel=1e-12)
        assert c.h == pytest.approx(j.h, rel=1e-12)
    with pytest.raises(DomainError):
        lagrange_junction(0.0)


def test_isosceles_curve_shapes():
    cur = isosceles_curve(1.0, np.linspace(0.1, 1.9, 11))
    assert set(cur) == {"rho", "chi", "h", "k"}
    assert np.all(cur["k"] <= 0.25 + 1e-15) and np.all(cur["h"] < 0)
    # chi = 1 only at rho = 1 for equal masses
    assert cur["chi"][5] == pytest.approx(1.0, rel=1e-14)
