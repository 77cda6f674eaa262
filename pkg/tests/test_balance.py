import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced3body.balance import (b_star, balance_determinant, balance_gradient, brute_force_roots, det_scale,
                                   d2B_da2, euler_points, family_point, inflection_on_a_segment,
                                   roots_on_a_segment, special_points, trace_families)
from balanced3body.equilibrium import lift, scaled_energy_momentum
from balanced3body.shape import MassTriple, Shape, classify, squared_area

mass = st.floats(0.05, 20.0)
side = st.floats(0.05, 20.0)


def oracle_B(m, s):
    M = np.array([[1.0, 1.0, 1.0],
                  [m.m1 * (s.b + s.c - s.a), m.m2 * (s.c + s.a - s.b), m.m3 * (s.a + s.b - s.c)],
                  [s.a ** -1.5, s.b ** -1.5, s.c ** -1.5]])
    return np.linalg.det(M)


def test_equilateral_always_balanced():
    for m in (MassTriple(1, 2, 3), MassTriple(0.1, 5, 7)):
        assert balance_determinant(m, Shape(2.0, 2.0, 2.0)) == pytest.approx(0.0, abs=1e-14)


def test_equal_masses_isosceles_segment_vanishes():
    m = MassTriple(1, 1, 1)
    for a in (0.1, 1.0, 4.0, 30.0):
        assert balance_determinant(m, Shape(a, 1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)


def test_determinant_value_321(m321):
    B = balance_determinant(m321, Shape(1, 2, 1))
    assert B == pytest.approx(oracle_B(m321, Shape(1, 2, 1)), rel=1e-12)
    assert B == pytest.approx(-0.4310, abs=5e-5)


@given(mass, mass, mass, side, side, side)
def test_determinant_matches_linalg(m1, m2, m3, a, b, c):
    m, s = MassTriple(m1, m2, m3), Shape(a, b, c)
    ref = oracle_B(m, s)
    scale = (m1 + m2 + m3) * (a + b + c) * (min(a, b, c) ** -1.5)
    assert abs(balance_determinant(m, s) - ref) <= 1e-12 * scale


@given(mass, mass, mass, side, side, side, st.floats(0.01, 100.0))
def test_homogeneity(m1, m2, m3, a, b, c, f):
    m, s = MassTriple(m1, m2, m3), Shape(a, b, c)
    scale = (m1 + m2 + m3) * (a + b + c) * (min(a, b, c) ** -1.5)
    lhs = balance_determinant(m, s.scaled(f))
    rhs = f ** -0.5 * balance_determinant(m, s)
    assert abs(lhs - rhs) <= 1e-12 * f ** -0.5 * scale


@given(mass, mass, mass, side, side, side)
def test_gradient_matches_finite_differences(m1, m2, m3, a, b, c):
    m = MassTriple(m1, m2, m3)
    g = balance_gradient(m, Shape(a, b, c))
    x = np.array([a, b, c])
    scale = (m1 + m2 + m3) * min(a, b, c) ** -2.5 * (a + b + c)
    for i in range(3):
        h = 1e-6 * x[i]
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        fd = (balance_determinant(m, Shape(*up)) - balance_determinant(m, Shape(*dn))) / (2 * h)
        assert abs(fd - g[i]) <= 1e-6 * scale


def test_d2B_examples():
    m = MassTriple(3, 1, 1)
    assert d2B_da2(m, Shape(2.0, 1.0, 1.0)) == 0.0
    m = MassTriple(3, 1, 2)
    for a in np.logspace(-3, 3, 50):
        assert d2B_da2(m, Shape(a, 2.0, 1.0)) > 0


@given(mass, mass, mass, side, side, side)
def test_d2B_matches_finite_differences(m1, m2, m3, a, b, c):
    m = MassTriple(m1, m2, m3)
    h = 1e-3 * a

    def B(x):
        return balance_determinant(m, Shape(x, b, c))

    fd = (-B(a + 2 * h) + 16 * B(a + h) - 30 * B(a) + 16 * B(a - h) - B(a - 2 * h)) / (12 * h * h)
    ex = d2B_da2(m, Shape(a, b, c))
    size = 0.75 * a ** -3.5 * (a * (m2 + m3) + 5 * abs(b - c) * (m2 + m3))
    # the stencil's own roundoff: 64/12 units of eps * |B| over h**2
    noise = 100 * np.finfo(float).eps * det_scale(m1, m2, m3, a, b, c) / h ** 2
    assert abs(fd - ex) <= 1e-6 * size + noise


def test_inflection_location():
    m = MassTriple(3, 1, 2)
    assert inflection_on_a_segment(m, 2.0, 1.0) is None
    a = inflection_on_a_segment(m, 1.0, 2.0)
    assert d2B_da2(m, Shape(a, 1.0, 2.0)) == pytest.approx(0.0, abs=1e-12)


def test_degenerate_segment_flagged():
    r = roots_on_a_segment(MassTriple(3, 1, 1), 1.5, 1.5)
    assert r.degenerate and r.roots == []


def test_equal_masses_segment_found_by_scan():
    m = MassTriple(1, 1, 1).normalized()
    r = roots_on_a_segment(m, 2.0, 1.0)
    assert len(r.roots) == brute_force_roots(m, 2.0, 1.0)
    for a in r.roots:
        assert balance_determinant(m, Shape(a, 2.0, 1.0)) == pytest.approx(0.0, abs=1e-13)
    assert any(abs(a - 2.0) < 1e-12 for a in r.roots)   # isosceles a = b


def test_only_equilateral_on_the_symmetric_segment(m321):
    r = roots_on_a_segment(m321, 1.0, 1.0)
    assert r.roots == pytest.approx([1.0], rel=1e-12)


def test_single_root_inside_condition_interval(m321):
    # between b_star and 1 only the long family lives on the a-segment
    b = 0.5 * (b_star(m321) + 1.0)
    assert len(roots_on_a_segment(m321, b, 1.0).roots) == 1


@given(mass, mass, mass, st.floats(0.05, 5.0), st.floats(0.05, 5.0))
@settings(max_examples=150, deadline=None)
def test_root_count_against_sign_scan(m1, m2, m3, b, c):
    m = MassTriple(m1, m2, m3)
    r = roots_on_a_segment(m, b, c)
    if r.degenerate:
        return
    assert len(r.roots) <= 2
    assert len(r.roots) - len(r.tangent) == brute_force_roots(m, b, c, n=20_000)


@given(mass, mass, mass, st.floats(0.05, 5.0), st.floats(0.05, 5.0), st.permutations([0, 1, 2]))
@settings(max_examples=60, deadline=None)
def test_roots_equivariant_under_relabelling(m1, m2, m3, b, c, perm):
    # new body i is old body perm[i]; keep body 1 fixed so that the a-segment maps to itself
    m = MassTriple(m1, m2, m3)
    if perm[0] != 0:
        return
    r = roots_on_a_segment(m, b, c)
    mp = m.permuted(perm)
    sp = Shape(1.0, b, c).permuted(perm)
    rp = roots_on_a_segment(mp, sp.b, sp.c)
    np.testing.assert_allclose(sorted(rp.roots), sorted(r.roots), rtol=1e-9)


def test_trace_321_structure(families321):
    assert sorted(families321) == ["long", "short1", "short2"]
    long = families321["long"]
    assert family_point(long.masses, long.kind, 0.0) == (1.0, 1.0)
    for f in families321.values():
        assert len(f.euler) == 1
        # a(b) strictly increasing
        order = np.argsort(f.b)
        assert np.all(np.diff(f.a[order]) > 0)


def test_monotone_by_gradient_signs(families321):
    # dB/da and dB/db of opposite sign along each family
    for f in families321.values():
        for a, b in zip(f.a[::7], f.b[::7]):
            s = Shape(a, b, 1.0)
            if classify(s) != "triangle" or abs(a - 1) < 1e-9 and abs(b - 1) < 1e-9:
                continue
            ga, gb, _ = balance_gradient(f.masses, s)
            assert ga * gb < 0


def test_traced_samples_are_roots(families321):
    from balanced3body.balance import balance_scale
    for f in families321.values():
        for a, b in zip(f.a, f.b):
            s = Shape(a, b, 1.0)
            assert abs(balance_determinant(f.masses, s)) <= 1e-10 * balance_scale(f.masses, s)


def test_long_family_defined_for_all_b(families321):
    long = families321["long"]
    assert long.b.min() < 1e-8 and long.b.max() > 1e8


def test_family_ends_euler_or_collision(families321):
    for f in families321.values():
        A2 = np.array([squared_area(Shape(a, b, 1.0)) for a, b in zip(f.a, f.b)])
        for idx in (0, -1):
            s = Shape(f.a[idx], f.b[idx], 1.0)
            tiny = min(s.a, s.b, s.c) / max(s.a, s.b, s.c) < 1e-4
            assert tiny or A2[idx] < 0 or abs(A2[idx]) < 1e-6


def test_equal_masses_give_isosceles_lines():
    fams = trace_families(MassTriple(1, 1, 1))
    assert all(f.analytic for f in fams)
    for f in fams:
        pairs = {"iso_ab": (f.a, f.b), "iso_ac": (f.a, f.c), "iso_bc": (f.b, f.c)}[f.kind]
        np.testing.assert_array_equal(*pairs)


def test_two_equal_masses_long_line():
    fams = {f.family_id: f for f in trace_families(MassTriple(1, 1, 0.5))}
    long = fams["long"]
    for s in long.original_shapes():
        assert s.a == pytest.approx(s.b, rel=1e-14)


def test_euler_points_are_balanced_and_collinear():
    for m in (MassTriple(3, 2, 1), MassTriple(1, 1, 1), MassTriple(0.2, 5.0, 1.3)):
        from balanced3body.balance import balance_scale
        for s in euler_points(m):
            assert abs(squared_area(s)) <= 1e-12 * (s.a + s.b + s.c) ** 2
            assert abs(balance_determinant(m, s)) <= 1e-12 * balance_scale(m, s)


def test_euler_points_quintic_oracle():
    # body 2 between bodies 1 and 3, x = d23 / d12
    for m in (MassTriple(1, 1, 1), MassTriple(3, 2, 1), MassTriple(5, 0.3, 2), MassTriple(0.01, 1, 7)):
        s = euler_points(m)[1]
        d23, _, d12 = s.distances
        m1, m2, m3 = m.m1, m.m2, m.m3
        roots = np.roots([m1 + m2, 3 * m1 + 2 * m2, 3 * m1 + m2,
                          -(m2 + 3 * m3), -(2 * m2 + 3 * m3), -(m2 + m3)])
        pos = [r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0]
        assert len(pos) == 1
        assert d23 / d12 == pytest.approx(pos[0], rel=1e-10)


def test_euler_points_equal_masses_related_by_permutation():
    pts = [tuple(sorted(s.as_array() / max(s.as_array()))) for s in euler_points(MassTriple(1, 1, 1))]
    for p in pts[1:]:
        assert p == pytest.approx(pts[0], rel=1e-12)


def test_euler_points_lift_to_k_zero(m321):
    for s in euler_points(m321):
        eq = lift(m321, s)
        assert eq.rank == 2
        assert scaled_energy_momentum(eq).k == 0.0


def test_special_points(m321, families321):
    from balanced3body.balance import balance_scale
    sp = special_points(m321)
    r = sp["round_inertia"]
    np.testing.assert_allclose(r.as_array(), np.array([9, 8, 5]) / 5, rtol=1e-14)
    for s in sp.values():
        assert abs(balance_determinant(m321, s)) <= 1e-12 * balance_scale(m321, s)
    eq = lift(m321, r)
    assert eq.theta1 == pytest.approx(eq.theta2, rel=1e-10)
    long = families321["long"]
    b, a = family_point(long.masses, long.kind, math.log(r.b))
    assert a == pytest.approx(r.a, rel=1e-12)


def test_round_inertia_equal_masses_is_lagrange():
    s = special_points(MassTriple(1, 1, 1))["round_inertia"]
    np.testing.assert_allclose(s.as_array(), [1, 1, 1], rtol=1e-15)
