import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced3body.exceptions import DomainError, NonphysicalShapeError
from balanced3body.shape import (MassTriple, Shape, classify, heron_sq, moment_of_inertia,
                                 planar_coordinates, potential, shape_from_positions,
                                 squared_area, symmetric_mass_functions)

mass = st.floats(0.01, 100.0)
pos = st.floats(-10.0, 10.0)


def triangles():
    return st.lists(st.tuples(pos, pos), min_size=3, max_size=3).filter(
        lambda p: abs((p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
                      - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0])) > 1e-2)


def test_symmetric_functions_equal_masses():
    m = symmetric_mass_functions(1 / 3, 1 / 3, 1 / 3)
    assert m.M == pytest.approx(1.0, rel=1e-15)
    assert m.M2 == pytest.approx(1 / 3, rel=1e-15)
    assert m.M3 == pytest.approx(1 / 27, rel=1e-15)


def test_symmetric_functions_321():
    m = MassTriple(3, 2, 1).normalized()
    assert m.M == pytest.approx(1.0, rel=1e-15)
    assert m.M2 == pytest.approx(11 / 36, rel=1e-15)
    assert m.M3 == pytest.approx(1 / 36, rel=1e-15)


def test_symmetric_functions_isosceles_masses():
    m = MassTriple(1, 1, 2)
    assert (m.M, m.M2, m.M3) == (4, 5, 2)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_masses_must_be_positive_and_finite(bad):
    with pytest.raises(DomainError):
        MassTriple(1.0, bad, 1.0)


def test_shape_rejects_zero_distance():
    with pytest.raises(DomainError):
        Shape(1.0, 0.0, 1.0)


def test_moment_of_inertia_examples():
    assert moment_of_inertia(MassTriple(2, 2, 2), Shape(1, 1, 1)) == pytest.approx(2.0)
    m = MassTriple(3, 2, 1).normalized()
    assert moment_of_inertia(m, Shape(1, 1, 1)) == pytest.approx(11 / 36, rel=1e-15)


@given(mass, mass, mass, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10),
       st.floats(0.01, 100))
def test_homogeneity(m1, m2, m3, a, b, c, s):
    m, sh = MassTriple(m1, m2, m3), Shape(a, b, c)
    assert moment_of_inertia(m, sh.scaled(s)) == pytest.approx(s * moment_of_inertia(m, sh), rel=1e-12)
    assert potential(m, sh.scaled(s)) == pytest.approx(s ** -0.5 * potential(m, sh), rel=1e-12)
    assert squared_area(sh.scaled(s)) == pytest.approx(s * s * squared_area(sh), rel=1e-9, abs=1e-12 * s * s * (a + b + c) ** 2)


def test_squared_area_examples():
    assert squared_area(Shape(1, 1, 1)) == pytest.approx(3 / 16, rel=1e-15)
    assert squared_area(Shape(4, 1, 1)) == 0.0
    # (2*9 + 2*9 + 2 - 81 - 1 - 1) / 16
    assert squared_area(Shape(9, 1, 1)) == pytest.approx(-45 / 16, rel=1e-15)
    assert classify(Shape(4, 1, 1)) == "collinear"
    assert classify(Shape(9, 1, 1)) == "nonphysical"
    assert classify(Shape(1, 1, 1)) == "triangle"


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_heron_matches_exact_rational(a, b, c):
    exact = Fraction(2 * a * c + 2 * a * b + 2 * b * c - a * a - b * b - c * c, 16)
    got = heron_sq(a, b, c)
    assert abs(Fraction(got) - exact) <= Fraction(1, 10 ** 12) * (a + b + c) ** 2


def test_heron_keeps_accuracy_for_a_tiny_side():
    # d12 = 1e-6 on an otherwise unit isosceles triangle
    eps = 1e-6
    a = b = 1.0
    c = eps * eps
    exact = c * (4 * a - c) / 16  # 16 A^2 = c (4a - c) when a = b
    assert heron_sq(a, b, c) == pytest.approx(exact, rel=1e-9)


def test_potential_examples():
    m = 2.0
    assert potential(MassTriple(m, m, m), Shape(1, 1, 1)) == pytest.approx(-3 * m * m)
    mu, rho, s, mm = 0.7, 0.6, 1.3, 1.1
    V = potential(MassTriple(mm, mm, mu * mm), Shape(s * s, s * s, rho * rho * s * s))
    assert V == pytest.approx(-mm * mm * (1 + 2 * rho * mu) / (rho * s), rel=1e-14)


@given(mass, mass, mass, triangles())
@settings(max_examples=200)
def test_planar_coordinates_invariants(m1, m2, m3, pts):
    m = MassTriple(m1, m2, m3)
    s = shape_from_positions(np.array(pts))
    p = planar_coordinates(m, s)
    w = m.as_array()
    scale = m.M * (s.a + s.b + s.c)
    L = math.sqrt(s.a + s.b + s.c)
    assert abs(w @ p.x) <= 1e-12 * m.M * L
    assert abs(w @ p.y) <= 1e-12 * m.M * L
    assert abs(w @ (p.x * p.y)) <= 1e-12 * scale
    assert p.theta1 >= p.theta2
    assert p.theta1 + p.theta2 == pytest.approx(moment_of_inertia(m, s), rel=1e-12)
    back = shape_from_positions(p.positions)
    np.testing.assert_allclose(back.distances, s.distances, rtol=1e-12)
    # A^2 = M Theta1 Theta2 / (4 M3)
    assert squared_area(s) == pytest.approx(m.M * p.theta1 * p.theta2 / (4 * m.M3), rel=1e-10)


def test_planar_round_inertia():
    m = MassTriple(1, 1, 1)
    p = planar_coordinates(m, Shape(1, 1, 1))
    I = moment_of_inertia(m, Shape(1, 1, 1))
    assert p.theta1 == pytest.approx(I / 2, rel=1e-14)
    assert p.theta2 == pytest.approx(I / 2, rel=1e-14)


def test_planar_isosceles_moments():
    mu, rho, s, mm = 0.5, 0.8, 1.7, 1.3
    m = MassTriple(mm, mm, mu * mm)
    p = planar_coordinates(m, Shape(s * s, s * s, rho * rho * s * s))
    expected = sorted([mm * s * s * mu * (4 - rho ** 2) / (2 * (2 + mu)), 0.5 * mm * s * s * rho ** 2])
    assert sorted([p.theta1, p.theta2]) == pytest.approx(expected, rel=1e-12)


def test_planar_collinear_has_flat_axis():
    p = planar_coordinates(MassTriple(1, 2, 3), Shape(4, 1, 1))
    assert p.theta2 == 0.0


def test_planar_rejects_nonphysical():
    with pytest.raises(NonphysicalShapeError):
        planar_coordinates(MassTriple(1, 1, 1), Shape(9, 1, 1))


@given(mass, mass, mass, triangles(), st.permutations([0, 1, 2]))
def test_relabelling_leaves_shape_functions_unchanged(m1, m2, m3, pts, perm):
    m = MassTriple(m1, m2, m3)
    s = shape_from_positions(np.array(pts))
    mp, sp = m.permuted(perm), s.permuted(perm)
    assert moment_of_inertia(mp, sp) == pytest.approx(moment_of_inertia(m, s), rel=1e-13)
    assert potential(mp, sp) == pytest.approx(potential(m, s), rel=1e-13)
    assert squared_area(sp) == pytest.approx(squared_area(s), rel=1e-12)
