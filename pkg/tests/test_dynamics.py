import math

import numpy as np
import pytest

from balanced3body import (CollisionError, DomainError, IsoscelesParams, MassTriple, PhaseState,
                           Shape, collision_bound_check, embed_R4, euler_points, integrate,
                           isosceles_embedding, lift, stability_probe, syzygy_monitor)
from balanced3body.balance import family_point
from balanced3body.dynamics import (correct_state, jacobi_hamiltonian, perturbed_state,
                                    rotating_positions, rotation_period, worker_count)
from balanced3body.state import angular_momentum_bodies, hamiltonian


@pytest.fixture(scope="module")
def long_eq(families321):
    f = families321["long"]
    b, a = family_point(f.masses, f.kind, 1.866)
    return lift(f.masses, Shape(a, b, 1.0))


def test_relative_equilibrium_tracks_rotation(long_eq):
    P = rotation_period(long_eq)
    rep = integrate(embed_R4(long_eq), 3 * P, tol=1e-12, period=P)
    assert not rep.aborted
    err = np.max(np.linalg.norm(rep.q - rotating_positions(long_eq, rep.t), axis=2))
    assert err < 1e-8 * np.max(np.abs(rep.q[0]))
    assert rep.within_budget()


def test_jacobi_and_body_hamiltonians_agree(long_eq, rng):
    st_ = perturbed_state(embed_R4(long_eq), 1e-3, rng)
    assert jacobi_hamiltonian(st_) == pytest.approx(hamiltonian(st_), rel=1e-13)


def test_perturbation_preserves_momenta(long_eq, rng):
    base = embed_R4(long_eq)
    st_ = perturbed_state(base, 1e-4, rng)
    L0 = angular_momentum_bodies(base)
    L1 = angular_momentum_bodies(st_)
    assert np.max(np.abs(L1 - L0)) < 1e-12 * np.max(np.abs(L0))
    assert np.max(np.abs(st_.total_momentum())) < 1e-14
    assert np.max(np.abs(st_.centre_of_mass())) < 1e-14
    assert 0 < np.max(np.abs(st_.q - base.q)) < 1e-3


def test_correct_state_leaves_admissible_state_alone(long_eq):
    base = embed_R4(long_eq)
    q, p = correct_state(base.masses, base.q, base.p, angular_momentum_bodies(base))
    np.testing.assert_allclose(q, base.q, atol=1e-15)
    np.testing.assert_allclose(p, base.p, atol=1e-15)


def test_correct_state_reaches_new_momentum(long_eq, rng):
    base = embed_R4(long_eq)
    L = angular_momentum_bodies(base)
    A = 1e-3 * rng.standard_normal((4, 4))
    target = L + (A - A.T)
    q, p = correct_state(base.masses, base.q, base.p, target)
    got = angular_momentum_bodies(PhaseState(base.masses, q, p))
    assert np.max(np.abs(got - target)) < 1e-12 * np.max(np.abs(target))


def test_syzygy_and_collision_bound_on_perturbed_run(long_eq, rng):
    P = rotation_period(long_eq)
    st_ = perturbed_state(embed_R4(long_eq), 1e-4, rng)
    rep = integrate(st_, 5 * P, tol=1e-10, period=P)
    assert syzygy_monitor(rep).min_area2 > 0
    cb = collision_bound_check(rep)
    assert not cb.vacuous
    assert cb.d_L > 0
    assert cb.worst >= -10 * rep.tol * math.sqrt(float(0.5 * np.sum(rep.L0 ** 2)))


def test_rank_two_bound_is_vacuous():
    m = MassTriple(3, 2, 1).normalized()
    eq = lift(m, euler_points(m)[0])
    P = rotation_period(eq)
    rep = integrate(embed_R4(eq), P, tol=1e-10, period=P)
    assert collision_bound_check(rep).vacuous
    assert syzygy_monitor(rep).min_area2 < 1e-20


def test_head_on_collision_aborts():
    m = MassTriple(1, 1, 1)
    q = np.array([[-1.0, 0, 0, 0], [1.0, 0, 0, 0], [0, 5.0, 0, 0]])
    q -= q.mean(axis=0)
    rep = integrate(PhaseState(m, q, np.zeros((3, 4))), 20.0, tol=1e-10, period=1.0)
    assert rep.aborted
    assert rep.t[-1] < 20.0


def test_initial_collision_rejected():
    m = MassTriple(1, 1, 1)
    q = np.array([[0.0, 0, 0, 0], [0.0, 0, 0, 0], [1.0, 0, 0, 0]])
    with pytest.raises(CollisionError):
        integrate(PhaseState(m, q, np.zeros((3, 4))), 1.0)


@pytest.mark.parametrize("tol", [1e-16, 1e-3])
def test_tolerance_range(long_eq, tol):
    with pytest.raises(DomainError):
        integrate(embed_R4(long_eq), 1.0, tol=tol)


def test_report_summary_keys(long_eq):
    rep = integrate(embed_R4(long_eq), 1.0, tol=1e-10)
    s = rep.summary()
    for key in ("drift_H", "drift_L", "min_area2", "aborted", "samples"):
        assert key in s
    assert rep.state(0).q.shape == (3, 4)


def test_stability_probe_small_run_is_deterministic():
    eq, _ = isosceles_embedding(IsoscelesParams(0.8, 1.0))
    r1 = stability_probe(eq, eps=1e-4, periods=3, trials=2, seed=7)
    r2 = stability_probe(eq, eps=1e-4, periods=3, trials=2, seed=7)
    assert r1.bounded and r1.failed == 0
    assert r1.max_shape_deviation < 100 * 1e-4
    assert [t.shape_deviation for t in r1.trials] == [t.shape_deviation for t in r2.trials]


def test_stability_probe_rejects_large_eps():
    eq, _ = isosceles_embedding(IsoscelesParams(0.8, 1.0))
    with pytest.raises(DomainError):
        stability_probe(eq, eps=0.5)


def test_worker_count_respects_cap(monkeypatch):
    monkeypatch.setenv("BALANCED3BODY_THREADS", "2")
    assert worker_count(8) == 2
    monkeypatch.delenv("BALANCED3BODY_THREADS")
    assert worker_count(3) == 3
    assert worker_count(0) == 1
