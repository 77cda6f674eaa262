"""Phase states of three bodies in R^4 and the quantities read off them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import CollisionError
from .shape import MassTriple

DIM = 4


@dataclass
class PhaseState:
    """Positions ``q`` and momenta ``p`` (both shape (3, 4)) of three bodies."""

    masses: MassTriple
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).reshape(3, DIM)
        self.p = np.asarray(self.p, dtype=float).reshape(3, DIM)

    @property
    def velocities(self) -> np.ndarray:
        return self.p / self.masses.as_array()[:, None]

    def total_momentum(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def centre_of_mass(self) -> np.ndarray:
        w = self.masses.as_array()
        return w @ self.q / w.sum()

    def flat(self) -> np.ndarray:
        return np.concatenate([self.q.ravel(), self.p.ravel()])

    @classmethod
    def from_flat(cls, masses: MassTriple, y) -> "PhaseState":
        y = np.asarray(y, dtype=float)
        return cls(masses, y[:3 * DIM].copy(), y[3 * DIM:].copy())

    def copy(self) -> "PhaseState":
        return PhaseState(self.masses, self.q.copy(), self.p.copy())


@dataclass
class JacobiDecomposition:
    """Jacobi vectors of a state, with body ``pair[0], pair[1]`` as the inner binary."""

    q: np.ndarray
    Q: np.ndarray
    p: np.ndarray
    P: np.ndarray
    mu_red: float
    nu_red: float
    pair: tuple

    def kinetic_energy(self) -> float:
        return 0.5 * (self.p @ self.p / self.mu_red + self.P @ self.P / self.nu_red)

    def angular_momentum(self) -> np.ndarray:
        return (np.outer(self.q, self.p) - np.outer(self.p, self.q)
                + np.outer(self.Q, self.P) - np.outer(self.P, self.Q))


def jacobi(state: PhaseState, pair=(0, 1)) -> JacobiDecomposition:
    i, j = pair
    k = 3 - i - j
    w = state.masses.as_array()
    mi, mj, mk = w[i], w[j], w[k]
    v = state.velocities
    q = state.q[j] - state.q[i]
    qd = v[j] - v[i]
    inner = (mi * state.q[i] + mj * state.q[j]) / (mi + mj)
    inner_d = (mi * v[i] + mj * v[j]) / (mi + mj)
    Q = state.q[k] - inner
    Qd = v[k] - inner_d
    mu_red = mi * mj / (mi + mj)
    nu_red = mk * (mi + mj) / (mi + mj + mk)
    return JacobiDecomposition(q, Q, mu_red * qd, nu_red * Qd, mu_red, nu_red, (i, j))


def kinetic_energy(state: PhaseState) -> float:
    w = state.masses.as_array()
    return 0.5 * float(np.sum(state.p ** 2 / w[:, None]))


def potential_energy(state: PhaseState) -> float:
    w = state.masses.as_array()
    V = 0.0
    for i, j in ((0, 1), (1, 2), (0, 2)):
        d = np.linalg.norm(state.q[i] - state.q[j])
        if d == 0.0:
            raise CollisionError(f"bodies {i + 1} and {j + 1} coincide")
        V -= w[i] * w[j] / d
    return V


def hamiltonian(state: PhaseState) -> float:
    return kinetic_energy(state) + potential_energy(state)


def angular_momentum_bodies(state: PhaseState) -> np.ndarray:
    """L = sum_i q_i p_i^T - p_i q_i^T."""
    return state.q.T @ state.p - state.p.T @ state.q


def wedge_norm_sq(u, v) -> float:
    """|u ^ v|**2 = |u|**2 |v|**2 - <u, v>**2."""
    return float(u @ u * (v @ v) - (u @ v) ** 2)
