"""Relative equilibria built on balanced shapes, and their energy-momentum image.

A balanced shape is placed in its principal axes, each axis rotating
uniformly in its own plane of R^2 + R^2 with angular velocity ``omega_i``;
``mu_i = theta_i * omega_i`` are the eigenvalues of the angular momentum.
The scale-free pair is ``h = H (mu1 + mu2)**2`` and
``k = mu1 mu2 / (mu1 + mu2)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .balance import balance_scale, det_raw
from .exceptions import DegenerateAxisError, DomainError, NotBalancedError, ZeroMomentumError
from .shape import COLLINEAR_EPS, MassTriple, PlanarConfig, Shape, planar_coordinates, potential
from .state import PhaseState, jacobi

BALANCE_TOL = 1e-8
NEG_OMEGA_TOL = 1e-12
RANK_TOL = 1e-12
# inertia anisotropy below which the acceleration operator may fix the axes
ROUND_SWITCH = 1e-3


def acceleration_operator(m: MassTriple, s: Shape) -> np.ndarray:
    """3x3 matrix A with (A v)_j = sum_k m_k (v_k - v_j) / d_jk**3 at fixed distances."""
    w = m.as_array()
    inv3 = np.zeros((3, 3))
    inv3[0, 1] = inv3[1, 0] = s.c ** -1.5
    inv3[0, 2] = inv3[2, 0] = s.b ** -1.5
    inv3[1, 2] = inv3[2, 1] = s.a ** -1.5
    A = inv3 * w[None, :]
    A -= np.diag(A.sum(axis=1))
    return A


def planar_accelerations(m: MassTriple, planar: PlanarConfig) -> np.ndarray:
    """Newtonian accelerations of the bodies, shape (3, 2)."""
    X = planar.positions
    w = m.as_array()
    acc = np.zeros_like(X)
    for i in range(3):
        for j in range(3):
            if i != j:
                d = X[j] - X[i]
                acc[i] += w[j] * d / np.linalg.norm(d) ** 3
    return acc


class Frequencies(NamedTuple):
    omega1_sq: float
    omega2_sq: float
    residual: float          # largest mismatch over bodies, relative to the largest acceleration
    degenerate_axis: int     # 0 if none, else 1 or 2 for an axis with no body coordinates


def frequencies(m: MassTriple, planar: PlanarConfig) -> Frequencies:
    """Squared angular velocities about the two principal axes.

    Each axis takes the mass-weighted projection of ``-omega**2 u = acc``;
    the per-body mismatch is the consistency residual.  An axis on which every
    body sits (collinear shape) takes the limit value from the Rayleigh
    quotient of the acceleration operator.
    """
    acc = planar_accelerations(m, planar)
    w = m.as_array()
    scale_acc = float(np.max(np.linalg.norm(acc, axis=1)))
    I = planar.theta1 + planar.theta2
    coords = (planar.x, planar.y)
    out = []
    degenerate = 0
    res = 0.0
    for ax in range(2):
        u = coords[ax]
        theta = float(w @ u ** 2)
        # roundoff in A**2 leaves collinear shapes with theta / I ~ 1e-17
        if theta <= COLLINEAR_EPS * I:
            degenerate = ax + 1
            out.append(None)
            continue
        # mass-weighted projection; keeps 2T + V = 0 exact up to roundoff
        wsq = -float(w @ (u * acc[:, ax])) / theta
        res = max(res, float(np.max(np.abs(acc[:, ax] + wsq * u))) / scale_acc)
        out.append(wsq)
    if out[0] is None and out[1] is None:
        raise DegenerateAxisError("no body off either axis")
    if degenerate:
        # limit direction: mass-orthogonal to (1, 1, 1) and to the occupied axis
        u = coords[2 - degenerate]
        v = np.cross(w, w * u)
        v /= np.linalg.norm(v)
        s = _shape_of(planar)
        Av = acceleration_operator(m, s) @ v
        out[degenerate - 1] = -float(w @ (v * Av)) / float(w @ v ** 2)
    for wsq in out:
        if wsq < -NEG_OMEGA_TOL * max(abs(out[0]), abs(out[1])):
            raise NotBalancedError(f"negative squared frequency {wsq!r}")
    return Frequencies(max(out[0], 0.0), max(out[1], 0.0), res, degenerate)


def _shape_of(planar: PlanarConfig) -> Shape:
    X = planar.positions
    return Shape(float(np.sum((X[1] - X[2]) ** 2)), float(np.sum((X[0] - X[2]) ** 2)),
                 float(np.sum((X[0] - X[1]) ** 2)))


@dataclass
class BalancedEquilibrium:
    """A balanced shape lifted to a relative equilibrium in R^2 + R^2.

    Axis ``i`` of ``planar`` rotates with ``omega_i`` in the i-th plane.
    """

    masses: MassTriple
    shape: Shape              # physical squared distances (scale included)
    planar: PlanarConfig
    omega1: float
    omega2: float
    scale: float = 1.0
    residual: float = 0.0
    rank: int = 4

    @property
    def theta1(self) -> float:
        return self.planar.theta1

    @property
    def theta2(self) -> float:
        return self.planar.theta2

    @property
    def mu1(self) -> float:
        return self.theta1 * self.omega1

    @property
    def mu2(self) -> float:
        return self.theta2 * self.omega2

    @property
    def kinetic(self) -> float:
        return 0.5 * (self.theta1 * self.omega1 ** 2 + self.theta2 * self.omega2 ** 2)

    @property
    def potential(self) -> float:
        return potential(self.masses, self.shape)

    @property
    def energy(self) -> float:
        return self.kinetic + self.potential

    def ordered(self) -> "BalancedEquilibrium":
        """Same equilibrium with the axes labelled so that mu1 >= mu2."""
        if self.mu1 >= self.mu2:
            return self
        return BalancedEquilibrium(self.masses, self.shape, self.planar.swapped(),
                                   self.omega2, self.omega1, self.scale, self.residual, self.rank)

    def omega_matrix(self) -> np.ndarray:
        W = np.zeros((4, 4))
        W[1, 0], W[0, 1] = self.omega1, -self.omega1
        W[3, 2], W[2, 3] = self.omega2, -self.omega2
        return W

    def releq_residual(self) -> float:
        """max_j |Omega^2 xi_j - acc_j| / max_j |acc_j|."""
        xi = np.column_stack([self.planar.x, np.zeros(3), self.planar.y, np.zeros(3)])
        W = self.omega_matrix()
        lhs = xi @ (W @ W).T
        acc = planar_accelerations(self.masses, self.planar)
        acc4 = np.column_stack([acc[:, 0], np.zeros(3), acc[:, 1], np.zeros(3)])
        return float(np.max(np.linalg.norm(lhs - acc4, axis=1)) / np.max(np.linalg.norm(acc4, axis=1)))

    def virial_residual(self) -> float:
        V = self.potential
        return abs(2.0 * self.kinetic + V) / abs(V)


def _anisotropy(x, y) -> float:
    s = abs(x) + abs(y)
    return abs(x - y) / s if s > 0 else 0.0


def _best_frame(m: MassTriple, s: Shape, planar: PlanarConfig) -> PlanarConfig:
    """Principal axes, re-chosen from the acceleration operator when inertia is nearly round.

    On a balanced shape the inertia axes are eigenvectors of the acceleration
    operator, so whichever of the two is less degenerate fixes the frame.
    """
    X = planar.positions
    G = X.T @ (m.as_array()[:, None] * (acceleration_operator(m, s) @ X))
    G = 0.5 * (G + G.T)
    ev = np.linalg.eigvalsh(G / max(planar.theta1 + planar.theta2, 1e-300))
    inertia = _anisotropy(planar.theta1, planar.theta2)
    if inertia > ROUND_SWITCH or _anisotropy(*ev) <= inertia:
        return planar
    psi = 0.5 * math.atan2(2.0 * G[0, 1], G[0, 0] - G[1, 1])
    return planar.rotated(psi)


def lift_axes(m: MassTriple, s: Shape, scale: float = 1.0,
              balance_tol: float = BALANCE_TOL) -> BalancedEquilibrium:
    """Lift without reordering the axes (axis 1 is the first principal axis found)."""
    if not scale > 0:
        raise DomainError("scale must be positive")
    B = float(det_raw(m.m1, m.m2, m.m3, s.a, s.b, s.c))
    if abs(B) > balance_tol * balance_scale(m, s):
        raise NotBalancedError(f"shape {s} is not balanced (B = {B:.3e})")
    phys = s.scaled(scale * scale)
    planar = _best_frame(m, phys, planar_coordinates(m, phys))
    fr = frequencies(m, planar)
    w1, w2 = math.sqrt(fr.omega1_sq), math.sqrt(fr.omega2_sq)
    rank = 2 if fr.degenerate_axis else 4
    if fr.degenerate_axis == 1:
        planar = PlanarConfig(m, np.zeros(3), planar.y)
    elif fr.degenerate_axis == 2:
        planar = PlanarConfig(m, planar.x, np.zeros(3))
    return BalancedEquilibrium(m, phys, planar, w1, w2, scale, fr.residual, rank)


def lift(m: MassTriple, s: Shape, scale: float = 1.0,
         balance_tol: float = BALANCE_TOL) -> BalancedEquilibrium:
    """Relative equilibrium of a balanced shape, ``scale`` multiplying all lengths."""
    return lift_axes(m, s, scale, balance_tol).ordered()


def embed_R4(eq: BalancedEquilibrium, theta1: float = 0.0, theta2: float = 0.0) -> PhaseState:
    """Place the equilibrium in R^4 with its axes at angles theta1, theta2 in the two planes."""
    x, y = eq.planar.x, eq.planar.y
    c1, s1, c2, s2 = math.cos(theta1), math.sin(theta1), math.cos(theta2), math.sin(theta2)
    q = np.column_stack([x * c1, x * s1, y * c2, y * s2])
    v = np.column_stack([-eq.omega1 * x * s1, eq.omega1 * x * c1,
                         -eq.omega2 * y * s2, eq.omega2 * y * c2])
    p = v * eq.masses.as_array()[:, None]
    return PhaseState(eq.masses, q, p)


class MomentumInvariants(NamedTuple):
    ell2: float
    pf: float
    mu1: float
    mu2: float
    rank: int
    d_L: float


def pfaffian(L: np.ndarray) -> float:
    return float(L[0, 1] * L[2, 3] - L[0, 2] * L[1, 3] + L[0, 3] * L[1, 2])


def momentum_invariants(L) -> MomentumInvariants:
    """Norm, Pfaffian and eigen-magnitudes ``mu1 >= mu2`` of an antisymmetric 4x4 matrix."""
    L = np.asarray(L, dtype=float)
    if L.shape != (4, 4):
        raise DomainError("need a 4x4 matrix")
    scale = max(float(np.max(np.abs(L))), 1e-300)
    if np.max(np.abs(L + L.T)) > 1e-12 * scale:
        raise DomainError("matrix is not antisymmetric")
    ell2 = 0.5 * float(np.sum(L * L))
    pf = pfaffian(L)
    apf = abs(pf)
    s = math.sqrt(ell2 + 2 * apf)
    d = math.sqrt(max(ell2 - 2 * apf, 0.0))
    mu1 = 0.5 * (s + d)
    mu2 = apf / mu1 if mu1 > 0 else 0.0
    if mu1 <= RANK_TOL * scale or mu1 == 0.0:
        rank = 0
    elif mu2 <= RANK_TOL * mu1:
        rank = 2
    else:
        rank = 4
    return MomentumInvariants(ell2, pf, mu1, mu2, rank, mu2)


@dataclass
class AngularMomentum4:
    L: np.ndarray

    @property
    def invariants(self) -> MomentumInvariants:
        return momentum_invariants(self.L)

    @property
    def ell2(self) -> float:
        return 0.5 * float(np.sum(self.L * self.L))

    @property
    def pf(self) -> float:
        return pfaffian(self.L)

    @property
    def mu(self) -> tuple[float, float]:
        inv = self.invariants
        return inv.mu1, inv.mu2

    @property
    def rank(self) -> int:
        return self.invariants.rank

    @property
    def k(self) -> float:
        e, p = self.ell2, abs(self.pf)
        return p / (e + 2 * p)


def angular_momentum(state: PhaseState) -> AngularMomentum4:
    """Angular momentum from the Jacobi vectors, L = q p^T - p q^T + Q P^T - P Q^T."""
    return AngularMomentum4(jacobi(state).angular_momentum())


@dataclass
class EMPoint:
    h: float
    k: float
    hp: float | None = None
    kp: float | None = None
    C: float | None = None


def scaled_energy_momentum(eq: BalancedEquilibrium) -> EMPoint:
    s = eq.mu1 + eq.mu2
    if s <= 0.0:
        raise ZeroMomentumError("mu1 + mu2 = 0")
    return EMPoint(eq.energy * s * s, eq.mu1 * eq.mu2 / (s * s))


def hk_from_mu(H, mu1, mu2):
    s = mu1 + mu2
    return H * s * s, mu1 * mu2 / (s * s)


def slope_from_frequencies(mu1, mu2, omega1, omega2):
    """dk/dh along a family; +-inf where omega1 == omega2 (dh/dk = 0)."""
    num = (mu2 - mu1) * (mu1 + mu2) ** -4
    den = omega1 - omega2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den == 0.0, np.copysign(np.inf, num), num / np.where(den == 0.0, 1.0, den))
