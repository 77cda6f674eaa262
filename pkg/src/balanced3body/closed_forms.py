"""Closed-form families: equilateral (Lagrange) solutions and isosceles triangles of masses (m, m, mu m)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import BalancedEquilibrium, EMPoint
from .exceptions import DomainError
from .shape import MassTriple, PlanarConfig, Shape, planar_coordinates
from .state import PhaseState

UNIT_TOL = 1e-14
# below this rho, chi is assembled from logarithms
CHI_LOG_RHO = 1e-6


@dataclass(frozen=True)
class ComplexStructureParams:
    """Unit vector (u1, u2, u3) selecting a complex structure J on R^4 (J @ J = -I)."""

    u1: float
    u2: float
    u3: float

    def __post_init__(self):
        n = self.u1 ** 2 + self.u2 ** 2 + self.u3 ** 2
        if not abs(n - 1.0) <= UNIT_TOL:
            raise DomainError(f"u1^2 + u2^2 + u3^2 = {n!r}, expected 1")

    @classmethod
    def from_vector(cls, v) -> "ComplexStructureParams":
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise DomainError("zero vector")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def J(self) -> np.ndarray:
        u1, u2, u3 = self.u1, self.u2, self.u3
        return np.array([
            [0.0, -u1, -u2, -u3],
            [u1, 0.0, u3, -u2],
            [u2, -u3, 0.0, u1],
            [u3, u2, -u1, 0.0],
        ])


@dataclass(frozen=True)
class EquilateralFamily:
    h_L: float
    k_max: float

    @property
    def k_range(self) -> tuple[float, float]:
        return 0.0, self.k_max


def equilateral_family(m: MassTriple) -> EquilateralFamily:
    """h = -M2**3 / (2 M) along the whole family, k from 0 up to 3 M3 M / (4 M2**2)."""
    return EquilateralFamily(-0.5 * m.M2 ** 3 / m.M, 0.75 * m.M3 * m.M / m.M2 ** 2)


def equilateral_embedding(m: MassTriple, r: float, u: ComplexStructureParams) -> PhaseState:
    """Equilateral triangle of side ``r`` in the (e1, e2) plane, rotating with Omega = omega J.

    omega**2 = M / r**3, so every body satisfies Omega**2 xi = -omega**2 xi = acceleration.
    """
    if not r > 0:
        raise DomainError("side length must be positive")
    planar = planar_coordinates(m, Shape(r * r, r * r, r * r))
    q = np.zeros((3, 4))
    q[:, 0] = planar.x
    q[:, 1] = planar.y
    omega = math.sqrt(m.M / r ** 3)
    v = omega * q @ u.J.T
    return PhaseState(m, q, v * m.as_array()[:, None])


@dataclass(frozen=True)
class IsoscelesParams:
    """Masses (m, m, mu m); d23 = d13 = s and d12 = rho s."""

    rho: float
    mu: float
    m: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.rho < 2.0):
            raise DomainError(f"rho={self.rho!r} outside (0, 2)")
        if not (self.mu > 0 and self.m > 0 and self.s > 0):
            raise DomainError("mu, m and s must be positive")
        for v in (self.rho, self.mu, self.m, self.s):
            if not math.isfinite(v):
                raise DomainError("parameters must be finite")

    @property
    def masses(self) -> MassTriple:
        return MassTriple(self.m, self.m, self.mu * self.m)

    @property
    def shape(self) -> Shape:
        s2 = self.s * self.s
        return Shape(s2, s2, self.rho * self.rho * s2)


def isosceles_chi(p: IsoscelesParams) -> float:
    """chi = (4 - rho**2) mu / sqrt(rho (2 + mu) (2 + rho**3 mu)), the ratio mu1 / mu2."""
    rho, mu = p.rho, p.mu
    if rho < CHI_LOG_RHO:
        lg = (math.log(4.0 - rho * rho) + math.log(mu)
              - 0.5 * (math.log(rho) + math.log(2.0 + mu) + math.log1p(0.5 * rho ** 3 * mu) + math.log(2.0)))
        return math.exp(lg)
    return (4.0 - rho * rho) * mu / math.sqrt(rho * (2.0 + mu) * (2.0 + rho ** 3 * mu))


def isosceles_hk(p: IsoscelesParams) -> EMPoint:
    chi = isosceles_chi(p)
    rho, mu, m = p.rho, p.mu, p.m
    h = -0.125 * m ** 5 * (1.0 + 2.0 * rho * mu) * (2.0 + rho ** 3 * mu) * (1.0 + chi) ** 2
    k = chi / (1.0 + chi) ** 2
    return EMPoint(h, k)


def isosceles_gamma(p: IsoscelesParams) -> float:
    return math.sqrt(4.0 / p.rho ** 2 - 1.0) / (2.0 * (1.0 + 2.0 / p.mu))


def isosceles_embedding(p: IsoscelesParams) -> tuple[BalancedEquilibrium, PhaseState]:
    """The isosceles relative equilibrium, as an equilibrium record and as a state in R^4.

    Bodies sit at (0, y_i, 0, x_i) with y the symmetry axis (first plane,
    frequency omega1) and x along the base (second plane, frequency omega2).
    """
    rho, mu, m, s = p.rho, p.mu, p.m, p.s
    g = isosceles_gamma(p)
    sym = np.array([-g, -g, 2.0 * g / mu]) * rho * s
    base = np.array([-0.5, 0.5, 0.0]) * rho * s
    w1 = math.sqrt(m * (mu + 2.0) / s ** 3)
    w2 = math.sqrt(m * (mu / s ** 3 + 2.0 / (rho ** 3 * s ** 3)))
    masses = p.masses
    eq = BalancedEquilibrium(masses, p.shape, PlanarConfig(masses, sym, base), w1, w2, scale=s)
    q = np.zeros((3, 4))
    q[:, 1] = sym
    q[:, 3] = base
    # Omega = blockdiag(w1 J2, w2 J2), J2 = [[0, -1], [1, 0]]
    v = np.zeros((3, 4))
    v[:, 0] = -w1 * sym
    v[:, 2] = -w2 * base
    return eq, PhaseState(masses, q, v * masses.as_array()[:, None])


def isosceles_moments(p: IsoscelesParams) -> tuple[float, float]:
    """(Theta1, Theta2) = (m s^2 mu (4 - rho^2) / (2 (2 + mu)), m s^2 rho^2 / 2)."""
    rho, mu, m, s = p.rho, p.mu, p.m, p.s
    return m * s * s * mu * (4.0 - rho * rho) / (2.0 * (2.0 + mu)), 0.5 * m * s * s * rho * rho


def isosceles_frequencies(p: IsoscelesParams) -> tuple[float, float]:
    """(omega1**2, omega2**2) = (m (mu + 2) / s^3, m (mu / s^3 + 2 / (rho^3 s^3)))."""
    rho, mu, m, s = p.rho, p.mu, p.m, p.s
    return m * (mu + 2.0) / s ** 3, m * (mu / s ** 3 + 2.0 / (rho ** 3 * s ** 3))


def isosceles_curve(mu: float, rho, m: float = 1.0) -> dict:
    """Vectorised (rho, chi, h, k) over an array of rho values."""
    rho = np.asarray(rho, dtype=float)
    pts = [isosceles_hk(IsoscelesParams(float(r), mu, m)) for r in rho]
    return {
        "rho": rho,
        "chi": np.array([isosceles_chi(IsoscelesParams(float(r), mu, m)) for r in rho]),
        "h": np.array([q.h for q in pts]),
        "k": np.array([q.k for q in pts]),
    }


def lagrange_junction(mu: float, m: float = 1.0) -> EMPoint:
    """Where the isosceles curve meets the end of the Lagrange line (rho = 1)."""
    if not (mu > 0 and m > 0):
        raise DomainError("mu and m must be positive")
    k = 3.0 * mu * (2.0 + mu) / (4.0 * (1.0 + 2.0 * mu) ** 2)
    h = -m ** 5 * (1.0 + 2.0 * mu) ** 3 / (2.0 * (2.0 + mu))
    return EMPoint(h, k)
