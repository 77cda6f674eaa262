"""Mass and shape arithmetic for three bodies.

A shape is stored through its squared mutual distances ``a = d23**2``,
``b = d13**2`` and ``c = d12**2``.  Units have G = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CollisionError, DomainError, NonphysicalShapeError

# relative width of the band A**2 in [-eps, 0) that is treated as collinear
COLLINEAR_EPS = 1e-14
# relative anisotropy of the planar inertia tensor below which it counts as round
ROUND_EPS = 1e-13


@dataclass(frozen=True)
class MassTriple:
    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        for name in ("m1", "m2", "m3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"mass {name}={v!r} must be positive and finite")

    @property
    def M(self) -> float:
        return self.m1 + self.m2 + self.m3

    @property
    def M2(self) -> float:
        return self.m1 * self.m2 + self.m2 * self.m3 + self.m3 * self.m1

    @property
    def M3(self) -> float:
        return self.m1 * self.m2 * self.m3

    def as_array(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3], dtype=float)

    def permuted(self, perm) -> "MassTriple":
        """Masses relabeled so that new body ``i`` is old body ``perm[i]``."""
        arr = self.as_array()
        return MassTriple(*(float(arr[p]) for p in perm))

    def normalized(self) -> "MassTriple":
        """Scaled copy with unit total mass."""
        M = self.M
        return MassTriple(self.m1 / M, self.m2 / M, self.m3 / M)


@dataclass(frozen=True)
class Shape:
    """Squared mutual distances ``a = d23**2``, ``b = d13**2``, ``c = d12**2``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"squared distance {name}={v!r} must be positive and finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def scaled(self, factor: float) -> "Shape":
        return Shape(self.a * factor, self.b * factor, self.c * factor)

    def normalized(self) -> "Shape":
        """Scaled copy with ``c = 1``."""
        return self.scaled(1.0 / self.c)

    def permuted(self, perm) -> "Shape":
        """Shape of the relabeled bodies, new body ``i`` being old body ``perm[i]``."""
        d2 = distance_matrix_sq(self)
        p = list(perm)
        return Shape(float(d2[p[1], p[2]]), float(d2[p[0], p[2]]), float(d2[p[0], p[1]]))

    @property
    def distances(self) -> tuple[float, float, float]:
        """(d23, d13, d12)."""
        return math.sqrt(self.a), math.sqrt(self.b), math.sqrt(self.c)


def distance_matrix_sq(s: Shape) -> np.ndarray:
    """Symmetric 3x3 matrix of squared distances ``d_ij**2``."""
    return np.array([[0.0, s.c, s.b], [s.c, 0.0, s.a], [s.b, s.a, 0.0]])


def symmetric_mass_functions(m1: float, m2: float, m3: float) -> MassTriple:
    return MassTriple(float(m1), float(m2), float(m3))


def moment_of_inertia(m: MassTriple, s: Shape) -> float:
    """Moment of inertia about the centre of mass, ``(m1 m2 c + m2 m3 a + m3 m1 b) / M``."""
    return (m.m1 * m.m2 * s.c + m.m2 * m.m3 * s.a + m.m3 * m.m1 * s.b) / m.M


def heron_sq(a, b, c):
    """A**2 from squared sides, arranged as 4xy - (x + y - z)**2 with z the largest.

    That arrangement keeps full relative accuracy when one side is tiny.
    Works elementwise on arrays.
    """
    x, y, z = np.sort(np.stack(np.broadcast_arrays(a, b, c)).astype(float), axis=0)
    out = (4.0 * x * y - (x + y - z) ** 2) / 16.0
    return out if out.ndim else float(out)


def squared_area(s: Shape) -> float:
    """Heron's formula in squared distances; negative outside the flat-triangle ellipse."""
    return heron_sq(s.a, s.b, s.c)


def classify(s: Shape) -> str:
    """One of ``"triangle"``, ``"collinear"`` or ``"nonphysical"``."""
    A2 = squared_area(s)
    eps = COLLINEAR_EPS * (s.a + s.b + s.c) ** 2
    if A2 > eps:
        return "triangle"
    if A2 >= -eps:
        return "collinear"
    return "nonphysical"


def potential(m: MassTriple, s: Shape) -> float:
    if min(s.a, s.b, s.c) <= 0.0:
        raise CollisionError("zero mutual distance")
    return -(m.m1 * m.m2 / math.sqrt(s.c) + m.m2 * m.m3 / math.sqrt(s.a) + m.m3 * m.m1 / math.sqrt(s.b))


@dataclass(frozen=True)
class PlanarConfig:
    """Bodies in the principal axes of inertia of their plane, centre of mass at the origin.

    ``x[i], y[i]`` are the coordinates of body ``i``; ``theta1 >= theta2`` are the
    moments of inertia about the two axes, except that a round inertia tensor keeps
    the provisional frame (body 1 to body 2 along ``x``).
    """

    masses: MassTriple
    x: np.ndarray
    y: np.ndarray

    @property
    def theta1(self) -> float:
        return float(np.dot(self.masses.as_array(), self.x ** 2))

    @property
    def theta2(self) -> float:
        return float(np.dot(self.masses.as_array(), self.y ** 2))

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    def rotated(self, angle: float) -> "PlanarConfig":
        """Same configuration expressed in axes turned by ``angle``."""
        c, s = math.cos(angle), math.sin(angle)
        return PlanarConfig(self.masses, c * self.x + s * self.y, -s * self.x + c * self.y)

    def swapped(self) -> "PlanarConfig":
        return PlanarConfig(self.masses, self.y.copy(), -self.x.copy())


def planar_coordinates(m: MassTriple, s: Shape) -> PlanarConfig:
    A2 = squared_area(s)
    scale = s.a + s.b + s.c
    if A2 < -COLLINEAR_EPS * scale ** 2:
        raise NonphysicalShapeError(f"negative squared area {A2!r} for {s}")
    d12 = math.sqrt(s.c)
    # body 1 at the origin, body 2 on the x axis, body 3 from d13 and d23
    x3 = (s.b + s.c - s.a) / (2.0 * d12)
    y3 = 2.0 * math.sqrt(max(A2, 0.0)) / d12
    x = np.array([0.0, d12, x3])
    y = np.array([0.0, 0.0, y3])
    w = m.as_array()
    x -= np.dot(w, x) / m.M
    y -= np.dot(w, y) / m.M
    sxx = float(np.dot(w, x * x))
    syy = float(np.dot(w, y * y))
    sxy = float(np.dot(w, x * y))
    if math.hypot(sxx - syy, 2.0 * sxy) <= ROUND_EPS * (sxx + syy):
        return PlanarConfig(m, x, y)
    phi = 0.5 * math.atan2(2.0 * sxy, sxx - syy)
    cfg = PlanarConfig(m, x, y).rotated(phi)
    cfg = PlanarConfig(m, cfg.x, cfg.y)
    if cfg.theta1 < cfg.theta2:
        cfg = cfg.swapped()
    return cfg


def shape_from_positions(q: np.ndarray) -> Shape:
    """Shape of three points given as the rows of ``q`` (any dimension)."""
    q = np.asarray(q, dtype=float)
    d23 = float(np.sum((q[1] - q[2]) ** 2))
    d13 = float(np.sum((q[0] - q[2]) ** 2))
    d12 = float(np.sum((q[0] - q[1]) ** 2))
    if min(d23, d13, d12) <= 0.0:
        raise CollisionError("coincident bodies")
    return Shape(d23, d13, d12)


def shape_functions(m: MassTriple, s: Shape) -> tuple[float, float, float]:
    """(I, A**2, V) in one call."""
    return moment_of_inertia(m, s), squared_area(s), potential(m, s)
