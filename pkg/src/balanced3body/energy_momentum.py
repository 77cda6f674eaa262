"""Energy-momentum image of a traced family: (h, k), derivatives, slope, cusps, k = 1/4.

Along a family the two inertia axes are followed continuously (they are
labelled by the body, not re-sorted by size), so ``mu1 - mu2`` changes sign
at a k = 1/4 tangency and ``C = mu1' mu2 - mu2' mu1`` only vanishes at genuine
cusps.  Derivatives are taken in the family parameter ``t`` with a centred
five-point stencil, falling back to a one-sided Richardson pair next to the
collinear boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .balance import FamilyCurve, family_point
from .equilibrium import BalancedEquilibrium, lift_axes
from .exceptions import DomainError
from .shape import COLLINEAR_EPS, Shape, heron_sq

FD_STEP = 1e-5
CUSP_XTOL = 1e-10
# |C| below this fraction of (mu1 + mu2)**2 * |d log mu / dt| counts as a degenerate chart
DARBOUX_C_MIN = 1e-3


def _edge_angle(eq: BalancedEquilibrium) -> float:
    """Direction of the body 1 -> body 2 edge in the axes of ``eq``, modulo pi."""
    x, y = eq.planar.x, eq.planar.y
    return math.atan2(y[1] - y[0], x[1] - x[0]) % math.pi


def _swap(eq: BalancedEquilibrium) -> BalancedEquilibrium:
    return BalancedEquilibrium(eq.masses, eq.shape, eq.planar.swapped(), eq.omega2, eq.omega1,
                               eq.scale, eq.residual, eq.rank)


def _aligned(eq: BalancedEquilibrium, ref_angle: float | None):
    """``eq`` with its axes relabelled to match a neighbour whose edge angle is ``ref_angle``."""
    ang = _edge_angle(eq)
    if ref_angle is not None:
        d = (ang - ref_angle) % math.pi
        if math.pi / 4 < d < 3 * math.pi / 4:
            eq = _swap(eq)
            ang = _edge_angle(eq)
    return eq, ang


def _physical(b: float, a: float) -> bool:
    return heron_sq(a, b, 1.0) >= -COLLINEAR_EPS * (a + b + 1.0) ** 2


@dataclass
class _Sample:
    mu1: float
    mu2: float
    omega1: float
    omega2: float
    H: float

    @property
    def vec(self) -> np.ndarray:
        s = self.mu1 + self.mu2
        return np.array([self.mu1, self.mu2, self.H, s * s * self.H, self.mu1 * self.mu2 / (s * s)])


class _Evaluator:
    """Axis-aligned lifts of one family at arbitrary parameter values."""

    def __init__(self, fam: FamilyCurve, scale: float = 1.0):
        self.fam = fam
        self.scale = scale

    def lift(self, t: float, ref_angle=None):
        p = family_point(self.fam.masses, self.fam.kind, t)
        if p is None or not _physical(*p):
            return None
        b, a = p
        eq = lift_axes(self.fam.masses, Shape(a, b, 1.0), self.scale)
        return _aligned(eq, ref_angle)

    def sample(self, t: float, ref_angle) -> _Sample | None:
        r = self.lift(t, ref_angle)
        if r is None:
            return None
        eq = r[0]
        return _Sample(eq.mu1, eq.mu2, eq.omega1, eq.omega2, eq.energy)

    def derivative(self, t: float, ref_angle, h: float = FD_STEP):
        """d/dt of (mu1, mu2, H, h, k), centred five-point or one-sided Richardson."""
        pts = {j: self.sample(t + j * h, ref_angle) for j in (-2, -1, 1, 2)}
        if all(v is not None for v in pts.values()):
            return (8 * (pts[1].vec - pts[-1].vec) - (pts[2].vec - pts[-2].vec)) / (12 * h)
        f0 = self.sample(t, ref_angle)
        for sg in (1, -1):
            f = [f0] + [self.sample(t + sg * j * h, ref_angle) for j in (1, 2, 3, 4)]
            if all(v is not None for v in f):
                v = [x.vec for x in f]
                d1 = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
                d2 = (-3 * v[0] + 4 * v[2] - v[4]) / (4 * h)
                return sg * (4 * d1 - d2) / 3
        raise DomainError(f"no physical stencil around t={t!r}")

    def C(self, t: float, ref_angle) -> float:
        s = self.sample(t, ref_angle)
        d = self.derivative(t, ref_angle)
        return d[0] * s.mu2 - d[1] * s.mu1

    def mu_gap(self, t: float, ref_angle) -> float:
        s = self.sample(t, ref_angle)
        return s.mu1 - s.mu2


@dataclass
class CuspPoint:
    t: float
    b: float
    a: float
    h: float
    k: float
    at_k_quarter: bool = False


@dataclass
class KQuarterPoint:
    t: float
    b: float
    a: float
    h: float
    C: float
    cusp: bool          # True when h' and k' both vanish there (C = 0, or a central configuration)
    central: bool = False   # omega1 = omega2 as well: an equal-mass Lagrange point


@dataclass
class LiftedFamily:
    """Physical samples of a family with their equilibria and energy-momentum data.

    Arrays are indexed like ``t``; ``mu1``/``mu2`` follow the body-fixed axes, so
    they may cross.  ``hp``, ``kp`` are derivatives in ``t`` from finite differences.
    """

    family: FamilyCurve
    t: np.ndarray
    b: np.ndarray
    a: np.ndarray
    equilibria: list
    angle: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray
    H: np.ndarray
    h: np.ndarray
    k: np.ndarray
    dmu1: np.ndarray
    dmu2: np.ndarray
    hp: np.ndarray
    kp: np.ndarray
    scale: float = 1.0
    euler: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def family_id(self) -> str:
        return self.family.family_id

    @property
    def C(self) -> np.ndarray:
        return self.dmu1 * self.mu2 - self.dmu2 * self.mu1

    def hp_formula(self) -> np.ndarray:
        """h' = (omega1 - omega2) C (mu1 + mu2)."""
        return (self.omega1 - self.omega2) * self.C * (self.mu1 + self.mu2)

    def kp_formula(self) -> np.ndarray:
        """k' = (mu2 - mu1) C (mu1 + mu2)**-3."""
        return (self.mu2 - self.mu1) * self.C * (self.mu1 + self.mu2) ** -3

    def acute(self) -> np.ndarray:
        """True where the triangle has no angle of 90 degrees or more."""
        a, b = self.a, self.b
        return (a < b + 1.0) & (b < a + 1.0) & (1.0 < a + b)

    def evaluator(self) -> _Evaluator:
        return _Evaluator(self.family, self.scale)

    def __len__(self):
        return len(self.t)


def lift_family(fam: FamilyCurve, scale: float = 1.0, fd_step: float = FD_STEP) -> LiftedFamily:
    """Lift every physical sample of ``fam`` and differentiate along it."""
    ev = _Evaluator(fam, scale)
    rows = []
    ref = None
    for t, b, a in zip(fam.t, fam.b, fam.a):
        if not _physical(b, a):
            continue
        eq = lift_axes(fam.masses, Shape(float(a), float(b), 1.0), scale)
        eq, ref = _aligned(eq, ref)
        d = ev.derivative(float(t), ref, fd_step)
        rows.append((float(t), float(b), float(a), eq, ref, d))
    if not rows:
        raise DomainError(f"family {fam.family_id} has no physical samples")
    eqs = [r[3] for r in rows]
    mu1 = np.array([e.mu1 for e in eqs])
    mu2 = np.array([e.mu2 for e in eqs])
    s = mu1 + mu2
    H = np.array([e.energy for e in eqs])
    D = np.array([r[5] for r in rows])
    euler = np.array([e.rank == 2 for e in eqs])
    return LiftedFamily(
        family=fam,
        t=np.array([r[0] for r in rows]),
        b=np.array([r[1] for r in rows]),
        a=np.array([r[2] for r in rows]),
        equilibria=eqs,
        angle=np.array([r[4] for r in rows]),
        theta1=np.array([e.theta1 for e in eqs]),
        theta2=np.array([e.theta2 for e in eqs]),
        omega1=np.array([e.omega1 for e in eqs]),
        omega2=np.array([e.omega2 for e in eqs]),
        mu1=mu1, mu2=mu2, H=H, h=H * s * s, k=mu1 * mu2 / (s * s),
        dmu1=D[:, 0], dmu2=D[:, 1], hp=D[:, 3], kp=D[:, 4],
        scale=scale, euler=euler,
    )


def slope_dk_dh(lf: LiftedFamily):
    """Per-sample slope dk/dh = (mu2 - mu1)/(omega1 - omega2) (mu1 + mu2)**-4, and C.

    The slope is +-inf where omega1 == omega2 (there dh/dk = 0).
    """
    num = (lf.mu2 - lf.mu1) * (lf.mu1 + lf.mu2) ** -4
    den = lf.omega1 - lf.omega2
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(den == 0.0, np.copysign(np.inf, num), num / np.where(den == 0.0, 1.0, den))
    return slope, lf.C


def _bisect(f, t0: float, t1: float, f0: float, f1: float, xtol: float) -> float:
    if f0 == 0.0:
        return t0
    if f1 == 0.0:
        return t1
    return brentq(f, t0, t1, xtol=xtol, rtol=4 * np.finfo(float).eps)


def _point(lf: LiftedFamily, t: float, ref):
    ev = lf.evaluator()
    b, a = family_point(lf.family.masses, lf.family.kind, t)
    s = ev.sample(t, ref)
    tot = s.mu1 + s.mu2
    return b, a, s.H * tot * tot, s.mu1 * s.mu2 / (tot * tot)


def detect_cusps(lf: LiftedFamily, xtol: float = CUSP_XTOL) -> list[CuspPoint]:
    """Zeros of C along the family, each bracketed by a sign change and refined to ``xtol``."""
    ev = lf.evaluator()
    out = []
    for i in _brackets(lf.C):
        ref = lf.angle[i]
        tc = _bisect(lambda tt: ev.C(tt, ref), lf.t[i], lf.t[i + 1], lf.C[i], lf.C[i + 1], xtol)
        b, a, h, k = _point(lf, tc, ref)
        out.append(CuspPoint(tc, b, a, h, k, at_k_quarter=bool(abs(k - 0.25) < 1e-6)))
    # a central configuration with mu1 = mu2 has no defined axes: h' and k' both vanish
    # there and the size-ordered C changes sign, so it is a cusp at k = 1/4
    for q in detect_k_quarter(lf, xtol):
        if q.central and not any(abs(c.t - q.t) <= 10 * xtol for c in out):
            out.append(CuspPoint(q.t, q.b, q.a, q.h, 0.25, at_k_quarter=True))
    return sorted(out, key=lambda c: c.t)


def _brackets(v: np.ndarray) -> list[int]:
    """Indices i with a sign change or zero of v on [i, i+1], each zero reported once."""
    out = []
    for i in range(len(v) - 1):
        if v[i + 1] == 0.0 and i + 1 < len(v) - 1:
            continue
        if v[i] * v[i + 1] < 0 or v[i] == 0.0 or v[i + 1] == 0.0:
            out.append(i)
    return out


def detect_k_quarter(lf: LiftedFamily, xtol: float = CUSP_XTOL) -> list[KQuarterPoint]:
    """Points where mu1 = mu2 (k = 1/4), with C there to tell a cusp from a smooth tangency."""
    ev = lf.evaluator()
    g = lf.mu1 - lf.mu2
    out = []
    for i in _brackets(g):
        ref = lf.angle[i]
        tq = _bisect(lambda tt: ev.mu_gap(tt, ref), lf.t[i], lf.t[i + 1], g[i], g[i + 1], xtol)
        b, a, h, _ = _point(lf, tq, ref)
        Cq = ev.C(tq, ref)
        s = ev.sample(tq, ref)
        dmu = ev.derivative(tq, ref)
        # C compared with the size of its two terms
        cscale = abs(dmu[0] * s.mu2) + abs(dmu[1] * s.mu1)
        central = abs(s.omega1 - s.omega2) <= 1e-6 * (s.omega1 + s.omega2)
        out.append(KQuarterPoint(tq, b, a, h, Cq, cusp=bool(abs(Cq) <= 1e-6 * cscale or central),
                                 central=bool(central)))
    return out


@dataclass
class DarbouxReport:
    max_deviation: float
    checked: int
    skipped: list       # parameter values left out because C is too small there


def darboux_frequency_check(lf: LiftedFamily, h: float = FD_STEP,
                            c_min: float = DARBOUX_C_MIN) -> DarbouxReport:
    """Compare omega_i with dH/dmu_i reconstructed on the (t, scale) cone.

    At each sample the Jacobian of (mu1, mu2) in (t, sigma) is inverted to
    turn (dH/dt, dH/dsigma) into (dH/dmu1, dH/dmu2).  Scale derivatives are
    centred differences at sigma = scale * (1 +- h).
    """
    ev = lf.evaluator()
    worst = 0.0
    checked = 0
    skipped = []
    for i, t in enumerate(lf.t):
        if lf.euler[i]:
            skipped.append(float(t))
            continue
        C = lf.C[i]
        size = abs(lf.dmu1[i] * lf.mu2[i]) + abs(lf.dmu2[i] * lf.mu1[i])
        if size == 0.0 or abs(C) < c_min * size:
            skipped.append(float(t))
            continue
        ref = lf.angle[i]
        dt = ev.derivative(float(t), ref, h)
        sig = lf.scale
        up = _Evaluator(lf.family, sig * (1 + h)).sample(float(t), ref)
        dn = _Evaluator(lf.family, sig * (1 - h)).sample(float(t), ref)
        ds = (up.vec - dn.vec) / (2 * h * sig)
        J = np.array([[dt[0], ds[0]], [dt[1], ds[1]]])
        grad = np.linalg.solve(J.T, np.array([dt[2], ds[2]]))
        dev = max(abs(grad[0] - lf.omega1[i]) / lf.omega1[i], abs(grad[1] - lf.omega2[i]) / lf.omega2[i])
        worst = max(worst, float(dev))
        checked += 1
    return DarbouxReport(worst, checked, skipped)


def critical_points(lf: LiftedFamily) -> dict:
    """Counts of sign changes of h' and k' along the family (critical points of h and k)."""
    def changes(v):
        s = np.sign(v)
        s = s[s != 0]
        return int(np.count_nonzero(s[:-1] * s[1:] < 0))
    return {"h": changes(lf.hp), "k": changes(lf.kp)}
