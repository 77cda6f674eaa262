"""Balanced-configuration determinant, its roots along a-segments, and the three families.

B(a, b, c) is the 3x3 determinant with rows ``(1, 1, 1)``,
``(m1 (b+c-a), m2 (c+a-b), m3 (a+b-c))`` and ``(a**-1.5, b**-1.5, c**-1.5)``;
a shape is balanced when it vanishes.  Everything here works on the
determinant alone, vectorised over numpy arrays where a scan needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .exceptions import CollisionError, DomainError
from .shape import MassTriple, Shape, heron_sq, squared_area

SCAN_PER_DECADE = 64
SCAN_DECADES = 6.0
ROOT_RTOL = 1e-13
DEGENERATE_MASS_RTOL = 1e-9


def _rows(m1, m2, m3, a, b, c):
    r = (m1 * (b + c - a), m2 * (c + a - b), m3 * (a + b - c))
    s = (a ** -1.5, b ** -1.5, c ** -1.5)
    return r, s


def _bilinear(r, s):
    # det of rows (1,1,1), r, s
    return (r[1] * s[2] - r[2] * s[1]) + (r[2] * s[0] - r[0] * s[2]) + (r[0] * s[1] - r[1] * s[0])


def _abs_bilinear(r, s):
    return (abs(r[1] * s[2]) + abs(r[2] * s[1]) + abs(r[2] * s[0])
            + abs(r[0] * s[2]) + abs(r[0] * s[1]) + abs(r[1] * s[0]))


def det_raw(m1, m2, m3, a, b, c):
    """B for raw (array-like) arguments, no validation."""
    r, s = _rows(m1, m2, m3, a, b, c)
    return _bilinear(r, s)


def det_scale(m1, m2, m3, a, b, c):
    """Sum of the absolute terms of the determinant expansion, the roundoff scale of B."""
    r, s = _rows(m1, m2, m3, a, b, c)
    return _abs_bilinear(r, s)


def grad_raw(m1, m2, m3, a, b, c):
    """(dB/da, dB/db, dB/dc)."""
    r, s = _rows(m1, m2, m3, a, b, c)
    zero = 0.0 * a
    dr_a = (-m1 + zero, m2 + zero, m3 + zero)
    ds_a = (-1.5 * a ** -2.5, zero, zero)
    dr_b = (m1 + zero, -m2 + zero, m3 + zero)
    ds_b = (zero, -1.5 * b ** -2.5, zero)
    dr_c = (m1 + zero, m2 + zero, -m3 + zero)
    ds_c = (zero, zero, -1.5 * c ** -2.5)
    return (_bilinear(dr_a, s) + _bilinear(r, ds_a),
            _bilinear(dr_b, s) + _bilinear(r, ds_b),
            _bilinear(dr_c, s) + _bilinear(r, ds_c))


def balance_scale(m: MassTriple, s: Shape) -> float:
    """Size of B's roundoff: its absolute terms plus the input rounding carried by the gradient."""
    g = grad_raw(m.m1, m.m2, m.m3, s.a, s.b, s.c)
    return float(det_scale(m.m1, m.m2, m.m3, s.a, s.b, s.c)
                 + abs(g[0] * s.a) + abs(g[1] * s.b) + abs(g[2] * s.c))


def _check(s: Shape):
    if min(s.a, s.b, s.c) <= 0.0:
        raise CollisionError("zero squared distance")


def balance_determinant(m: MassTriple, s: Shape) -> float:
    _check(s)
    return float(det_raw(m.m1, m.m2, m.m3, s.a, s.b, s.c))


def balance_gradient(m: MassTriple, s: Shape) -> tuple[float, float, float]:
    _check(s)
    return tuple(float(g) for g in grad_raw(m.m1, m.m2, m.m3, s.a, s.b, s.c))


def d2B_da2(m: MassTriple, s: Shape) -> float:
    if s.a <= 0.0:
        raise CollisionError("a = 0")
    a = s.a
    return 0.75 * a ** -3.5 * (a * (m.m3 - m.m2) + 5.0 * (s.b - s.c) * (m.m2 + m.m3))


def inflection_on_a_segment(m: MassTriple, b: float, c: float):
    """The a where d2B/da2 changes sign, or None when it keeps one sign."""
    dm = m.m3 - m.m2
    if dm == 0.0:
        return None
    a = -5.0 * (b - c) * (m.m2 + m.m3) / dm
    return a if a > 0.0 else None


def is_degenerate_segment(m: MassTriple, b: float, c: float) -> bool:
    """m2 == m3 and b == c: B vanishes on the whole a-segment."""
    return (abs(m.m2 - m.m3) <= DEGENERATE_MASS_RTOL * m.M
            and abs(b - c) <= DEGENERATE_MASS_RTOL * (b + c))


@dataclass
class SegmentRoots:
    b: float
    c: float
    roots: list = field(default_factory=list)
    inflection: float | None = None
    degenerate: bool = False
    tangent: list = field(default_factory=list)


def _polish(f, df, lo, hi):
    x = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    d = df(x)
    if d != 0.0 and np.isfinite(d):
        xn = x - f(x) / d
        if lo <= xn <= hi and abs(f(xn)) < abs(f(x)):
            x = xn
    return x


def _settled(m: MassTriple, a: float, b: float, c: float, sign: float) -> bool:
    v = float(det_raw(m.m1, m.m2, m.m3, a, b, c))
    return v * sign > 0 and abs(v) > 1e3 * np.finfo(float).eps * float(det_scale(m.m1, m.m2, m.m3, a, b, c))


def roots_on_a_segment(m: MassTriple, b: float, c: float,
                       per_decade: int = SCAN_PER_DECADE,
                       decades: float = SCAN_DECADES) -> SegmentRoots:
    """All zeros of a -> B(a, b, c) on (0, inf).

    A log-spaced sign scan brackets the simple roots, which are then polished;
    local extrema of B found by the same scan are kept as tangent roots when B
    vanishes there to roundoff.
    """
    if not (b > 0 and c > 0):
        raise DomainError("b and c must be positive")
    out = SegmentRoots(b=b, c=c, inflection=inflection_on_a_segment(m, b, c))
    if is_degenerate_segment(m, b, c):
        out.degenerate = True
        return out
    m1, m2, m3 = m.m1, m.m2, m.m3
    lo = math.log10(min(b, c)) - decades
    hi = math.log10(max(b, c)) + decades
    # widen until B shows its asymptotic sign at both ends, so no root lies outside
    lim_lo = math.copysign(1.0, b - c) if b != c else 0.0
    coef = (m1 + m2) * c ** -1.5 - (m1 + m3) * b ** -1.5
    lim_hi = math.copysign(1.0, coef) if coef != 0.0 else 0.0
    while lim_lo and lo > -250 and _settled(m, 10.0 ** lo, b, c, lim_lo) is False:
        lo -= decades
    while lim_hi and hi < 250 and _settled(m, 10.0 ** hi, b, c, lim_hi) is False:
        hi += decades
    n = int(math.ceil((hi - lo) * per_decade)) + 1
    grid = np.logspace(lo, hi, n)
    grid = np.union1d(grid, [b, c])
    vals = det_raw(m1, m2, m3, grid, b, c)

    def f(a):
        return float(det_raw(m1, m2, m3, a, b, c))

    def df(a):
        return float(grad_raw(m1, m2, m3, a, b, c)[0])

    roots = []
    sg = np.sign(vals)
    for i in np.flatnonzero(sg == 0.0):
        x0 = float(grid[i])
        roots.append(x0)
        # an exact zero on the grid (a = b or a = c) can hide a second crossing
        # in a neighbouring cell; the slope gives the sign just off the zero
        side = np.sign(df(x0))
        for j in (i - 1, i + 1):
            if not (0 <= j < len(grid)) or sg[j] == 0.0:
                continue
            expect = side if j > i else -side
            if expect * sg[j] >= 0:
                continue
            # step off the zero until B clears roundoff, then bracket from there
            for frac in 10.0 ** np.arange(-12.0, 0.0):
                near = x0 + frac * (grid[j] - x0)
                fn = f(near)
                if abs(fn) > 1e3 * np.finfo(float).eps * float(det_scale(m1, m2, m3, near, b, c)):
                    if fn * sg[j] < 0:
                        lo, hi = sorted((near, float(grid[j])))
                        roots.append(_polish(f, df, lo, hi))
                    break
    for i in np.flatnonzero(sg[:-1] * sg[1:] < 0):
        roots.append(_polish(f, df, grid[i], grid[i + 1]))

    # tangent zeros: sign change of dB/da without one of B
    dvals = grad_raw(m1, m2, m3, grid, b, c)[0]
    dsg = np.sign(dvals)
    for i in np.flatnonzero(dsg[:-1] * dsg[1:] < 0):
        if sg[i] * sg[i + 1] < 0:
            continue
        ae = brentq(df, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)
        if abs(f(ae)) <= ROOT_RTOL * float(det_scale(m1, m2, m3, ae, b, c)):
            roots.append(ae)
            out.tangent.append(ae)
    merged = []
    for x in sorted(roots):
        if merged and x - merged[-1] <= 1e-12 * x:
            if abs(f(x)) < abs(f(merged[-1])):
                merged[-1] = x
            continue
        merged.append(x)
    out.roots = merged
    out.tangent = [x for x in out.tangent if x in merged]
    return out


def brute_force_roots(m: MassTriple, b: float, c: float, n: int = 200_000,
                      lo: float = -6.0, hi: float = 6.0) -> int:
    """Count sign changes of B along a dense log grid (test oracle)."""
    grid = np.logspace(math.log10(min(b, c)) + lo, math.log10(max(b, c)) + hi, n)
    v = det_raw(m.m1, m.m2, m.m3, grid, b, c)
    sg = np.sign(v)
    return int(np.sum(sg[:-1] * sg[1:] < 0))


# ---------------------------------------------------------------------------
# bracketed roots for masses sorted m1 >= m2 >= m3
# ---------------------------------------------------------------------------

def _sorted_perm(m: MassTriple) -> tuple[int, int, int]:
    arr = m.as_array()
    return tuple(int(i) for i in np.argsort(-arr, kind="stable"))


def _brent_or_endpoint(f, lo, hi, flo, fhi, scale_at):
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        # the endpoint root can come out with the wrong sign by roundoff
        for x, fx in ((hi, fhi), (lo, flo)):
            if abs(fx) <= 1e3 * np.finfo(float).eps * scale_at(x):
                return x
        return None
    return brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=300)


def segment_root(m: MassTriple, b: float, c: float, which: str):
    """The root ``"low"`` (a <= min(b, c)) or ``"high"`` (a >= max(b, c)) of B on an a-segment.

    Needs m2 and m3 to be the two smallest masses, so that the low root always
    exists and is unique, and the high root is unique when it exists.  Returns
    None when the requested root does not exist.
    """
    m1, m2, m3 = m.m1, m.m2, m.m3

    def f(a):
        return float(det_raw(m1, m2, m3, a, b, c))

    def scale_at(a):
        return float(det_scale(m1, m2, m3, a, b, c))

    if which == "low":
        hi = min(b, c)
        fhi = f(hi)
        if b == c:
            return hi
        target = math.copysign(1.0, b - c)   # sign of B as a -> 0
        lo = hi
        flo = fhi
        for _ in range(2000):
            if flo * target > 0 and abs(flo) > 1e3 * np.finfo(float).eps * scale_at(lo):
                break
            lo *= 0.5
            if lo < 1e-300:
                return None
            flo = f(lo)
        if lo == hi:
            return hi
        return _brent_or_endpoint(f, lo, hi, flo, fhi, scale_at)
    if which == "high":
        lo = max(b, c)
        flo = f(lo)
        coef = (m1 + m2) * c ** -1.5 - (m1 + m3) * b ** -1.5
        if b == c:
            return lo
        if coef == 0.0:
            return None
        target = math.copysign(1.0, coef)
        if flo * target > 0 and abs(flo) > 1e3 * np.finfo(float).eps * scale_at(lo):
            # same sign at both ends: no root beyond the second isosceles triangle
            return None
        hi = lo
        fhi = flo
        for _ in range(2000):
            hi *= 2.0
            if hi > 1e250:
                return None
            fhi = f(hi)
            if fhi * target > 0:
                break
        return _brent_or_endpoint(f, lo, hi, flo, fhi, scale_at)
    raise ValueError(which)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

# How each family is parametrised by t and which root it picks (sorted masses, c = 1):
#   long_generic: b = e^t; low root for b < 1, high root for b > 1
#   short_low:    b = e^t (b < b*); high root
#   short_high:   b = 1 + e^t; low root
#   lo_all / hi_all (m2 == m3): b = e^t, b != 1; low / high root
#   iso_ab / iso_ac / iso_bc: closed-form isosceles lines
FAMILY_KINDS = ("long_generic", "short_low", "short_high", "lo_all", "hi_all",
                "iso_ab", "iso_ac", "iso_bc")

MATCH_JUMP = 0.05
MIN_DT = 1e-6


@dataclass
class FamilyCurve:
    family_id: str
    kind: str
    masses: MassTriple          # sorted, m1 >= m2 >= m3
    perm: tuple                 # sorted body i is original body perm[i]
    t: np.ndarray
    b: np.ndarray
    a: np.ndarray
    analytic: bool = False
    ends: tuple = ("", "")
    euler: list = field(default_factory=list)      # t values where A**2 = 0
    inflection_b: list = field(default_factory=list)

    @property
    def c(self) -> np.ndarray:
        return np.ones_like(self.b)

    def shapes(self) -> list[Shape]:
        """Shapes in the sorted labelling, normalised to c = 1."""
        return [Shape(float(a), float(b), 1.0) for a, b in zip(self.a, self.b)]

    def original_shapes(self) -> list[Shape]:
        """Shapes in the caller's body labelling."""
        inv = np.argsort(self.perm)
        return [s.permuted(inv) for s in self.shapes()]

    def squared_areas(self) -> np.ndarray:
        return heron_sq(self.a, self.b, 1.0)

    def point(self, t: float):
        return family_point(self.masses, self.kind, t)

    def __len__(self):
        return len(self.t)


def b_star(m: MassTriple) -> float:
    """End of the low-b short family: the high root escapes to infinity at this b (c = 1)."""
    return ((m.m1 + m.m3) / (m.m1 + m.m2)) ** (2.0 / 3.0)


def family_point(m: MassTriple, kind: str, t: float):
    """(b, a) at parameter ``t`` on a family of sorted masses, or None if it does not exist there."""
    if kind == "iso_ab":
        b = math.exp(t)
        return b, b
    if kind == "iso_ac":
        return math.exp(t), 1.0
    if kind == "iso_bc":
        return 1.0, math.exp(t)
    if kind == "short_high":
        b = 1.0 + math.exp(t)
        if b == 1.0:
            return None
        a = segment_root(m, b, 1.0, "low")
        return None if a is None else (b, a)
    b = math.exp(t)
    if kind == "long_generic":
        if b == 1.0:
            return 1.0, 1.0
        a = segment_root(m, b, 1.0, "low" if b < 1.0 else "high")
    elif kind == "short_low":
        if b >= 1.0:
            return None
        a = segment_root(m, b, 1.0, "high")
    elif kind in ("lo_all", "hi_all"):
        roots = reduced_roots(m, b)
        if len(roots) != 2:
            return None
        a = roots[0] if kind == "lo_all" else roots[-1]
    else:
        raise ValueError(kind)
    return None if a is None else (b, a)


def _q(b: float, c: float) -> float:
    """(b**-1.5 - c**-1.5) / (c - b), without cancellation as b -> c."""
    if b == c:
        return 1.5 * c ** -2.5
    return c ** -1.5 * math.expm1(-1.5 * math.log1p((b - c) / c)) / (c - b)


def reduced_determinant(m1: float, mu: float, a, b: float, c: float):
    """B / (c - b) for masses (m1, mu, mu); finite and accurate on and near b = c."""
    a = np.asarray(a, dtype=float)
    return 2.0 * mu * (c ** -1.5 - a ** -1.5) + _q(b, c) * (m1 * (b + c - a) - mu * (a + b - c))


def reduced_roots(m: MassTriple, b: float, c: float = 1.0) -> list[float]:
    """Zeros in ``a`` of the reduced determinant (requires m2 == m3).

    These are the two non-isosceles families; at b = c they give the points
    where those families cross the isosceles line.
    """
    mu = 0.5 * (m.m2 + m.m3)
    lo = math.log10(min(b, c)) - SCAN_DECADES
    hi = math.log10(max(b, c)) + SCAN_DECADES
    grid = np.logspace(lo, hi, int(math.ceil((hi - lo) * SCAN_PER_DECADE)) + 1)
    v = reduced_determinant(m.m1, mu, grid, b, c)

    def g(a):
        return float(reduced_determinant(m.m1, mu, a, b, c))

    return [brentq(g, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)
            for i in np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)]


def _select(kind: str, roots: list, b: float):
    """Pick a family's root out of a full a-segment root list."""
    if not roots:
        return None
    if kind == "long_generic":
        return roots[0] if b < 1.0 else roots[-1]
    if kind == "short_low":
        return roots[-1] if len(roots) == 2 else None
    if kind == "short_high":
        return roots[0] if len(roots) == 2 else None
    if kind == "lo_all":
        return roots[0] if len(roots) == 2 else None
    if kind == "hi_all":
        return roots[-1] if len(roots) == 2 else None
    raise ValueError(kind)


def _scan_point(m: MassTriple, kind: str, t: float):
    """(b, a, all roots) from a full sign scan of the a-segment."""
    if kind.startswith("iso_"):
        b, a = family_point(m, kind, t)
        return b, a, [a]
    b = 1.0 + math.exp(t) if kind == "short_high" else math.exp(t)
    if kind == "long_generic" and b == 1.0:
        return 1.0, 1.0, [1.0]
    if kind in ("lo_all", "hi_all"):
        roots = reduced_roots(m, b)
        return b, _select(kind, roots, b), roots
    if is_degenerate_segment(m, b, 1.0):
        return b, None, []
    roots = roots_on_a_segment(m, b, 1.0).roots
    return b, _select(kind, roots, b), roots


def _trace_kind(m: MassTriple, kind: str, t_lo: float, t_hi: float, n: int):
    ts = list(np.linspace(t_lo, t_hi, n))
    pts = {}
    for t in ts:
        pts[t] = _scan_point(m, kind, t)

    def jump(p, q):
        if p[1] is None or q[1] is None:
            return p[1] is not q[1]
        return abs(q[1] - p[1]) > MATCH_JUMP * max(abs(p[1]), abs(q[1]))

    def nearest_ok(p, q):
        # the selected root at q must also be the root nearest to p's
        if p[1] is None or q[1] is None or len(q[2]) < 2:
            return True
        near = min(q[2], key=lambda r: abs(math.log(r / p[1])))
        return near == q[1]

    order = sorted(pts)
    i = 0
    while i < len(order) - 1:
        t0, t1 = order[i], order[i + 1]
        p, q = pts[t0], pts[t1]
        if (jump(p, q) or not nearest_ok(p, q)) and t1 - t0 > MIN_DT:
            tm = 0.5 * (t0 + t1)
            pts[tm] = _scan_point(m, kind, tm)
            order.insert(i + 1, tm)
            continue
        i += 1
    t = np.array([t for t in order if pts[t][1] is not None])
    b = np.array([pts[t][0] for t in t])
    a = np.array([pts[t][1] for t in t])
    return t, b, a


def _euler_crossings(m: MassTriple, kind: str, t: np.ndarray, b: np.ndarray, a: np.ndarray):
    A2 = heron_sq(a, b, 1.0)
    out = []
    sg = np.sign(A2)
    for i in np.flatnonzero(sg[:-1] * sg[1:] < 0):
        def g(tt):
            p = family_point(m, kind, tt)
            return squared_area(Shape(p[1], p[0], 1.0))
        out.append(brentq(g, t[i], t[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return out


def _refine_near(m: MassTriple, kind: str, t, b, a, targets, digits: int = 12):
    """Add samples converging geometrically on each target parameter (the Euler points)."""
    extra = {}
    for te in targets:
        for tt in [te] + [te + sg * 10.0 ** -j for sg in (-1, 1) for j in range(1, digits + 1)]:
            if t[0] < tt < t[-1]:
                p = family_point(m, kind, tt)
                if p is not None:
                    extra[tt] = p
    if not extra:
        return t, b, a
    tt = np.concatenate([t, list(extra)])
    bb = np.concatenate([b, [p[0] for p in extra.values()]])
    aa = np.concatenate([a, [p[1] for p in extra.values()]])
    order = np.argsort(tt, kind="stable")
    tt, bb, aa = tt[order], bb[order], aa[order]
    keep = np.concatenate([[True], np.diff(tt) > 0])
    return tt[keep], bb[keep], aa[keep]


def trace_families(m: MassTriple, b_min: float = 1e-9, b_max: float = 1e9,
                   per_decade: int = 16) -> list[FamilyCurve]:
    """The three smooth families of balanced configurations, traced at c = 1.

    Masses are relabelled to m1 >= m2 >= m3 (``FamilyCurve.perm`` records how).
    Generic masses give the long family plus the short families living below
    ``b_star`` and above ``b = 1``; equal-mass cases substitute the isosceles
    lines for the families that degenerate.
    """
    if not (0 < b_min < 1 < b_max):
        raise DomainError("need 0 < b_min < 1 < b_max")
    perm = _sorted_perm(m)
    ms = m.permuted(perm)
    tol = DEGENERATE_MASS_RTOL * ms.M
    lo, hi = math.log(b_min), math.log(b_max)
    n = max(int(per_decade * (hi - lo) / math.log(10.0)), 16) + 1
    specs = []
    if abs(ms.m1 - ms.m3) <= tol:
        specs = [("long", "iso_ab", lo, hi), ("short1", "iso_ac", lo, hi), ("short2", "iso_bc", lo, hi)]
    elif abs(ms.m2 - ms.m3) <= tol:
        # treat the pair as exactly equal so the factor (b - c) can be divided out
        mu = 0.5 * (ms.m2 + ms.m3)
        ms = MassTriple(ms.m1, mu, mu)
        specs = [("long", "iso_bc", lo, hi), ("short1", "lo_all", lo, hi), ("short2", "hi_all", lo, hi)]
    else:
        bs = b_star(ms)
        # m1 == m2 puts the long family on the isosceles line a = b
        long_kind = "iso_ab" if abs(ms.m1 - ms.m2) <= tol else "long_generic"
        specs = [("long", long_kind, lo, hi),
                 ("short1", "short_low", lo, math.log(bs) - MIN_DT),
                 ("short2", "short_high", math.log(b_min), math.log(b_max - 1.0))]
    ends = {
        "long_generic": ("vertex", "collision12"),
        "short_low": ("collision13", "vertex"),
        "short_high": ("collision23", "vertex"),
        "lo_all": ("vertex", "vertex"),
        "hi_all": ("collision13", "collision12"),
        "iso_ab": ("vertex", "collision12"),
        "iso_ac": ("collision13", "vertex"),
        "iso_bc": ("collision23", "vertex"),
    }
    out = []
    for fid, kind, t_lo, t_hi in specs:
        nk = max(int(n * (t_hi - t_lo) / (hi - lo)), 16) + 1
        if kind.startswith("iso_"):
            t = np.linspace(t_lo, t_hi, nk)
            pts = [family_point(ms, kind, tt) for tt in t]
            b = np.array([p[0] for p in pts])
            a = np.array([p[1] for p in pts])
        else:
            t, b, a = _trace_kind(ms, kind, t_lo, t_hi, nk)
        fam = FamilyCurve(fid, kind, ms, perm, t, b, a, analytic=kind.startswith("iso_"),
                          ends=ends[kind])
        fam.euler = _euler_crossings(ms, kind, t, b, a)
        if fam.euler and not fam.analytic:
            t, b, a = _refine_near(ms, kind, t, b, a, fam.euler)
            fam.t, fam.b, fam.a = t, b, a
        elif fam.euler:
            extra = [te + sg * 10.0 ** -j for te in fam.euler for sg in (-1, 1) for j in range(1, 13)]
            t = np.union1d(t, np.concatenate([fam.euler, extra]))
            pts = [family_point(ms, kind, tt) for tt in t]
            fam.t, fam.b, fam.a = t, np.array([p[0] for p in pts]), np.array([p[1] for p in pts])
        infl = []
        for bb in b:
            x = inflection_on_a_segment(ms, bb, 1.0)
            if x is not None:
                infl.append(float(bb))
        fam.inflection_b = infl
        out.append(fam)
    return out


# ---------------------------------------------------------------------------
# special shapes
# ---------------------------------------------------------------------------

def _collinear_shape(middle: int, x: float) -> Shape:
    """Collinear shape with body ``middle`` between the others, outer distance 1, split x : 1 - x."""
    i, k = [j for j in range(3) if j != middle]
    d = np.zeros((3, 3))
    d[i, middle] = d[middle, i] = x
    d[k, middle] = d[middle, k] = 1.0 - x
    d[i, k] = d[k, i] = 1.0
    return Shape(d[1, 2] ** 2, d[0, 2] ** 2, d[0, 1] ** 2)


def euler_points(m: MassTriple) -> list[Shape]:
    """The three collinear balanced shapes, body 1, 2 and 3 in the middle in turn (c = 1)."""
    out = []
    for middle in range(3):
        def f(x):
            s = _collinear_shape(middle, x)
            return float(det_raw(m.m1, m.m2, m.m3, s.a, s.b, s.c))

        lo, hi = 1e-6, 1.0 - 1e-6
        while f(lo) * f(hi) > 0 and lo > 1e-300:
            lo *= 1e-3
            hi = 1.0 - lo
        x = brentq(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps)
        out.append(_collinear_shape(middle, x).normalized())
    return out


def special_points(m: MassTriple) -> dict:
    """Lagrange shape and the shape with round inertia tensor, both at c = 1."""
    lagrange = Shape(1.0, 1.0, 1.0)
    rnd = Shape(m.m1 * (m.m2 + m.m3), m.m2 * (m.m1 + m.m3), m.m3 * (m.m1 + m.m2)).normalized()
    return {"lagrange": lagrange, "round_inertia": rnd}
