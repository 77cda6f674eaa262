"""Invariant groups run by ``verify``; each returns (passed, worst, detail)."""

from __future__ import annotations

import itertools

import numpy as np

from .balance import det_raw, det_scale, roots_on_a_segment, trace_families
from .closed_forms import (IsoscelesParams, equilateral_family, isosceles_hk,
                           lagrange_junction)
from .dynamics import integrate, rotating_positions, rotation_period
from .energy_momentum import (critical_points, detect_cusps, detect_k_quarter, lift_family,
                              slope_dk_dh)
from .equilibrium import embed_R4, lift, momentum_invariants, scaled_energy_momentum
from .shape import MassTriple, Shape, moment_of_inertia, shape_from_positions, squared_area

FULL_MASSES = ((3, 2, 1), (5, 3, 2), (4, 2, 1), (1, 1, 0.5), (2, 1, 1))
CONJECTURE_MASSES = ((3, 2, 1), (5, 3, 2), (4, 2, 1), (7, 5, 1), (1, 1, 0.5), (2, 1, 1), (1, 1, 1))


def _random_triangle(rng):
    X = rng.standard_normal((3, 2))
    return X, shape_from_positions(X)


def shape_identities(rng, n: int = 500):
    worst = 0.0
    for _ in range(n):
        X, s = _random_triangle(rng)
        m = MassTriple(*rng.uniform(0.1, 3.0, 3))
        e1, e2 = X[1] - X[0], X[2] - X[0]
        area = 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])
        worst = max(worst, abs(squared_area(s) - area ** 2) / (s.a + s.b + s.c) ** 2)
        w = m.as_array()
        Xc = X - w @ X / w.sum()
        I = float(np.sum(w[:, None] * Xc * Xc))
        worst = max(worst, abs(moment_of_inertia(m, s) - I) / I)
    return worst < 1e-12, worst, f"{n} random triangles"


def determinant_symmetry(rng, n: int = 500):
    """B changes sign under an odd relabelling of bodies and keeps it under an even one."""
    worst = 0.0
    for _ in range(n):
        m = rng.uniform(0.1, 3.0, 3)
        s = rng.uniform(0.2, 3.0, 3)
        B = det_raw(*m, *s)
        scale = det_scale(*m, *s)
        for perm in itertools.permutations(range(3)):
            sign = np.linalg.det(np.eye(3)[list(perm)])
            Bp = det_raw(*m[list(perm)], *s[list(perm)])
            worst = max(worst, abs(Bp - sign * B) / scale)
    return worst < 1e-13, worst, f"{n} random masses and shapes"


def momentum_identities(rng, n: int = 1000):
    worst = 0.0
    for _ in range(n):
        A = rng.standard_normal((4, 4))
        L = A - A.T
        inv = momentum_invariants(L)
        ev = np.sort(np.abs(np.linalg.eigvals(L).imag))[::-1]
        mu1, mu2 = ev[0], ev[2]
        tot = (mu1 + mu2) ** 2
        worst = max(worst,
                    abs(inv.ell2 + 2 * abs(inv.pf) - tot) / tot,
                    abs(inv.mu1 - mu1) / mu1, abs(inv.mu2 - mu2) / mu1,
                    max(0.0, 2 * abs(inv.pf) - inv.ell2) / tot)
    return worst < 1e-10, worst, f"{n} random antisymmetric matrices"


def closed_form_examples(rng):
    worst = 0.0
    for mu in (0.5, 1.0, 2.0):
        for rho in np.linspace(0.1, 1.9, 19):
            p = IsoscelesParams(float(rho), mu)
            e = scaled_energy_momentum(lift(p.masses, p.shape.normalized()))
            c = isosceles_hk(p)
            worst = max(worst, abs(e.h / c.h - 1), abs(e.k / c.k - 1))
        j = lagrange_junction(mu)
        c = isosceles_hk(IsoscelesParams(1.0, mu))
        worst = max(worst, abs(j.h / c.h - 1), abs(j.k / c.k - 1))
    for _ in range(20):
        m = MassTriple(*rng.uniform(0.1, 3.0, 3))
        e = scaled_energy_momentum(lift(m, Shape(1.0, 1.0, 1.0)))
        worst = max(worst, abs(e.h / equilateral_family(m).h_L - 1))
    return worst < 1e-10, worst, "isosceles vs lift, junction, equilateral h"


def _family_structure(masses):
    m = MassTriple(*masses).normalized()
    fams = trace_families(m)
    hL = equilateral_family(m).h_L
    worst = 0.0
    ok = len(fams) == 3
    for f in fams:
        lf = lift_family(f)
        ok &= bool(np.all(lf.k >= -1e-15) and np.all(lf.k <= 0.25 + 1e-15))
        ok &= bool(np.all(lf.h <= hL + 1e-12 * abs(hL)))
        if not f.analytic:
            ok &= bool(np.all(np.diff(f.a) > 0) and np.all(np.diff(f.b) > 0))
        worst = max(worst, float(np.max(lf.k)) - 0.25)
    return ok, worst


def family_tracing(rng):
    ok, worst = True, -1.0
    for masses in FULL_MASSES:
        o, w = _family_structure(masses)
        ok &= o
        worst = max(worst, w)
    return ok, worst, f"{len(FULL_MASSES)} mass triples"


def slope_checks(rng):
    m = MassTriple(3, 2, 1).normalized()
    long = [f for f in trace_families(m) if f.family_id == "long"][0]
    lf = lift_family(long)
    slope, _ = slope_dk_dh(lf)
    fd = lf.kp / lf.hp
    mask = (np.abs(lf.hp) > 1e-3 * np.max(np.abs(lf.hp))) & np.isfinite(slope) & ~lf.euler
    near = np.zeros_like(mask)
    for q in detect_k_quarter(lf):
        near |= np.abs(lf.t - q.t) < 0.05
    mask &= ~near
    err = float(np.max(np.abs(fd[mask] / slope[mask] - 1)))
    return err < 1e-6, err, f"{int(mask.sum())} samples on the long family of (3,2,1)/6"


def dynamics_conservation(rng):
    m = MassTriple(3, 2, 1).normalized()
    long = [f for f in trace_families(m) if f.family_id == "long"][0]
    q = detect_k_quarter(lift_family(long))[0]
    b, a = long.point(q.t + 0.5)
    eq = lift(m, Shape(a, b, 1.0))
    P = rotation_period(eq)
    rep = integrate(embed_R4(eq), 20 * P, 1e-12, period=P)
    pos = float(np.max(np.linalg.norm(rep.q - rotating_positions(eq, rep.t), axis=2))
                / np.max(np.abs(rep.q[0])))
    worst = max(rep.drift_H, rep.max_drift_L)
    return worst < 1e-11 and pos < 1e-7, worst, f"position error {pos:.3e}"


def root_counts(rng, n: int = 200):
    worst = 0
    for _ in range(n):
        m = MassTriple(*rng.uniform(0.1, 3.0, 3))
        b, c = rng.uniform(0.05, 5.0, 2)
        worst = max(worst, len(roots_on_a_segment(m, float(b), float(c)).roots))
    return worst <= 2, float(worst), f"{n} random a-segments"


QUICK = (("shape_identities", shape_identities), ("determinant_symmetry", determinant_symmetry),
         ("momentum_identities", momentum_identities), ("closed_forms", closed_form_examples),
         ("segment_root_counts", root_counts))
FULL = QUICK + (("family_tracing", family_tracing), ("slope", slope_checks),
                ("dynamics_conservation", dynamics_conservation))


def run_level(level: str, seed: int) -> list[dict]:
    groups = QUICK if level == "quick" else FULL
    out = []
    for name, fn in groups:
        rng = np.random.default_rng(seed)
        passed, worst, detail = fn(rng)
        out.append({"group": name, "passed": bool(passed), "worst": float(worst), "detail": detail})
    return out


def conjecture_counts(masses_list=CONJECTURE_MASSES) -> list[dict]:
    """Counts only; nothing here is asserted."""
    out = []
    for masses in masses_list:
        m = MassTriple(*masses).normalized()
        rows = []
        for f in trace_families(m):
            lf = lift_family(f)
            cp = critical_points(lf)
            rows.append({"masses": ",".join(f"{x:g}" for x in masses), "family_id": f.family_id,
                         "k_quarter": len(detect_k_quarter(lf)), "cusps": len(detect_cusps(lf)),
                         "critical_h": cp["h"], "critical_k": cp["k"]})
        total = sum(r["k_quarter"] for r in rows)
        for r in rows:
            r["k_quarter_total"] = total
        out.extend(rows)
    return out
