"""Command-line front end: families, closed-form curves, simulations and the verification suite."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .balance import euler_points, trace_families
from .closed_forms import (ComplexStructureParams, IsoscelesParams, equilateral_embedding,
                           equilateral_family, isosceles_curve, isosceles_embedding)
from .dynamics import (PAIRS, collision_bound_check, integrate, perturbed_state, rotation_period,
                       syzygy_monitor)
from .energy_momentum import detect_cusps, detect_k_quarter, lift_family, slope_dk_dh
from .equilibrium import angular_momentum, embed_R4, lift
from .exceptions import CollisionError, DomainError, NotBalancedError
from .shape import MassTriple, Shape, moment_of_inertia, potential, squared_area
from .state import hamiltonian

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3

FAMILY_FIELDS = ("family_id", "kind", "b", "a", "c", "A2", "I", "V", "theta1", "theta2",
                 "omega1", "omega2", "mu1", "mu2", "h", "k", "C", "slope",
                 "cusp", "k_quarter", "euler", "analytic")
ISOSCELES_FIELDS = ("rho", "chi", "h", "k")
EQUILATERAL_FIELDS = ("u1", "u2", "u3", "h", "k", "rank", "h_L", "k_max")
TRAJECTORY_FIELDS = (("t",) + tuple(f"q{i}_{j}" for i in range(1, 4) for j in range(1, 5))
                     + tuple(f"p{i}_{j}" for i in range(1, 4) for j in range(1, 5)))
VERIFY_FIELDS = ("group", "passed", "worst", "detail")
CONJECTURE_FIELDS = ("masses", "family_id", "k_quarter", "k_quarter_total", "cusps",
                     "critical_h", "critical_k")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    masses: MassTriple | None = None
    normalize: str = "sum1"
    samples: int = 16
    b_range: tuple = (1e-9, 1e9)
    tol: float = 1e-10
    output: str | None = None
    fmt: str = "csv"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def metadata(self, command: str) -> dict:
        return {
            "command": command,
            "version": __version__,
            "masses": None if self.masses is None else list(self.masses.as_array()),
            "normalize": self.normalize,
            "tolerances": {"tol": self.tol},
            "seed": self.seed,
            **self.extra,
        }


def _parse_floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    if len(vals) != n:
        raise UsageError(f"{what}: expected {n} values, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{what}: values must be finite")
    return vals


def _masses(text: str, normalize: str) -> MassTriple:
    vals = _parse_floats(text, 3, "--masses")
    if min(vals) <= 0:
        raise UsageError("--masses: masses must be positive")
    m = MassTriple(*vals)
    return m.normalized() if normalize == "sum1" else m


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def write_records(records: list[dict], fields, cfg: RunConfig, command: str, stream=None):
    """CSV with a fixed header and 17 significant digits, or one JSON document."""
    close = False
    if stream is None:
        if cfg.output and cfg.output != "-":
            stream = open(cfg.output, "w", newline="")
            close = True
        else:
            stream = sys.stdout
    try:
        if cfg.fmt == "csv":
            w = csv.writer(stream, lineterminator="\n")
            w.writerow(fields)
            for r in records:
                w.writerow([_fmt(r[f]) for f in fields])
        else:
            doc = {"metadata": _jsonable(cfg.metadata(command)),
                   "records": [_jsonable({f: r[f] for f in fields}) for r in records]}
            json.dump(doc, stream, indent=1)
            stream.write("\n")
    finally:
        if close:
            stream.close()


def _nearest_flags(t: np.ndarray, targets) -> np.ndarray:
    flags = np.zeros(len(t), dtype=bool)
    for x in targets:
        if len(t):
            flags[int(np.argmin(np.abs(t - x)))] = True
    return flags


def cmd_families(cfg: RunConfig) -> int:
    m = cfg.masses
    records = []
    for fam in trace_families(m, cfg.b_range[0], cfg.b_range[1], per_decade=cfg.samples):
        lf = lift_family(fam)
        slope, C = slope_dk_dh(lf)
        cusp = _nearest_flags(lf.t, [c.t for c in detect_cusps(lf)])
        kq = _nearest_flags(lf.t, [q.t for q in detect_k_quarter(lf)])
        euler = lf.euler | _nearest_flags(lf.t, fam.euler)
        inv = np.argsort(fam.perm)
        for i, eq in enumerate(lf.equilibria):
            s = Shape(float(lf.a[i]), float(lf.b[i]), 1.0).permuted(inv)
            records.append({
                "family_id": fam.family_id, "kind": fam.kind,
                "b": s.b, "a": s.a, "c": s.c, "A2": squared_area(s),
                "I": moment_of_inertia(m, s), "V": potential(m, s),
                "theta1": lf.theta1[i], "theta2": lf.theta2[i],
                "omega1": lf.omega1[i], "omega2": lf.omega2[i],
                "mu1": lf.mu1[i], "mu2": lf.mu2[i], "h": lf.h[i], "k": lf.k[i],
                "C": C[i], "slope": slope[i], "cusp": cusp[i], "k_quarter": kq[i],
                "euler": euler[i], "analytic": fam.analytic,
            })
    write_records(records, FAMILY_FIELDS, cfg, "families")
    return EXIT_OK


def cmd_isosceles(cfg: RunConfig) -> int:
    mu, mscale = cfg.extra["mu"], cfg.extra["m"]
    n = cfg.samples
    rho = 2.0 * (np.arange(n) + 0.5) / n
    cur = isosceles_curve(mu, rho, mscale)
    records = [{f: cur[f][i] for f in ISOSCELES_FIELDS} for i in range(n)]
    write_records(records, ISOSCELES_FIELDS, cfg, "isosceles")
    return EXIT_OK


def cmd_equilateral(cfg: RunConfig) -> int:
    m = cfg.masses
    fam = equilateral_family(m)
    records = []
    # u = (cos phi, 0, sin phi) sweeps k from 0 (planar) to k_max
    for phi in np.linspace(0.0, 0.5 * math.pi, cfg.samples):
        u = ComplexStructureParams.from_vector([math.cos(phi), 0.0, math.sin(phi)])
        st = equilateral_embedding(m, 1.0, u)
        inv = angular_momentum(st).invariants
        s = inv.mu1 + inv.mu2
        records.append({"u1": u.u1, "u2": u.u2, "u3": u.u3, "h": hamiltonian(st) * s * s,
                        "k": inv.mu1 * inv.mu2 / (s * s), "rank": inv.rank,
                        "h_L": fam.h_L, "k_max": fam.k_max})
    write_records(records, EQUILATERAL_FIELDS, cfg, "equilateral")
    return EXIT_OK


def _simulation_seed(args, cfg: RunConfig):
    if args.rank2:
        return lift(cfg.masses, euler_points(cfg.masses)[0])
    if args.shape is not None:
        a, b, c = _parse_floats(args.shape, 3, "--shape")
        return lift(cfg.masses, Shape(a, b, c))
    if args.mu is not None and args.rho is not None:
        p = IsoscelesParams(args.rho, args.mu, args.m)
        cfg.masses = p.masses
        return isosceles_embedding(p)[0]
    raise UsageError("simulate needs --shape, --rho with --mu, or --rank2")


def cmd_simulate(cfg: RunConfig, args) -> int:
    eq = _simulation_seed(args, cfg)
    base = embed_R4(eq)
    if args.perturb > 0:
        base = perturbed_state(base, args.perturb, np.random.default_rng(cfg.seed))
    P = rotation_period(eq)
    rep = integrate(base, args.time * P, cfg.tol, samples_per_period=args.samples_per_period,
                    period=P)
    records = []
    for i, t in enumerate(rep.t):
        row = {"t": t}
        row.update(zip(TRAJECTORY_FIELDS[1:], rep.y[i]))
        records.append(row)
    write_records(records, TRAJECTORY_FIELDS, cfg, "simulate")
    syz = syzygy_monitor(rep)
    cb = collision_bound_check(rep)
    summary = rep.summary()
    summary.update({
        "min_wedge": syz.min_wedge, "d_L": cb.d_L, "bound_vacuous": cb.vacuous,
        "min_slack": {f"{i + 1}{j + 1}": float(s) for (i, j), s in zip(PAIRS, cb.slack)},
        "within_budget": rep.within_budget(),
    })
    doc = {"metadata": _jsonable(cfg.metadata("simulate")), "report": _jsonable(summary)}
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    else:
        json.dump(doc, sys.stderr, indent=1)
        sys.stderr.write("\n")
    if rep.aborted:
        return EXIT_ABORT
    return EXIT_OK if rep.within_budget() else EXIT_FAIL


def cmd_verify(cfg: RunConfig, args) -> int:
    from .checks import conjecture_counts, run_level

    if args.conjectures:
        write_records(conjecture_counts(), CONJECTURE_FIELDS, cfg, "verify")
        return EXIT_OK
    results = run_level(args.level, cfg.seed)
    write_records(results, VERIFY_FIELDS, cfg, "verify")
    return EXIT_OK if all(r["passed"] for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="balanced3body", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, masses_required=False, masses_default=None):
        p.add_argument("--masses", required=masses_required, default=masses_default,
                       help="m1,m2,m3")
        p.add_argument("--normalize", choices=("none", "sum1"), default="sum1")
        p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("families", help="trace and lift the three families")
    common(p, masses_required=True)
    p.add_argument("--samples", type=int, default=16, help="samples per decade of b")
    p.add_argument("--b-min", type=float, default=1e-9)
    p.add_argument("--b-max", type=float, default=1e9)

    p = sub.add_parser("isosceles", help="closed-form curve for masses (m, m, mu m)")
    common(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=256)

    p = sub.add_parser("equilateral", help="Lagrange family: h_L, k range and a sweep over J")
    common(p, masses_required=True)
    p.add_argument("--samples", type=int, default=33)

    p = sub.add_parser("simulate", help="integrate a (perturbed) relative equilibrium")
    common(p, masses_default="1,1,1")
    p.add_argument("--shape", default=None, help="balanced shape a,b,c")
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--rank2", action="store_true", help="planar collinear seed")
    p.add_argument("--perturb", type=float, default=0.0)
    p.add_argument("--time", type=float, default=20.0, help="rotation periods")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples-per-period", type=int, default=32)
    p.add_argument("--report", default=None, help="JSON report file (default stderr)")

    p = sub.add_parser("verify", help="run invariant groups")
    common(p)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--conjectures", action="store_true")
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(normalize=args.normalize, output=args.output, fmt=args.fmt, seed=args.seed)
    if args.masses is not None:
        cfg.masses = _masses(args.masses, args.normalize)
    if hasattr(args, "samples"):
        if args.samples < 16:
            raise UsageError("--samples must be at least 16")
        cfg.samples = args.samples
    if args.command == "families":
        if not (0 < args.b_min < 1 < args.b_max):
            raise UsageError("need 0 < --b-min < 1 < --b-max")
        cfg.b_range = (args.b_min, args.b_max)
    if args.command == "isosceles":
        if not (args.mu > 0 and args.m > 0):
            raise UsageError("--mu and --m must be positive")
        cfg.extra = {"mu": args.mu, "m": args.m}
    if args.command == "simulate":
        if not (1e-14 <= args.tol <= 1e-6):
            raise UsageError("--tol must lie in [1e-14, 1e-6]")
        if not (0 <= args.perturb <= 1e-2):
            raise UsageError("--perturb must lie in [0, 1e-2]")
        if not args.time > 0 or args.samples_per_period < 1:
            raise UsageError("--time and --samples-per-period must be positive")
        cfg.tol = args.tol
        cfg.extra = {"perturb": args.perturb, "periods": args.time}
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "families":
            return cmd_families(cfg)
        if args.command == "isosceles":
            return cmd_isosceles(cfg)
        if args.command == "equilateral":
            return cmd_equilateral(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg, args)
        return cmd_verify(cfg, args)
    except (UsageError, DomainError, NotBalancedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CollisionError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
