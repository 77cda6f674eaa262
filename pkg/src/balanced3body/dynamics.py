"""Direct integration of three bodies in R^4 with conservation and collision monitoring."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .equilibrium import BalancedEquilibrium, embed_R4, momentum_invariants
from .exceptions import CollisionError, DomainError
from .shape import MassTriple
from .state import PhaseState, angular_momentum_bodies, jacobi, potential_energy
from .state import hamiltonian as _hamiltonian

PAIRS = ((0, 1), (0, 2), (1, 2))
L_ENTRIES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
COLLISION_FACTOR = 1e-8
TOL_RANGE = (1e-14, 1e-6)
SAMPLES_PER_PERIOD = 32
# local error control runs this much tighter than the requested tolerance,
# so that drift over tens of periods stays inside 10 * tol
LOCAL_TOL_FACTOR = 0.1
THREADS_ENV = "BALANCED3BODY_THREADS"


def hamiltonian(state: PhaseState) -> float:
    return _hamiltonian(state)


def jacobi_hamiltonian(state: PhaseState) -> float:
    """Same energy, kinetic part from the Jacobi vectors."""
    return jacobi(state).kinetic_energy() + potential_energy(state)


def _accel(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(q)
    for i, j in PAIRS:
        d = q[j] - q[i]
        r2 = float(d @ d)
        if r2 == 0.0:
            raise CollisionError(f"bodies {i + 1} and {j + 1} coincide")
        f = d / (r2 * math.sqrt(r2))
        acc[i] += w[j] * f
        acc[j] -= w[i] * f
    return acc


def forces(state: PhaseState) -> np.ndarray:
    """Accelerations q_i'' (shape (3, 4)); m_i times these sum to zero."""
    return _accel(state.masses.as_array(), state.q)


def length_scale(state: PhaseState) -> float:
    """sqrt(I / M), I the moment of inertia about the centre of mass."""
    w = state.masses.as_array()
    q = state.q - state.centre_of_mass()
    return math.sqrt(float(np.sum(w[:, None] * q * q)) / w.sum())


def natural_period(state: PhaseState) -> float:
    r = length_scale(state)
    return 2.0 * math.pi * math.sqrt(r ** 3 / state.masses.M)


def rotation_period(eq: BalancedEquilibrium) -> float:
    return 2.0 * math.pi / max(eq.omega1, eq.omega2)


def _min_distance(q: np.ndarray) -> float:
    return min(float(np.linalg.norm(q[i] - q[j])) for i, j in PAIRS)


@dataclass
class TrajectoryReport:
    masses: MassTriple
    t: np.ndarray
    y: np.ndarray                 # (n, 24): flattened q then p
    H0: float
    L0: np.ndarray
    drift_H: float
    drift_L: np.ndarray           # per entry in L_ENTRIES, relative to ell
    drift_ell2: float
    drift_pf: float
    min_dist: np.ndarray          # d12, d13, d23
    min_area2: float
    min_pd: np.ndarray            # min |p| d per pairing in PAIRS
    tol: float
    period: float
    aborted: bool = False
    message: str = ""

    def __len__(self):
        return len(self.t)

    @property
    def q(self) -> np.ndarray:
        return self.y[:, :12].reshape(-1, 3, 4)

    @property
    def p(self) -> np.ndarray:
        return self.y[:, 12:].reshape(-1, 3, 4)

    def state(self, i: int) -> PhaseState:
        return PhaseState.from_flat(self.masses, self.y[i])

    @property
    def max_drift_L(self) -> float:
        return float(np.max(self.drift_L))

    def within_budget(self, factor: float = 10.0) -> bool:
        return (not self.aborted and self.drift_H < factor * self.tol
                and self.max_drift_L < factor * self.tol)

    def summary(self) -> dict:
        return {
            "samples": len(self),
            "t_end": float(self.t[-1]) if len(self) else 0.0,
            "period": self.period,
            "drift_H": self.drift_H,
            "drift_L": self.max_drift_L,
            "drift_ell2": self.drift_ell2,
            "drift_pf": self.drift_pf,
            "min_d12": float(self.min_dist[0]),
            "min_d13": float(self.min_dist[1]),
            "min_d23": float(self.min_dist[2]),
            "min_area2": self.min_area2,
            "aborted": self.aborted,
            "message": self.message,
        }


def _series(masses: MassTriple, y: np.ndarray) -> dict:
    """Per-sample invariants and distances for an (n, 24) array of states."""
    w = masses.as_array()
    q = y[:, :12].reshape(-1, 3, 4)
    p = y[:, 12:].reshape(-1, 3, 4)
    L = np.einsum("nia,nib->nab", q, p)
    L = L - np.swapaxes(L, 1, 2)
    T = 0.5 * np.sum(p * p / w[None, :, None], axis=(1, 2))
    V = np.zeros(len(y))
    dist = np.empty((len(y), 3))
    pd = np.empty((len(y), 3))
    for n, (i, j) in enumerate(PAIRS):
        d = np.linalg.norm(q[:, j] - q[:, i], axis=1)
        dist[:, n] = d
        V -= w[i] * w[j] / d
        mu_red = w[i] * w[j] / (w[i] + w[j])
        rel_p = mu_red * (p[:, j] / w[j] - p[:, i] / w[i])
        pd[:, n] = np.linalg.norm(rel_p, axis=1) * d
    # Jacobi vectors for the (1, 2) pairing; |q ^ Q| is twice the area
    qj = q[:, 1] - q[:, 0]
    Qj = q[:, 2] - (w[0] * q[:, 0] + w[1] * q[:, 1]) / (w[0] + w[1])
    wedge = (np.sum(qj * qj, 1) * np.sum(Qj * Qj, 1) - np.sum(qj * Qj, 1) ** 2)
    ell2 = 0.5 * np.sum(L * L, axis=(1, 2))
    pf = L[:, 0, 1] * L[:, 2, 3] - L[:, 0, 2] * L[:, 1, 3] + L[:, 0, 3] * L[:, 1, 2]
    return {"L": L, "H": T + V, "dist": dist, "pd": pd, "wedge": np.maximum(wedge, 0.0),
            "ell2": ell2, "pf": pf}


def integrate(state: PhaseState, t_end: float, tol: float = 1e-10,
              samples_per_period: int = SAMPLES_PER_PERIOD, period: float | None = None,
              collision_factor: float = COLLISION_FACTOR) -> TrajectoryReport:
    """Integrate Newton's equations with an eighth-order adaptive scheme (DOP853).

    Samples are taken on a uniform grid from the dense output.  A close
    approach below ``collision_factor`` times the initial length scale, or a
    solver failure, stops the run and returns the partial report.
    """
    if not (TOL_RANGE[0] <= tol <= TOL_RANGE[1]):
        raise DomainError(f"tol={tol!r} outside [{TOL_RANGE[0]}, {TOL_RANGE[1]}]")
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    masses = state.masses
    w = masses.as_array()
    if period is None:
        period = natural_period(state)
    y0 = state.flat()
    qscale = max(float(np.max(np.abs(state.q))), 1e-300)
    pscale = float(np.max(np.abs(state.p)))
    if pscale == 0.0:
        pscale = float(w.max()) * math.sqrt(masses.M / qscale)
    local = LOCAL_TOL_FACTOR * tol
    atol = np.concatenate([np.full(12, local * qscale), np.full(12, local * pscale)])
    r_min = collision_factor * length_scale(state)
    if _min_distance(state.q) <= r_min:
        raise CollisionError("initial state is already a collision")

    def rhs(_t, y):
        q = y[:12].reshape(3, 4)
        p = y[12:].reshape(3, 4)
        acc = _accel(w, q)
        return np.concatenate([(p / w[:, None]).ravel(), (acc * w[:, None]).ravel()])

    def close_approach(_t, y):
        return _min_distance(y[:12].reshape(3, 4)) - r_min

    close_approach.terminal = True

    n = max(int(math.ceil(samples_per_period * t_end / period)), 2)
    t_eval = np.linspace(0.0, t_end, n + 1)
    aborted, message = False, ""
    try:
        sol = solve_ivp(rhs, (0.0, t_end), y0, method="DOP853", t_eval=t_eval,
                        rtol=local, atol=atol, events=close_approach)
        t, Y = sol.t, sol.y.T
        if sol.status == 1:
            aborted, message = True, f"close approach at t={sol.t_events[0][0]:.6g}"
            te, ye = sol.t_events[0][0], sol.y_events[0][0]
            if not len(t) or te > t[-1]:
                t, Y = np.append(t, te), np.vstack([Y, ye])
        elif sol.status < 0:
            aborted, message = True, sol.message
    except CollisionError as exc:
        t, Y = np.array([0.0]), y0[None, :]
        aborted, message = True, str(exc)
    if not len(t) or t[0] != 0.0:
        t, Y = np.concatenate([[0.0], t]), np.vstack([y0, Y])

    s = _series(masses, Y)
    H0, L0 = s["H"][0], s["L"][0]
    ell0 = math.sqrt(s["ell2"][0])
    ref = ell0 if ell0 > 0 else 1.0
    dL = np.array([np.max(np.abs(s["L"][:, a, b] - L0[a, b])) / ref for a, b in L_ENTRIES])
    return TrajectoryReport(
        masses=masses, t=t, y=Y, H0=float(H0), L0=L0,
        drift_H=float(np.max(np.abs(s["H"] - H0)) / abs(H0)),
        drift_L=dL,
        drift_ell2=float(np.max(np.abs(s["ell2"] - s["ell2"][0])) / (ref * ref)),
        drift_pf=float(np.max(np.abs(np.abs(s["pf"]) - abs(s["pf"][0]))) / (ref * ref)),
        min_dist=s["dist"].min(axis=0),
        min_area2=float(np.min(s["wedge"])) / 4.0,
        min_pd=s["pd"].min(axis=0),
        tol=tol, period=period, aborted=aborted, message=message,
    )


def rotating_positions(eq: BalancedEquilibrium, t, theta1: float = 0.0,
                       theta2: float = 0.0) -> np.ndarray:
    """exp(Omega t) xi for the embedded equilibrium, shape (len(t), 3, 4)."""
    return np.array([embed_R4(eq, theta1 + eq.omega1 * s, theta2 + eq.omega2 * s).q
                     for s in np.atleast_1d(t)])


@dataclass
class SyzygyReport:
    min_area2: float
    min_wedge: float


def syzygy_monitor(report: TrajectoryReport) -> SyzygyReport:
    """Smallest squared area, and smallest |q ^ Q|**2 of the Jacobi vectors, over the samples."""
    s = _series(report.masses, report.y)
    mw = float(np.min(s["wedge"]))
    return SyzygyReport(mw / 4.0, mw)


@dataclass
class CollisionBoundReport:
    d_L: float
    slack: np.ndarray         # min over samples of |p| d - d_L, per pairing in PAIRS
    vacuous: bool

    @property
    def worst(self) -> float:
        return float(np.min(self.slack))


def collision_bound_check(report: TrajectoryReport, L=None) -> CollisionBoundReport:
    """Check |p| d_ij >= d_L = min(mu1, mu2) for all three inner pairs.

    A rank-2 momentum has d_L = 0 and the bound says nothing; that case is flagged.
    """
    inv = momentum_invariants(report.L0 if L is None else L)
    d_L = inv.mu2 if inv.rank == 4 else 0.0
    return CollisionBoundReport(d_L, report.min_pd - d_L, inv.rank < 4)


# -- perturbations at fixed angular momentum --

def _constraints(w: np.ndarray, q: np.ndarray, p: np.ndarray):
    """Values and Jacobian in (q, p) of (L entries, total momentum, centre of mass)."""
    F = np.zeros(14)
    J = np.zeros((14, 24))
    for r, (a, b) in enumerate(L_ENTRIES):
        F[r] = float(q[:, a] @ p[:, b] - q[:, b] @ p[:, a])
        for i in range(3):
            J[r, 4 * i + a] += p[i, b]
            J[r, 4 * i + b] -= p[i, a]
            J[r, 12 + 4 * i + b] += q[i, a]
            J[r, 12 + 4 * i + a] -= q[i, b]
    for c in range(4):
        F[6 + c] = float(p[:, c].sum())
        J[6 + c, 12 + c::4] = 1.0
        F[10 + c] = float(w @ q[:, c])
        J[10 + c, c:12:4] = w
    return F, J


def correct_state(masses: MassTriple, q: np.ndarray, p: np.ndarray, L_target: np.ndarray,
                  rtol: float = 1e-12, max_iter: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Smallest (scaled) change of (q, p) giving angular momentum ``L_target``,
    zero total momentum and the centre of mass at the origin.

    Positions must move as well as momenta: with the centre of mass fixed the
    bodies span a 2-plane W, and no choice of momenta alone changes the part
    of L acting on the orthogonal complement of W.
    """
    w = masses.as_array()
    qs = max(float(np.max(np.abs(q))), 1e-300)
    ps = max(float(np.max(np.abs(p))), 1e-300)
    scale = np.concatenate([np.full(12, qs), np.full(12, ps)])
    target = np.concatenate([[L_target[a, b] for a, b in L_ENTRIES], np.zeros(8)])
    norm = max(math.sqrt(0.5 * float(np.sum(L_target * L_target))), 1e-300)
    tolv = rtol * np.concatenate([np.full(10, norm), np.full(4, qs * float(w.sum()))])
    x = np.concatenate([q.ravel(), p.ravel()])
    for _ in range(max_iter):
        F, J = _constraints(w, x[:12].reshape(3, 4), x[12:].reshape(3, 4))
        r = target - F
        if np.all(np.abs(r) <= tolv):
            break
        x += scale * np.linalg.lstsq(J * scale[None, :], r, rcond=None)[0]
    else:
        F, _ = _constraints(w, x[:12].reshape(3, 4), x[12:].reshape(3, 4))
        if np.any(np.abs(target - F) > tolv):
            raise ArithmeticError("momentum projection did not converge")
    return x[:12].reshape(3, 4).copy(), x[12:].reshape(3, 4).copy()


def perturbed_state(state: PhaseState, eps: float, rng: np.random.Generator) -> PhaseState:
    """Random relative perturbation of size ``eps`` keeping L, the centre of mass and total momentum."""
    q = state.q + eps * np.max(np.abs(state.q)) * rng.standard_normal(state.q.shape)
    p = state.p + eps * np.max(np.abs(state.p)) * rng.standard_normal(state.p.shape)
    L0 = angular_momentum_bodies(state)
    q, p = correct_state(state.masses, q, p, L0)
    return PhaseState(state.masses, q, p)


@dataclass
class TrialResult:
    index: int
    shape_deviation: float
    H_excursion: float
    distance_ratio: tuple[float, float]
    bounded: bool
    aborted: bool
    drift_H: float
    drift_L: float
    message: str = ""


@dataclass
class StabilityReport:
    trials: list = field(default_factory=list)
    eps: float = 0.0
    periods: float = 0.0
    seed: int = 0

    @property
    def max_shape_deviation(self) -> float:
        return max((t.shape_deviation for t in self.trials), default=0.0)

    @property
    def max_H_excursion(self) -> float:
        return max((t.H_excursion for t in self.trials), default=0.0)

    @property
    def bounded(self) -> bool:
        return all(t.bounded for t in self.trials)

    @property
    def failed(self) -> int:
        return sum(t.aborted for t in self.trials)


def _shape_series(q: np.ndarray) -> np.ndarray:
    """Squared distances (a, b, c) = (d23**2, d13**2, d12**2) per sample."""
    return np.stack([np.sum((q[:, 1] - q[:, 2]) ** 2, 1), np.sum((q[:, 0] - q[:, 2]) ** 2, 1),
                     np.sum((q[:, 0] - q[:, 1]) ** 2, 1)], axis=1)


def _run_trial(args) -> TrialResult:
    index, seed_state, ref, H_eq, t_end, tol, period, samples = args
    rep = integrate(seed_state, t_end, tol, samples_per_period=samples, period=period)
    abc = _shape_series(rep.q)
    dev = float(np.max(np.abs(abc - ref) / ref))
    ratio = np.sqrt(abc / ref)
    H = _series(rep.masses, rep.y)["H"]
    lo, hi = float(ratio.min()), float(ratio.max())
    bounded = (not rep.aborted) and lo >= 0.5 and hi <= 2.0
    return TrialResult(index, dev, float(np.max(np.abs(H - H_eq)) / abs(H_eq)), (lo, hi),
                       bounded, rep.aborted, rep.drift_H, rep.max_drift_L, rep.message)


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, max(int(cap), 1))
    return max(n, 1)


def stability_probe(eq: BalancedEquilibrium, eps: float = 1e-4, periods: float = 50.0,
                    trials: int = 20, seed: int = 0, tol: float = 1e-11,
                    samples_per_period: int = 16, workers: int | None = 1) -> StabilityReport:
    """Integrate ``trials`` perturbations of an equilibrium and check that the shape stays near it.

    Deviations are measured on the squared distances relative to the
    equilibrium values; a trial is bounded when every distance stays within
    a factor of two.  Perturbations are drawn up front, so the report does
    not depend on the number of workers.
    """
    if not (0 <= eps <= 1e-2):
        raise DomainError("eps must lie in [0, 1e-2]")
    base = embed_R4(eq)
    period = rotation_period(eq)
    rng = np.random.default_rng(seed)
    ref = _shape_series(base.q[None])[0]
    jobs = [(i, perturbed_state(base, eps, rng), ref, eq.energy, periods * period, tol, period,
             samples_per_period) for i in range(trials)]
    n = min(worker_count(workers), trials)
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            results = list(ex.map(_run_trial, jobs))
    else:
        results = [_run_trial(j) for j in jobs]
    return StabilityReport(sorted(results, key=lambda r: r.index), eps, periods, seed)
