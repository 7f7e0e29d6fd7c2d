"""Numerical flow integration, period detection, and the energy-period
dependence and obstruction tests.

Integration uses the Dormand-Prince 5(4) embedded pair with dense
output (scipy's RK45).  Period detection works with the full
phase-space return to the seed point, so quasi-periodic orbits report
no period instead of aliasing; the first re-entry into an eps-ball is
refined by golden-section minimization of the distance along the dense
solution.

The period of a flow is a diffeomorphism invariant, and on a connected
family of periodic orbits the period depends on the energy alone; the
obstruction test compares observed period sets of two systems and can
certify, never refute, inequivalence.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, PoleError, RootFindError
from .expr import Chart, RationalFunction
from .geom import DifferentialForm, VectorField, differential, interior_product


def _polynomial_source(poly, chart: Chart, constant_values):
    dim = chart.dimension
    pieces = []
    for exps in sorted(poly.terms):
        coeff = float(poly.terms[exps])
        factors = []
        for axis, e in enumerate(exps):
            if e == 0:
                continue
            if axis < dim:
                factors.append(f"y[{axis}]" if e == 1 else f"y[{axis}]**{e}")
            else:
                name = chart.variables[axis]
                if constant_values is None or name not in constant_values:
                    raise ValueError(f"no numeric value supplied for constant {name!r}")
                coeff *= float(constant_values[name]) ** e
        term = repr(coeff)
        if factors:
            term += "*" + "*".join(factors)
        pieces.append(term)
    return "(" + " + ".join(pieces) + ")" if pieces else "0.0"


def compile_scalar(f: RationalFunction, constant_values=None):
    """Compile a rational function to a fast float callable of the state."""
    chart = f.chart
    num_src = _polynomial_source(f.num, chart, constant_values)
    if len(f.den.terms) == 1 and sum(next(iter(f.den.terms))) == 0:
        body = num_src
    else:
        body = f"({num_src})/({_polynomial_source(f.den, chart, constant_values)})"
    namespace = {}
    exec(f"def _scalar(y):\n    return {body}\n", namespace)
    return namespace["_scalar"]


def compile_field(field: VectorField, constant_values=None):
    """Compile a vector field to an ODE right-hand side f(t, y) -> list."""
    chart = field.chart
    bodies = []
    for comp in field.components:
        num_src = _polynomial_source(comp.num, chart, constant_values)
        if len(comp.den.terms) == 1 and sum(next(iter(comp.den.terms))) == 0:
            bodies.append(num_src)
        else:
            bodies.append(f"({num_src})/({_polynomial_source(comp.den, chart, constant_values)})")
    src = "def _rhs(t, y):\n    return [" + ", ".join(bodies) + "]\n"
    namespace = {}
    exec(src, namespace)
    return namespace["_rhs"]


class FlowSystem:
    """A flow on an even-dimensional chart ordered (q_1..q_n, p_1..p_n).

    When only a Hamiltonian is given, the field is derived as
    q̇_k = ∂H/∂p_k, ṗ_k = −∂H/∂q_k and the identity i_field(Σ dq_k∧dp_k)
    = dH is verified symbolically at construction.  A user-supplied
    field may be non-Hamiltonian; the Hamiltonian, if present, is then
    only used for energy bookkeeping.
    """

    def __init__(
        self,
        chart: Chart,
        hamiltonian: RationalFunction | None = None,
        field: VectorField | None = None,
        constant_values=None,
    ):
        if chart.dimension % 2 != 0:
            raise ValueError("flow systems need an even-dimensional chart")
        if hamiltonian is None and field is None:
            raise ValueError("need a Hamiltonian or an explicit field")
        self.chart = chart
        self.hamiltonian = hamiltonian
        self.constant_values = dict(constant_values or {})
        n = chart.dimension // 2
        if field is None:
            comps = [hamiltonian.derivative(n + k) for k in range(n)]
            comps += [-hamiltonian.derivative(k) for k in range(n)]
            field = VectorField(chart, comps)
            canonical = DifferentialForm(
                chart, 2, {(k, n + k): chart.one() for k in range(n)}
            )
            residual = interior_product(field, canonical) - differential(hamiltonian)
            if not residual.is_zero:
                raise AssertionError("derived field fails the canonical contraction check")
        else:
            if field.chart != chart:
                raise ValueError("field lives on a different chart")
        self.field = field
        self._rhs = compile_field(field, self.constant_values)
        self._energy = (
            compile_scalar(hamiltonian, self.constant_values) if hamiltonian is not None else None
        )

    def energy(self, state) -> float | None:
        if self._energy is None:
            return None
        return float(self._energy(np.asarray(state, dtype=float)))

    def rhs(self, t, y):
        return self._rhs(t, y)


@dataclass
class Trajectory:
    """Dense solution of one integration, with energy-drift monitoring."""

    system: FlowSystem
    t_start: float
    t_end: float
    solution: object
    step_times: np.ndarray
    step_states: np.ndarray
    initial_energy: float | None
    max_energy_drift: float | None

    def state_at(self, t):
        return np.asarray(self.solution(t), dtype=float)

    @property
    def final_state(self):
        return self.step_states[:, -1]


def integrate(
    system: FlowSystem,
    x0,
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    t_start: float = 0.0,
) -> Trajectory:
    """Integrate the flow with the adaptive Dormand-Prince 5(4) pair.

    Dense output is always kept; the trajectory records the maximum
    energy drift |H(x(t)) − H(x0)| over the solver steps and a refining
    sample grid.
    """
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    x0 = np.asarray(x0, dtype=float)
    try:
        result = solve_ivp(
            system.rhs,
            (t_start, t_end),
            x0,
            method="RK45",
            rtol=rtol,
            atol=atol,
            dense_output=True,
        )
    except ZeroDivisionError as exc:
        raise PoleError(f"flow hit a pole: {exc}") from exc
    if not result.success:
        raise IntegrationError(result.message)
    initial_energy = system.energy(x0)
    max_drift = None
    if initial_energy is not None:
        ts = np.linspace(t_start, t_end, max(64, 4 * len(result.t)))
        states = result.sol(ts)
        energies = [system.energy(states[:, i]) for i in range(states.shape[1])]
        max_drift = float(max(abs(e - initial_energy) for e in energies))
    return Trajectory(
        system=system,
        t_start=t_start,
        t_end=t_end,
        solution=result.sol,
        step_times=result.t,
        step_states=result.y,
        initial_energy=initial_energy,
        max_energy_drift=max_drift,
    )


@dataclass
class PeriodDetection:
    """Result of the return-time search for one seed point."""

    periodic: bool
    period: float | None
    min_distance: float | None
    ambiguous: bool
    reason: str | None
    max_energy_drift: float | None


def _golden_minimize(f, a, b, tol):
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - ratio * (b - a)
    x2 = a + ratio * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - ratio * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + ratio * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def detect_period(
    system: FlowSystem,
    x0,
    eps: float = 1e-6,
    t_max: float = 1e3,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    initial_chunk: float = 8.0,
    max_chunk: float = 64.0,
    sample_spacing: float = 1.0 / 128.0,
) -> PeriodDetection:
    """Find the first full phase-space return of the orbit through x0.

    The orbit must first leave the eps-ball around the seed; the first
    subsequent local minimum of |x(t) − x0| that refines (by
    golden-section search on the dense output) to a distance ≤ eps is
    reported as the period, with time resolution eps/1000.  A refined
    minimum in (eps/10, eps] sets the ``ambiguous`` flag.  Quasi-periodic
    or escaping orbits report ``periodic=False``.
    """
    if eps <= 0 or t_max <= 0:
        raise ValueError("eps and t_max must be positive")
    x0 = np.asarray(x0, dtype=float)
    left_ball = False
    max_drift = 0.0
    initial_energy = system.energy(x0)
    time_tol = eps * 1e-3
    dt = sample_spacing
    chunk = initial_chunk

    start = 0.0
    state = x0
    while start < t_max:
        stop = min(start + chunk, t_max)
        chunk = min(2.0 * chunk, max_chunk)
        trajectory = integrate(system, state, stop, rtol=rtol, atol=atol, t_start=start)
        if trajectory.max_energy_drift is not None:
            max_drift = max(max_drift, trajectory.max_energy_drift)
        count = max(16, int(round((stop - start) / dt)))
        ts = np.linspace(start, stop, count)
        states = trajectory.solution(ts)
        dists = np.sqrt(np.sum((states - x0[:, None]) ** 2, axis=0))

        def distance(t, sol=trajectory.solution):
            return float(np.linalg.norm(np.asarray(sol(t)) - x0))

        for i in range(1, len(ts) - 1):
            if not left_ball:
                if dists[i] > eps:
                    left_ball = True
                continue
            if dists[i] <= dists[i - 1] and dists[i] <= dists[i + 1]:
                t_best, d_best = _golden_minimize(
                    distance, float(ts[i - 1]), float(ts[i + 1]), time_tol
                )
                if d_best <= eps:
                    return PeriodDetection(
                        periodic=True,
                        period=float(t_best),
                        min_distance=float(d_best),
                        ambiguous=d_best > eps / 10.0,
                        reason=None,
                        max_energy_drift=max_drift if initial_energy is not None else None,
                    )
        if stop >= t_max:
            break
        # restart slightly before the chunk end so boundary minima fall in the
        # interior of the next scan window
        start = stop - 2.0 * dt
        state = trajectory.state_at(start)
    reason = "orbit never left the eps-ball" if not left_ball else "no return within t_max"
    return PeriodDetection(
        periodic=False,
        period=None,
        min_distance=None,
        ambiguous=False,
        reason=reason,
        max_energy_drift=max_drift if initial_energy is not None else None,
    )


@dataclass
class PeriodRecord:
    """One (seed, energy, period) sample."""

    seed: tuple
    level: float
    energy: float
    period: float | None
    converged: bool
    ambiguous: bool
    drift: float | None


@dataclass
class PeriodTable:
    """Sampled period data, ordered by (energy level, seed index)."""

    records: list
    notes: list = dataclass_field(default_factory=list)

    def levels(self):
        grouped = {}
        for record in self.records:
            grouped.setdefault(record.level, []).append(record)
        return grouped

    def converged_periods(self):
        return [r.period for r in self.records if r.converged and r.period is not None]

    def csv_rows(self, dimension):
        header = [f"seed_{i}" for i in range(dimension)] + [
            "energy", "period", "converged", "drift"
        ]
        rows = [header]
        for r in self.records:
            rows.append(
                [repr(float(x)) for x in r.seed]
                + [
                    repr(float(r.energy)),
                    "" if r.period is None else repr(float(r.period)),
                    str(r.converged).lower(),
                    "" if r.drift is None else repr(float(r.drift)),
                ]
            )
        return rows


def find_energy_point(system: FlowSystem, energy: float, rng, direction_tries: int = 8):
    """A phase-space point with H = energy, by scaling a random direction.

    One-dimensional root finding along the ray: doubling bracket, then
    bisection, then a few Newton polish steps using the directional
    derivative of H.
    """
    if system.hamiltonian is None:
        raise RootFindError("system has no Hamiltonian to match energies against")
    ham = system._energy
    dim = system.chart.dimension
    partials = [
        compile_scalar(system.hamiltonian.derivative(i), system.constant_values)
        for i in range(dim)
    ]
    for _ in range(direction_tries):
        direction = np.array([rng.gauss(0.0, 1.0) for _ in range(dim)])
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            continue
        direction /= norm

        def g(s):
            return float(ham(s * direction)) - energy

        if g(0.0) > 0.0:
            continue
        s_hi = 1.0
        doubled = 0
        while g(s_hi) < 0.0 and doubled < 60:
            s_hi *= 2.0
            doubled += 1
        if g(s_hi) < 0.0:
            continue
        s_lo = 0.0
        for _ in range(80):
            mid = 0.5 * (s_lo + s_hi)
            if g(mid) < 0.0:
                s_lo = mid
            else:
                s_hi = mid
        s = 0.5 * (s_lo + s_hi)
        for _ in range(4):
            point = s * direction
            slope = float(sum(p(point) * d for p, d in zip(partials, direction)))
            if slope == 0.0:
                break
            step = g(s) / slope
            if not math.isfinite(step):
                break
            s -= step
        point = s * direction
        if abs(float(ham(point)) - energy) <= 1e-9 * max(1.0, abs(energy)):
            return point
    raise RootFindError(f"no phase-space point found with energy {energy}")


def period_energy_scan(
    system: FlowSystem,
    energies,
    seeds_per_energy: int,
    seed: int = 0,
    eps: float = 1e-6,
    t_max: float = 1e3,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> PeriodTable:
    """Sample periods at requested energies from seeded random directions.

    Levels where no point attains the energy are reported empty in the
    table notes rather than failing the whole scan.
    """
    rng = random.Random(seed)
    records = []
    notes = []
    for level in energies:
        for _ in range(seeds_per_energy):
            try:
                x0 = find_energy_point(system, float(level), rng)
            except RootFindError as exc:
                notes.append(f"energy {level}: {exc}")
                break
            detection = detect_period(
                system, x0, eps=eps, t_max=t_max, rtol=rtol, atol=atol
            )
            records.append(
                PeriodRecord(
                    seed=tuple(float(x) for x in x0),
                    level=float(level),
                    energy=float(system.energy(x0)),
                    period=detection.period,
                    converged=detection.periodic and not detection.ambiguous,
                    ambiguous=detection.ambiguous,
                    drift=detection.max_energy_drift,
                )
            )
    return PeriodTable(records=records, notes=notes)


@dataclass
class DependenceResult:
    """Verdict on functional dependence of period on energy."""

    dependent: bool
    violations: list
    insufficient_sampling: bool
    level_spreads: dict

    def to_dict(self):
        return {
            "dependent": self.dependent,
            "insufficient_sampling": self.insufficient_sampling,
            "level_spreads": {repr(k): v for k, v in sorted(self.level_spreads.items())},
            "violations": [
                {"level": r.level, "seed": list(r.seed), "period": r.period}
                for r in self.violations
            ],
        }


def dependence_test(table: PeriodTable, rel_tol: float = 1e-6) -> DependenceResult:
    """Periods must agree across seeds on each energy level.

    ``dependent`` when every level's pairwise relative period spread is
    within rel_tol; violating records are returned.  Levels with fewer
    than two converged periods are vacuous and set the
    ``insufficient_sampling`` flag.
    """
    violations = []
    spreads = {}
    informative = False
    for level, records in sorted(table.levels().items()):
        periods = [r.period for r in records if r.converged and r.period is not None]
        if len(periods) < 2:
            continue
        informative = True
        spread = (max(periods) - min(periods)) / max(abs(max(periods)), 1e-300)
        spreads[level] = spread
        if spread > rel_tol:
            violations.extend(r for r in records if r.converged)
    return DependenceResult(
        dependent=not violations,
        violations=violations,
        insufficient_sampling=not informative,
        level_spreads=spreads,
    )


@dataclass
class ObstructionResult:
    """One-sided verdict: period data can obstruct equivalence, not prove it."""

    obstructed: bool
    reason: str | None

    def to_dict(self):
        return {"obstructed": self.obstructed, "reason": self.reason}


def equivalence_obstruction(
    a: PeriodTable, b: PeriodTable, rel_tol: float = 1e-4
) -> ObstructionResult:
    """Compare observed period sets of two systems.

    Obstructed when one system's periods are constant (within rel_tol)
    while the other's spread beyond it, or when the observed period
    ranges are disjoint beyond tolerance.  Anything else is
    inconclusive: equal period data never certifies equivalence.
    """
    for name, table in (("first", a), ("second", b)):
        result = dependence_test(table, rel_tol=rel_tol)
        if not result.dependent:
            raise ValueError(f"{name} table fails the energy-period dependence test")
    periods_a = a.converged_periods()
    periods_b = b.converged_periods()
    if not periods_a or not periods_b:
        return ObstructionResult(obstructed=False, reason="insufficient period data")

    def spread(values):
        return (max(values) - min(values)) / max(abs(max(values)), 1e-300)

    constant_a = spread(periods_a) <= rel_tol
    constant_b = spread(periods_b) <= rel_tol
    if constant_a != constant_b:
        return ObstructionResult(
            obstructed=True, reason="constant vs energy-dependent period"
        )
    pad_a = rel_tol * max(abs(max(periods_a)), abs(min(periods_a)))
    pad_b = rel_tol * max(abs(max(periods_b)), abs(min(periods_b)))
    if max(periods_a) + pad_a < min(periods_b) - pad_b or max(periods_b) + pad_b < min(
        periods_a
    ) - pad_a:
        return ObstructionResult(obstructed=True, reason="disjoint period ranges")
    return ObstructionResult(obstructed=False, reason=None)
