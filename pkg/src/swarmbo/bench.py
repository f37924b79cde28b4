"""Synthetic benchmark objectives, baseline optimizers and the repeated-trial
experiment harness with MAX/MIN/AVE reporting.

Every method in one experiment consumes exactly the same number of objective
evaluations (budget parity is asserted in the report).
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .acquisition import AcquisitionSpec
from .boloop import BoConfig, BoResult, component_rng, run_bo
from .pso import PsoParams, StabilityError, check_stability
from .space import (
    Dimension,
    DimensionMismatchError,
    INTEGER,
    REAL,
    SearchSpace,
    clamp,
    materialize,
    sample_uniform,
)

log = logging.getLogger(__name__)

PSO_BO = "pso_bo"
LOCAL_BO = "local_bo"
RANDOM_SEARCH = "random_search"
GRID_SEARCH = "grid_search"

GRID_CAP = 10**6


class GridTooLargeError(ValueError):
    pass


class InvalidMethodParamsError(ValueError):
    pass


class StabilityViolationError(StabilityError):
    def __init__(self, omega):
        super().__init__(f"omega={omega} violates the PSO stability region")
        self.omega = omega


# ---------------------------------------------------------------------------
# objectives

def _sphere(x):
    return float(np.sum(x * x))


def _rastrigin(x):
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def _branin(x):
    a, b, c = 1.0, 5.1 / (4.0 * np.pi**2), 5.0 / np.pi
    r, s, t = 6.0, 10.0, 1.0 / (8.0 * np.pi)
    return float(a * (x[1] - b * x[0] ** 2 + c * x[0] - r) ** 2 + s * (1 - t) * np.cos(x[0]) + s)


_H3_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_H3_A = np.array([[3.0, 10, 30], [0.1, 10, 35], [3.0, 10, 30], [0.1, 10, 35]])
_H3_P = np.array([
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
])


def _hartmann3(x):
    inner = np.sum(_H3_A * (x - _H3_P) ** 2, axis=1)
    return float(-np.sum(_H3_ALPHA * np.exp(-inner)))


def _styblinski_tang(x):
    return float(0.5 * np.sum(x**4 - 16.0 * x**2 + 5.0 * x))


# name -> (function, fixed arity or None, per-dim canonical bounds)
_OBJECTIVES = {
    "sphere": (_sphere, None, [(-5.0, 5.0)]),
    "rastrigin": (_rastrigin, None, [(-5.12, 5.12)]),
    "branin": (_branin, 2, [(-5.0, 10.0), (0.0, 15.0)]),
    "hartmann3": (_hartmann3, 3, [(0.0, 1.0)] * 3),
    "styblinski_tang": (_styblinski_tang, None, [(-5.0, 5.0)]),
}

OBJECTIVE_NAMES = tuple(_OBJECTIVES)


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dims: int = 2
    noise_std: float = 0.0
    negate: bool = False  # maximize -f for minimization benchmarks

    def __post_init__(self):
        if self.name not in _OBJECTIVES:
            raise ValueError(f"unknown objective {self.name!r}; choose from {OBJECTIVE_NAMES}")
        arity = _OBJECTIVES[self.name][1]
        if arity is not None and self.dims != arity:
            raise ValueError(f"{self.name} requires dims={arity}, got {self.dims}")
        if self.dims < 1:
            raise ValueError("dims must be at least 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")


def default_space(spec: ObjectiveSpec) -> SearchSpace:
    """Canonical box bounds for the named benchmark."""
    bounds = _OBJECTIVES[spec.name][2]
    if len(bounds) == 1:
        bounds = bounds * spec.dims
    return SearchSpace(
        Dimension(f"x{j}", REAL, lo, hi) for j, (lo, hi) in enumerate(bounds)
    )


def eval_objective(spec: ObjectiveSpec, x, rng: np.random.Generator | None = None) -> float:
    """Evaluate (±)f(x) plus Gaussian observation noise."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dims,):
        raise DimensionMismatchError(spec.dims, x.shape[-1] if x.ndim else 0)
    v = _OBJECTIVES[spec.name][0](x)
    if spec.negate:
        v = -v
    if spec.noise_std > 0:
        if rng is None:
            raise ValueError("noisy objective needs an rng")
        v += spec.noise_std * float(rng.standard_normal())
    return v


def make_objective(spec: ObjectiveSpec, seed: int):
    """Seeded callable wrapping eval_objective; noise stream derives from the seed."""
    rng = component_rng(seed, "noise") if spec.noise_std > 0 else None
    return lambda x: eval_objective(spec, x, rng)


# ---------------------------------------------------------------------------
# baselines

@dataclass(frozen=True)
class MethodSpec:
    kind: str
    pso: PsoParams | None = None  # PSO_BO only; None -> shared defaults
    restarts: int = 10  # LOCAL_BO
    max_steps: int = 200  # LOCAL_BO
    points_per_dim: int = 10  # GRID_SEARCH

    def __post_init__(self):
        if self.kind not in (PSO_BO, LOCAL_BO, RANDOM_SEARCH, GRID_SEARCH):
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.kind == LOCAL_BO and self.restarts < 1:
            raise InvalidMethodParamsError("local_bo needs at least one restart")
        if self.kind == GRID_SEARCH and self.points_per_dim < 2:
            raise InvalidMethodParamsError("grid_search needs points_per_dim >= 2")


def local_ascent(space: SearchSpace, surface, rng: np.random.Generator,
                 restarts: int = 10, max_steps: int = 200) -> np.ndarray:
    """Multi-start projected gradient ascent with central finite differences.

    Stand-in for gradient-based acquisition maximizers; the surface must
    accept an (n, d) batch and return (n,) values.
    """
    if restarts < 1:
        raise InvalidMethodParamsError("restarts must be at least 1")
    d = space.dim
    h = 1e-6 * space.ranges
    eye = np.eye(d)
    best_x, best_v = None, -np.inf
    for _ in range(restarts):
        x = sample_uniform(space, rng)
        v = float(surface(x[None])[0])
        step = 0.1
        for _ in range(max_steps):
            probes = np.concatenate([x + h * eye, x - h * eye])
            vals = np.asarray(surface(probes))
            grad = (vals[:d] - vals[d:]) / (2.0 * h)
            norm = float(np.linalg.norm(grad))
            if norm == 0.0 or not np.isfinite(norm):
                break
            direction = grad / norm
            moved = False
            while step > 1e-10:
                cand = clamp(space, x + step * space.ranges * direction)
                cv = float(surface(cand[None])[0])
                if cv > v:
                    x, v = cand, cv
                    step = min(step * 1.5, 0.5)
                    moved = True
                    break
                step *= 0.5
            if not moved:
                break
        if v > best_v:
            best_x, best_v = x, v
    return best_x


def run_local_bo(config: BoConfig, objective, restarts: int = 10,
                 max_steps: int = 200) -> BoResult:
    """BO loop identical to run_bo except the acquisition maximizer."""

    def maximizer(space, surface, tag):
        return local_ascent(space, surface, component_rng(config.seed, tag),
                            restarts=restarts, max_steps=max_steps)

    return run_bo(config, objective, maximizer=maximizer)


def run_random_search(space: SearchSpace, objective, budget: int,
                      rng: np.random.Generator):
    """Uniform sampling baseline; returns (best_point, best_value, incumbent_trace)."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    best_x, best_v = None, -np.inf
    trace = []
    for _ in range(budget):
        x = materialize(space, sample_uniform(space, rng))
        v = float(objective(x))
        if v > best_v:
            best_x, best_v = x, v
        trace.append(best_v)
    return best_x, best_v, np.array(trace)


def grid_points(space: SearchSpace, points_per_dim: int, cap: int = GRID_CAP):
    """Deterministic Cartesian lattice; integer dims use their own (coarser) lattice."""
    axes = []
    for d in space.dims:
        if d.kind == INTEGER:
            lo, hi = math.ceil(d.lower), math.floor(d.upper)
            n_int = hi - lo + 1
            if n_int <= points_per_dim:
                axes.append(np.arange(lo, hi + 1, dtype=float))
                continue
        axes.append(np.linspace(d.lower, d.upper, points_per_dim))
    total = int(np.prod([len(a) for a in axes]))
    if total > cap:
        raise GridTooLargeError(f"grid of {total} points exceeds cap {cap}")
    for combo in itertools.product(*axes):
        yield np.array(combo)


def run_grid_search(space: SearchSpace, objective, points_per_dim: int,
                    cap: int = GRID_CAP):
    """Exhaustive lattice baseline; returns (best_point, best_value, incumbent_trace)."""
    best_x, best_v = None, -np.inf
    trace = []
    for x in grid_points(space, points_per_dim, cap=cap):
        x = materialize(space, x)
        v = float(objective(x))
        if v > best_v:
            best_x, best_v = x, v
        trace.append(best_v)
    return best_x, best_v, np.array(trace)


# ---------------------------------------------------------------------------
# experiment harness

@dataclass(frozen=True)
class CellResult:
    best_point: np.ndarray
    best_value: float
    trace: np.ndarray
    n_evaluations: int


@dataclass
class MethodReport:
    kind: str
    per_seed_best: dict[int, float]
    eval_counts: dict[int, int]
    traces: dict[int, np.ndarray] = field(repr=False, default_factory=dict)
    missing_seeds: list[int] = field(default_factory=list)

    @property
    def max(self) -> float:
        return max(self.per_seed_best.values())

    @property
    def min(self) -> float:
        return min(self.per_seed_best.values())

    @property
    def ave(self) -> float:
        vals = list(self.per_seed_best.values())
        return sum(vals) / len(vals)


@dataclass
class ExperimentReport:
    objective: ObjectiveSpec
    seeds: list[int]
    budget: int
    methods: list[MethodReport]

    def assert_budget_parity(self):
        counts = {n for m in self.methods for n in m.eval_counts.values()}
        if len(counts) > 1:
            raise AssertionError(f"objective-evaluation counts differ across methods: {sorted(counts)}")


class _CountingObjective:
    def __init__(self, fn):
        self.fn = fn
        self.count = 0

    def __call__(self, x):
        self.count += 1
        return self.fn(x)


def run_method_cell(method: MethodSpec, objective_spec: ObjectiveSpec,
                    space: SearchSpace, seed: int, budget: int,
                    acquisition: AcquisitionSpec = AcquisitionSpec(),
                    pso: PsoParams = PsoParams(),
                    init_count: int = 5,
                    noise_var: float | None = None) -> CellResult:
    """Run one (method, seed) cell with exactly `budget` objective evaluations."""
    objective = _CountingObjective(make_objective(objective_spec, seed))
    if method.kind in (PSO_BO, LOCAL_BO):
        if budget <= init_count:
            raise ValueError("budget must exceed the initial-design size")
        config = BoConfig(
            space=space,
            acquisition=acquisition,
            pso=method.pso or pso,
            init_count=init_count,
            iterations=budget - init_count,
            seed=seed,
            noise_var=noise_var,
        )
        if method.kind == PSO_BO:
            result = run_bo(config, objective)
        else:
            result = run_local_bo(config, objective,
                                  restarts=method.restarts, max_steps=method.max_steps)
        return CellResult(result.best_point, result.best_value,
                          result.incumbent_trace, objective.count)
    if method.kind == RANDOM_SEARCH:
        x, v, trace = run_random_search(space, objective, budget,
                                        component_rng(seed, "random_search"))
        return CellResult(x, v, trace, objective.count)

    # grid search, adapted for budget parity: lattice points in deterministic
    # order truncated to the budget, padded with uniform draws if the lattice
    # is smaller than the budget
    pts = itertools.islice(grid_points(space, method.points_per_dim), budget)
    best_x, best_v, trace = None, -np.inf, []
    n = 0
    for x in pts:
        x = materialize(space, x)
        v = float(objective(x))
        if v > best_v:
            best_x, best_v = x, v
        trace.append(best_v)
        n += 1
    pad_rng = component_rng(seed, "grid_pad")
    for _ in range(budget - n):
        x = materialize(space, sample_uniform(space, pad_rng))
        v = float(objective(x))
        if v > best_v:
            best_x, best_v = x, v
        trace.append(best_v)
    return CellResult(best_x, best_v, np.array(trace), objective.count)


def run_experiment(methods: list[MethodSpec], objective_spec: ObjectiveSpec,
                   seeds: list[int], budget: int,
                   space: SearchSpace | None = None,
                   acquisition: AcquisitionSpec = AcquisitionSpec(),
                   pso: PsoParams = PsoParams(),
                   init_count: int = 5,
                   noise_var: float | None = None,
                   executor=None) -> ExperimentReport:
    """Run every method on every seed with identical budgets and aggregate.

    A failed (method, seed) cell is recorded as missing with a warning, never
    silently averaged. `executor`, if given, must provide a map() over the
    independent cells (results are order-independent by construction).
    """
    if not methods:
        raise ValueError("need at least one method")
    if len(seeds) < 2:
        raise ValueError("need at least two seeds")
    if space is None:
        space = default_space(objective_spec)

    cells = [(m, s) for m in methods for s in seeds]

    def run_cell(cell):
        method, seed = cell
        try:
            return run_method_cell(method, objective_spec, space, seed, budget,
                                   acquisition=acquisition, pso=pso,
                                   init_count=init_count, noise_var=noise_var)
        except Exception as exc:
            log.warning("cell (%s, seed=%d) failed: %s", method.kind, seed, exc)
            return exc

    mapper = executor.map if executor is not None else map
    results = dict(zip(cells, mapper(run_cell, cells)))

    reports = []
    for method in methods:
        per_seed, counts, traces, missing = {}, {}, {}, []
        for seed in sorted(seeds):
            res = results[(method, seed)]
            if isinstance(res, Exception):
                missing.append(seed)
                continue
            per_seed[seed] = res.best_value
            counts[seed] = res.n_evaluations
            traces[seed] = res.trace
        reports.append(MethodReport(kind=method.kind, per_seed_best=per_seed,
                                    eval_counts=counts, traces=traces,
                                    missing_seeds=missing))
    report = ExperimentReport(objective=objective_spec, seeds=sorted(seeds),
                              budget=budget, methods=reports)
    report.assert_budget_parity()
    return report


def omega_sweep(objective_spec: ObjectiveSpec, omegas: list[float],
                seeds: list[int], budget: int,
                c1: float = 1.85, c2: float = 2.0,
                space: SearchSpace | None = None,
                acquisition: AcquisitionSpec = AcquisitionSpec(),
                init_count: int = 5,
                executor=None) -> list[tuple[float, float]]:
    """Mean final best of PSO-BO per inertia weight; all omegas validated upfront."""
    for omega in omegas:
        try:
            check_stability(PsoParams(omega=omega, c1=c1, c2=c2))
        except StabilityError as exc:
            raise StabilityViolationError(omega) from exc
    if space is None:
        space = default_space(objective_spec)

    cells = [(omega, seed) for omega in omegas for seed in seeds]

    def run_cell(cell):
        omega, seed = cell
        method = MethodSpec(PSO_BO, pso=PsoParams(omega=omega, c1=c1, c2=c2))
        return run_method_cell(method, objective_spec, space, seed, budget,
                               acquisition=acquisition, init_count=init_count).best_value

    mapper = executor.map if executor is not None else map
    bests = dict(zip(cells, mapper(run_cell, cells)))
    return [
        (omega, sum(bests[(omega, s)] for s in seeds) / len(seeds))
        for omega in omegas
    ]


# ---------------------------------------------------------------------------
# report serialization

def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "objective": asdict(report.objective),
        "seeds": report.seeds,
        "budget": report.budget,
        "methods": [
            {
                "kind": m.kind,
                "max": m.max,
                "min": m.min,
                "ave": m.ave,
                "per_seed_best": {str(s): v for s, v in m.per_seed_best.items()},
                "eval_counts": {str(s): c for s, c in m.eval_counts.items()},
                "missing_seeds": m.missing_seeds,
            }
            for m in report.methods
        ],
    }


def write_report_json(report: ExperimentReport, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_dict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_report_csv(report: ExperimentReport, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "max", "min", "ave"])
        for m in report.methods:
            writer.writerow([m.kind, repr(m.max), repr(m.min), repr(m.ave)])


def read_report_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            {"method": row["method"], "max": float(row["max"]),
             "min": float(row["min"]), "ave": float(row["ave"])}
            for row in csv.DictReader(fh)
        ]


def write_trace_csv(trace: np.ndarray, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "incumbent"])
        for i, v in enumerate(trace):
            writer.writerow([i, repr(float(v))])


def write_experiment_traces(report: ExperimentReport, out_dir):
    from pathlib import Path

    out = Path(out_dir)
    for m in report.methods:
        for seed, trace in m.traces.items():
            write_trace_csv(trace, out / f"trace_{m.kind}_{seed}.csv")
