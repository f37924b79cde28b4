"""Command-line entry point.

Subcommands:
  run      one seeded BO run -> result.json + trace.csv
  compare  repeated-trial method comparison -> report.json/report.csv + traces
  sweep    inertia-weight sweep -> sweep.csv

Each invocation is driven by one declarative YAML config; unknown keys are a
hard error. Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import socket
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import bench
from .acquisition import AcquisitionSpec
from .boloop import BoConfig, run_bo
from .gp import FitBounds
from .pso import PsoParams, StabilityError
from .space import Dimension, SearchSpace, SpaceError, validate_space

SEED_ENV_VAR = "SWARMBO_SEED"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


_TOP_KEYS = {"objective", "space", "acquisition", "pso", "gp", "bo",
             "experiment", "sweep", "seed", "output_dir"}
_SECTION_KEYS = {
    "objective": {"name", "dims", "noise_std", "negate"},
    "acquisition": {"kind", "gamma", "xi"},
    "pso": {"omega", "c1", "c2", "population", "max_iters", "vmax_fraction",
            "tol", "patience"},
    "gp": {"log_theta0", "log_lengthscale", "log_noise"},
    "bo": {"init_count", "iterations", "noise_var"},
    "experiment": {"methods", "seeds", "budget"},
    "sweep": {"omegas", "seeds", "budget", "c1", "c2"},
}
_SPACE_DIM_KEYS = {"name", "type", "lower", "upper"}
_METHOD_KEYS = {"kind", "restarts", "max_steps", "points_per_dim", "pso"}


def _check_keys(mapping, allowed, where):
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    _check_keys(raw, _TOP_KEYS, "config")
    for section, keys in _SECTION_KEYS.items():
        if section in raw and raw[section] is not None:
            _check_keys(raw[section], keys, section)
    return raw


def _parse_space(entries) -> SearchSpace:
    if not isinstance(entries, list):
        raise ConfigError("space: expected a list of dimension mappings")
    dims = []
    for i, entry in enumerate(entries):
        _check_keys(entry, _SPACE_DIM_KEYS, f"space[{i}]")
        for key in _SPACE_DIM_KEYS:
            if key not in entry:
                raise ConfigError(f"space[{i}]: missing key {key!r}")
        if entry["type"] not in ("real", "integer"):
            raise ConfigError(f"space[{i}]: type must be 'real' or 'integer'")
        dims.append(Dimension(str(entry["name"]), entry["type"],
                              float(entry["lower"]), float(entry["upper"])))
    space = SearchSpace(dims)
    validate_space(space)
    return space


def _parse_objective(raw) -> bench.ObjectiveSpec:
    if "objective" not in raw or not raw["objective"]:
        raise ConfigError("config: missing required section 'objective'")
    return bench.ObjectiveSpec(**raw["objective"])


def _parse_acquisition(raw) -> AcquisitionSpec:
    return AcquisitionSpec(**raw.get("acquisition", {}) or {})


def _parse_pso(raw) -> PsoParams:
    return PsoParams(**raw.get("pso", {}) or {})


def _parse_gp_bounds(raw) -> FitBounds:
    section = raw.get("gp", {}) or {}
    return FitBounds(**{k: tuple(v) for k, v in section.items()})


def _parse_methods(entries) -> list[bench.MethodSpec]:
    if not isinstance(entries, list) or not entries:
        raise ConfigError("experiment.methods: expected a non-empty list")
    methods = []
    for i, entry in enumerate(entries):
        _check_keys(entry, _METHOD_KEYS, f"experiment.methods[{i}]")
        if "kind" not in entry:
            raise ConfigError(f"experiment.methods[{i}]: missing key 'kind'")
        kwargs = dict(entry)
        if "pso" in kwargs and kwargs["pso"] is not None:
            _check_keys(kwargs["pso"], _SECTION_KEYS["pso"], f"experiment.methods[{i}].pso")
            kwargs["pso"] = PsoParams(**kwargs["pso"])
        methods.append(bench.MethodSpec(**kwargs))
    return methods


def resolve_seed(args, raw) -> int:
    if args.seed is not None:
        return args.seed
    if raw.get("seed") is not None:
        return int(raw["seed"])
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return 0


def _metadata() -> dict:
    return {
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "hostname": socket.gethostname(),
    }


def _output_dir(args, raw) -> Path:
    out = Path(args.output_dir or raw.get("output_dir") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _make_executor(jobs):
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1:
        return None
    return ThreadPoolExecutor(max_workers=jobs)


def cmd_run(args) -> int:
    raw = load_config(args.config)
    objective_spec = _parse_objective(raw)
    space = _parse_space(raw["space"]) if raw.get("space") else bench.default_space(objective_spec)
    bo_section = raw.get("bo", {}) or {}
    seed = resolve_seed(args, raw)
    config = BoConfig(
        space=space,
        acquisition=_parse_acquisition(raw),
        pso=_parse_pso(raw),
        init_count=int(bo_section.get("init_count", 5)),
        iterations=int(bo_section.get("iterations", 30)),
        seed=seed,
        noise_var=bo_section.get("noise_var"),
        gp_bounds=_parse_gp_bounds(raw),
    )
    result = run_bo(config, bench.make_objective(objective_spec, seed))

    out = _output_dir(args, raw)
    payload = {
        "best_point": result.best_point.tolist(),
        "best_value": result.best_value,
        "incumbent_trace": result.incumbent_trace.tolist(),
        "n_evaluations": result.n_evaluations,
        "seed": seed,
        "history": [
            {
                "point": r.point.tolist(),
                "materialized": r.materialized.tolist(),
                "y": r.y,
                "iteration": r.iteration,
                "phase": r.phase,
            }
            for r in result.history.records
        ],
        "metadata": _metadata(),
    }
    with open(out / "result.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    bench.write_trace_csv(result.incumbent_trace, out / "trace.csv")
    print(f"best_point: {result.best_point.tolist()}")
    print(f"best_value: {result.best_value}")
    return EXIT_OK


def cmd_compare(args) -> int:
    raw = load_config(args.config)
    objective_spec = _parse_objective(raw)
    section = raw.get("experiment")
    if not section:
        raise ConfigError("config: missing required section 'experiment'")
    methods = _parse_methods(section.get("methods"))
    if len(methods) < 2:
        raise ConfigError("experiment.methods: compare needs at least two methods")
    seeds = section.get("seeds")
    if not isinstance(seeds, list) or len(seeds) < 2:
        raise ConfigError("experiment.seeds: need at least two seeds")
    budget = int(section.get("budget", 35))
    space = _parse_space(raw["space"]) if raw.get("space") else None
    bo_section = raw.get("bo", {}) or {}

    executor = _make_executor(args.jobs)
    try:
        report = bench.run_experiment(
            methods, objective_spec, [int(s) for s in seeds], budget,
            space=space,
            acquisition=_parse_acquisition(raw),
            pso=_parse_pso(raw),
            init_count=int(bo_section.get("init_count", 5)),
            noise_var=bo_section.get("noise_var"),
            executor=executor,
        )
    finally:
        if executor is not None:
            executor.shutdown()

    out = _output_dir(args, raw)
    bench.write_report_json(report, out / "report.json")
    bench.write_report_csv(report, out / "report.csv")
    bench.write_experiment_traces(report, out)
    print(f"{'method':<16}{'MAX':>14}{'MIN':>14}{'AVE':>14}")
    for m in report.methods:
        print(f"{m.kind:<16}{m.max:>14.6g}{m.min:>14.6g}{m.ave:>14.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    raw = load_config(args.config)
    objective_spec = _parse_objective(raw)
    section = raw.get("sweep", {}) or {}
    omegas = [float(w) for w in section.get("omegas",
              [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    seeds = [int(s) for s in section.get("seeds", [0, 1])]
    budget = int(section.get("budget", 35))
    space = _parse_space(raw["space"]) if raw.get("space") else None
    executor = _make_executor(args.jobs)
    try:
        rows = bench.omega_sweep(
            objective_spec, omegas, seeds, budget,
            c1=float(section.get("c1", 1.85)), c2=float(section.get("c2", 2.0)),
            space=space, acquisition=_parse_acquisition(raw),
            executor=executor,
        )
    except bench.StabilityViolationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        if executor is not None:
            executor.shutdown()

    out = _output_dir(args, raw)
    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("omega,ave_best\n")
        for omega, ave in rows:
            fh.write(f"{omega!r},{ave!r}\n")
    for omega, ave in rows:
        print(f"omega={omega:.3g} ave_best={ave:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmbo",
        description="Bayesian optimization with a particle-swarm inner optimizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_text in [
        ("run", cmd_run, "one seeded BO run"),
        ("compare", cmd_compare, "repeated-trial method comparison"),
        ("sweep", cmd_sweep, "inertia-weight sweep"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the YAML run config")
        p.add_argument("--output-dir", default=None, help="artifact directory")
        p.add_argument("--seed", type=int, default=None, help="root seed override")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker pool size (default: available parallelism)")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, SpaceError, StabilityError, ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
