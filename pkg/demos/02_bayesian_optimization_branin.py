"""Bayesian optimization of the (negated) Branin function, step by step.

The GP surrogate is refit after every observation and the UCB acquisition is
maximized by the particle swarm to pick the next evaluation point.

Run with: python demos/02_bayesian_optimization_branin.py
"""

import numpy as np

import swarmbo as sb
from swarmbo.bench import ObjectiveSpec, default_space, make_objective

objective_spec = ObjectiveSpec("branin", dims=2, negate=True)
space = default_space(objective_spec)  # [-5, 10] x [0, 15]
objective = make_objective(objective_spec, seed=42)

config = sb.BoConfig(
    space=space,
    acquisition=sb.AcquisitionSpec(kind="ucb", gamma=2.0),
    init_count=5,
    iterations=30,
    seed=42,
)
result = sb.run_bo(config, objective)

print(f"true maximum:  -0.397887 at (pi, 2.275) and two symmetric points")
print(f"found maximum: {result.best_value:.6f} at {result.best_point}")
print(f"objective evaluations: {result.n_evaluations}")

print("\nincumbent after each iteration:")
for i, v in enumerate(result.incumbent_trace):
    bar = "#" * max(0, int(20 + 2 * v))
    print(f"  {i:3d}  {v:10.4f}  {bar}")
