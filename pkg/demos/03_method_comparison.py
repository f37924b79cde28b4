"""Compare swarm-driven BO against random search and local-ascent BO on a
shared evaluation budget, reporting MAX/MIN/AVE over seeded repeats.

Run with: python demos/03_method_comparison.py
"""

from swarmbo.bench import (
    LOCAL_BO,
    MethodSpec,
    ObjectiveSpec,
    PSO_BO,
    RANDOM_SEARCH,
    run_experiment,
)

objective = ObjectiveSpec("branin", dims=2, negate=True)
methods = [MethodSpec(PSO_BO), MethodSpec(RANDOM_SEARCH), MethodSpec(LOCAL_BO)]

# every method gets exactly 35 objective evaluations per seed
report = run_experiment(methods, objective, seeds=list(range(10)), budget=35)
report.assert_budget_parity()

print(f"negated Branin, budget 35, {len(report.seeds)} seeds\n")
print(f"{'method':<16}{'MAX':>12}{'MIN':>12}{'AVE':>12}")
for m in report.methods:
    print(f"{m.kind:<16}{m.max:>12.4f}{m.min:>12.4f}{m.ave:>12.4f}")
print("\n(true maximum is -0.397887)")
