"""
Which comparisons pick up an inflated variance?
===============================================

Elevated groups get an SD three times the others. The per-comparison
rejection rates show the one-sided test flags exactly the elevated
treatments and stays quiet when the control itself is elevated.
"""

import sys

from levdun import ScenarioSpec, run_power_grid, run_scenario
from levdun.simulate import elevated_pattern

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000

patterns = [[3], [2, 3], [1, 2, 3], [1, 2], [1], [2], [1, 3], [0, 3]]
base = ScenarioSpec((10,) * 4, (1.0,) * 4, replications=reps, seed=11)
grid = run_power_grid(base, [elevated_pattern(4, p) for p in patterns], workers=4)

print("sds              global  01     02     03")
for sds, res in grid:
    per = "  ".join(f"{x:.3f}" for x in res.per_contrast_rejection_rates)
    print(f"{str(tuple(int(s) for s in sds)):15s}  {res.global_rejection_rate:.3f}  {per}")

# same total N, different allocation; group 2 elevated
print("\nsizes             global  01     02     03")
for sizes in [(10, 10, 10, 10), (16, 8, 8, 8), (16, 10, 4, 10)]:
    res = run_scenario(ScenarioSpec(sizes, elevated_pattern(4, [2]), replications=reps, seed=12), workers=4)
    per = "  ".join(f"{x:.3f}" for x in res.per_contrast_rejection_rates)
    print(f"{str(sizes):16s}  {res.global_rejection_rate:.3f}  {per}")

# trimmed vs plain at n = 11
print("\nn_i = 11, plain / trimmed global power")
for p in patterns[:3]:
    sds = elevated_pattern(4, p)
    a = run_scenario(ScenarioSpec((11,) * 4, sds, replications=reps, seed=13), workers=4)
    b = run_scenario(ScenarioSpec((11,) * 4, sds, modified=True, replications=reps, seed=13), workers=4)
    print(f"  {sds}: {a.global_rejection_rate:.3f} / {b.global_rejection_rate:.3f}")
