"""
Familywise error rate under the global null
===========================================

Normal data with equal variances in a control and three treatments;
one-sided Dunnett-type comparisons at alpha = 0.05. The plain transform is
conservative for small groups because every odd-sized group contributes an
exact zero; the trimmed version removes it.

Pass a replication count as the first argument (default 10000).
"""

import sys

from levdun import ScenarioSpec, run_scenario

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000


def rate(sizes, modified=False):
    spec = ScenarioSpec(sizes, (1.0,) * len(sizes), modified=modified, replications=reps, seed=1)
    return run_scenario(spec, workers=4).global_rejection_rate


print("balanced designs, plain transform")
for n in (3, 5, 10, 20, 30, 50):
    print(f"  n_i = {n:2d}: {rate((n,) * 4):.3f}")

print("\nunbalanced designs, N = 40")
for sizes in [(10, 10, 10, 10), (16, 8, 8, 8), (8, 8, 8, 12)]:
    print(f"  {sizes}: {rate(sizes):.3f}")

print("\nsmall samples: plain vs trimmed")
for n in (15, 11, 7, 5, 3):
    print(f"  n_i = {n:2d}: {rate((n,) * 4):.3f}  {rate((n,) * 4, modified=True):.3f}")
