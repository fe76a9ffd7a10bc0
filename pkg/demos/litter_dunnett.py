"""
Litter weights: is the spread larger under any dose than under control?
=======================================================================

One-sided many-to-one comparison of Levene-transformed litter weights,
dose 0 as control. The data set is not bundled; see
``src/levdun/data/README.md`` for how to provide ``litter.csv``.
"""

import sys

from levdun import TestSpec, bundled_dataset, load_csv, max_t_test, summarize_groups

try:
    path = bundled_dataset("litter")
except FileNotFoundError as exc:
    sys.exit(str(exc))

sample = load_csv(path, "weight", "dose", control_label="0")
for row in summarize_groups(sample):
    print(f"dose {row.label:>4s}: n={row.n:2d}, median={row.median:.2f}, var={row.variance:.2f}")

report = max_t_test(sample, TestSpec("dunnett", "greater"))
print()
print(report.to_table())

# lower simultaneous bounds: a bound above zero means a larger spread than control
for row in report.rows:
    print(f"{row.label:8s} lower bound {row.ci_low:+.3f}")
