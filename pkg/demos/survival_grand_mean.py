"""
Heterogeneity of survival-time spread across cancer sites
=========================================================

No control group here, so every site is compared with the (size-weighted)
grand mean of the Levene-transformed survival times. The smallest adjusted
p-value serves as a global test; the per-site rows say *which* site
deviates.
"""

from levdun import (
    TestSpec,
    brown_forsythe_f,
    bundled_dataset,
    levene_transform,
    load_csv,
    max_t_test,
    summarize_groups,
)

sample = load_csv(bundled_dataset("survival"), "survival", "site")
for row in summarize_groups(sample):
    print(f"{row.label:9s} n={row.n:2d}  median={row.median:7.1f}  sd={row.variance ** 0.5:7.1f}")

# plain transform, two-sided grand-mean contrasts
plain = max_t_test(sample, TestSpec("grand_mean", "two_sided"))
print()
print(plain.to_table())

# odd-sized sites lose their single zero deviation
trimmed = max_t_test(sample, TestSpec("grand_mean", "two_sided", modified=True))
print()
print(trimmed.to_table())

# the classical global alternative: one F-test, no per-site statement
f = brown_forsythe_f(levene_transform(sample))
print(f"\nBrown-Forsythe F = {f.fstat:.3f} on ({f.df1}, {f.df2}) df, p = {f.pvalue:.4f}")

# interval data for a CI plot
print()
print(trimmed.ci_csv())
