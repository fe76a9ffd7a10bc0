"""
Critical values of the maxT statistic
=====================================

Equicoordinate quantiles of the multivariate t distribution give the
Dunnett critical values; for balanced designs the contrast correlation is
0.5. Compare with printed Dunnett tables (e.g. one-sided, 3 treatments,
36 df: about 2.13).
"""

import numpy as np
from scipy import stats

from levdun import correlation_from_contrasts, dunnett_matrix, equicoordinate_quantile, mvt_prob

for df in (10, 20, 36, 60):
    row = []
    for k in (1, 2, 3, 4, 6):
        R = correlation_from_contrasts(dunnett_matrix([10] * (k + 1)))
        row.append(equicoordinate_quantile(0.05, R, df, "one_sided"))
    print(f"df={df:3d}: " + "  ".join(f"{q:.4f}" for q in row))

# a single contrast reduces to Student's t
print("\nk=1:", equicoordinate_quantile(0.05, [[1.0]], 10), "vs", stats.t.ppf(0.95, 10))

# unbalanced: the control is shared, correlation drops to 1/3 for (16, 8, 8, 8)
R = correlation_from_contrasts(dunnett_matrix([16, 8, 8, 8]))
print("\nR for (16,8,8,8):\n", np.round(R, 4))
p, err = mvt_prob(2.0, R, 36, "one_sided")
print(f"P(max T <= 2) = {p:.5f} +- {err:.1e}")
