"""One-way fit on transformed data and the Brown-Forsythe F-test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .contrasts import ContrastMatrix
from .errors import DegenerateFitError, InsufficientDataError, ValidationError
from .transform import TransformedSample

__all__ = ["FitSummary", "fit_oneway", "contrast_estimate", "brown_forsythe_f", "FTestResult"]


@dataclass(frozen=True)
class FitSummary:
    group_means: np.ndarray
    group_sizes: tuple
    pooled_sd: float
    df_resid: int

    @property
    def n_groups(self):
        return len(self.group_sizes)


@dataclass(frozen=True)
class FTestResult:
    fstat: float
    df1: int
    df2: int
    pvalue: float


def _sums_of_squares(values):
    means = np.array([z.mean() for z in values])
    ss_within = float(sum(((z - m) ** 2).sum() for z, m in zip(values, means)))
    return means, ss_within


def fit_oneway(t: TransformedSample) -> FitSummary:
    """Group means, pooled SD and residual df of the cell-means model.

    A zero pooled SD is returned as is; it only becomes an error when a t
    statistic is requested.
    """
    values = t.values
    if any(z.size == 0 for z in values):
        raise InsufficientDataError("a group is empty after transformation")
    sizes = tuple(int(z.size) for z in values)
    df = sum(sizes) - len(sizes)
    if df < 1:
        raise InsufficientDataError(
            f"residual degrees of freedom {df} < 1 (sizes {sizes})"
        )
    means, ssw = _sums_of_squares(values)
    means.flags.writeable = False
    return FitSummary(means, sizes, float(np.sqrt(ssw / df)), df)


def contrast_estimate(f: FitSummary, m: ContrastMatrix, row: int):
    """Return ``(estimate, stderr, tstat)`` for one contrast row."""
    if tuple(m.group_sizes) != tuple(f.group_sizes):
        raise ValidationError(
            f"contrast sizes {m.group_sizes} do not match fit sizes {f.group_sizes}"
        )
    if not 0 <= row < m.n_rows:
        raise ValidationError(f"row {row} out of range")
    c = m.coefficients[row]
    est = float(c @ f.group_means)
    if f.pooled_sd == 0.0:
        raise DegenerateFitError("pooled standard deviation is zero; t undefined")
    se = f.pooled_sd * float(np.sqrt(np.sum(c**2 / np.asarray(f.group_sizes))))
    return est, se, est / se


def brown_forsythe_f(t: TransformedSample) -> FTestResult:
    """One-way ANOVA F-test on the transformed values.

    With the plain Levene transform this is the median-centred
    (Brown-Forsythe) Levene test.
    """
    fit = fit_oneway(t)
    values = t.values
    sizes = np.asarray(fit.group_sizes, dtype=float)
    grand = float(np.concatenate(values).mean())
    ssb = float(np.sum(sizes * (fit.group_means - grand) ** 2))
    ssw = fit.pooled_sd**2 * fit.df_resid
    df1 = fit.n_groups - 1
    df2 = fit.df_resid
    if ssw == 0.0:
        if ssb == 0.0:
            return FTestResult(0.0, df1, df2, 1.0)
        raise DegenerateFitError("zero within-group variance; F undefined")
    fstat = (ssb / df1) / (ssw / df2)
    # upper tail of F(df1, df2) through the regularized incomplete beta
    p = float(special.betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * fstat)))
    return FTestResult(float(fstat), df1, df2, min(max(p, 0.0), 1.0))
