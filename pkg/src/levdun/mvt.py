"""Equicoordinate probabilities and quantiles of the central multivariate t.

For T = X / s with X ~ N(0, R) and s = sqrt(chi2_df / df) independent,

    P(max_i T_i <= q)   (one-sided)   and   P(max_i |T_i| <= q)   (two-sided)

are estimated by randomized quasi-Monte Carlo over X only: conditional on X
the event is an event about s alone, whose probability is a chi-square tail.
Points come from independently scrambled Sobol' sequences, one per batch;
the spread of the batch means gives the error estimate.

All evaluations with the same settings reuse the same point set, so the
estimated CDF is a fixed, smooth, nondecreasing function of q. Quantiles are
roots of that function.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, special, stats
from scipy.stats import qmc

from .errors import ConvergenceError, NumericError, ValidationError

__all__ = [
    "MvtSettings",
    "cholesky_factor",
    "mvt_prob",
    "equicoordinate_quantile",
    "adjusted_pvalues",
    "ONE_SIDED",
    "TWO_SIDED",
]

ONE_SIDED = "one_sided"
TWO_SIDED = "two_sided"
_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class MvtSettings:
    """Numerical controls. ``workers`` affects speed only, never results."""

    sample_budget: int = 100_000
    seed: int = 20240601
    target_abs_error: float = 1e-3
    max_quantile_iters: int = 100
    n_batches: int = 8
    workers: int = 1

    def __post_init__(self):
        if int(self.sample_budget) < 1000:
            raise ValidationError("sample_budget must be at least 1000")
        if not 0 <= int(self.seed) <= _UINT64_MAX:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if not self.target_abs_error > 0:
            raise ValidationError("target_abs_error must be positive")
        if int(self.max_quantile_iters) < 1:
            raise ValidationError("max_quantile_iters must be >= 1")
        if int(self.n_batches) < 2:
            raise ValidationError("n_batches must be >= 2")
        if int(self.workers) < 1:
            raise ValidationError("workers must be >= 1")

    @property
    def points_per_batch_log2(self):
        return max(7, int(np.floor(np.log2(self.sample_budget / self.n_batches))))


def _sides(sides):
    key = str(sides).lower().replace("-", "_")
    if key in (ONE_SIDED, "one", "greater", "less"):
        return ONE_SIDED
    if key in (TWO_SIDED, "two", "two_sided"):
        return TWO_SIDED
    raise ValidationError(f"unknown sides {sides!r}")


def _as_correlation(R):
    R = np.array(R, dtype=float, ndmin=2)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValidationError("correlation matrix must be square")
    if not np.allclose(R, R.T, atol=1e-12):
        raise ValidationError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(R), 1.0, atol=1e-12):
        raise ValidationError("correlation matrix must have a unit diagonal")
    return R


def cholesky_factor(R, tol: float = 1e-10) -> np.ndarray:
    """Lower-triangular L with L @ L.T == R, allowing positive semidefinite R.

    A pivot below ``tol`` (relative to the diagonal) is treated as zero and
    its column is zeroed; the remaining entries of that column must then
    vanish too, otherwise the matrix is indefinite and ``NumericError`` is
    raised.
    """
    A = _as_correlation(R).copy()
    k = A.shape[0]
    L = np.zeros_like(A)
    scale = max(1.0, float(np.max(np.abs(np.diag(A)))))
    for j in range(k):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if d < -tol * scale:
            raise NumericError(f"matrix is not positive semidefinite (pivot {d:.3g})")
        if d <= tol * scale:
            resid = A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]
            if np.any(np.abs(resid) > np.sqrt(tol) * scale):
                raise NumericError("matrix is not positive semidefinite")
            continue
        L[j, j] = np.sqrt(d)
        L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def _batch_maxima(L, sides, seed, batch, m):
    # independent scramble per batch, keyed by (seed, batch) so that the
    # result is independent of scheduling
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(batch,))
    sobol = qmc.Sobol(d=L.shape[0], scramble=True, seed=np.random.default_rng(ss))
    u = sobol.random_base2(m)
    np.clip(u, 1e-300, 1.0 - 2.0**-53, out=u)
    x = special.ndtri(u) @ L.T
    if sides == TWO_SIDED:
        np.abs(x, out=x)
    return x.max(axis=1)


@lru_cache(maxsize=64)
def _maxima_cached(r_bytes, k, sides, seed, n_batches, m, workers):
    R = np.frombuffer(r_bytes, dtype=float).reshape(k, k)
    L = cholesky_factor(R)
    job = lambda b: _batch_maxima(L, sides, seed, b, m)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            batches = list(ex.map(job, range(n_batches)))
    else:
        batches = [job(b) for b in range(n_batches)]
    out = np.stack(batches)
    out.flags.writeable = False
    return out


def _maxima(R, sides, settings):
    R = _as_correlation(R)
    return _maxima_cached(
        np.ascontiguousarray(R).tobytes(),
        R.shape[0],
        sides,
        int(settings.seed),
        int(settings.n_batches),
        settings.points_per_batch_log2,
        int(settings.workers),
    )


def _conditional_prob(M, q, df, sides):
    """P(M <= q * s | M) with s = sqrt(chi2_df / df), elementwise in M."""
    if sides == TWO_SIDED:
        if q <= 0:
            return np.zeros_like(M)
        return special.chdtrc(df, df * (M / q) ** 2)
    if q > 0:
        return np.where(M <= 0, 1.0, special.chdtrc(df, df * (M / q) ** 2))
    if q == 0:
        return (M <= 0).astype(float)
    return np.where(M < 0, special.chdtr(df, df * (M / q) ** 2), 0.0)


def _check_df(df):
    if int(df) != df or df < 1:
        raise ValidationError(f"df must be a positive integer, got {df!r}")
    return int(df)


def _estimate(M, q, df, sides):
    batch_means = _conditional_prob(M, q, df, sides).mean(axis=1)
    prob = float(batch_means.mean())
    err = 3.0 * float(batch_means.std(ddof=1)) / np.sqrt(batch_means.size)
    return min(max(prob, 0.0), 1.0), err


def mvt_prob(q, R, df, sides=ONE_SIDED, settings: MvtSettings | None = None):
    """Equicoordinate probability ``P(max T <= q)`` or ``P(max |T| <= q)``.

    Returns
    -------
    prob : float
    est_error : float
        Three standard errors of the batch means.
    """
    settings = settings or MvtSettings()
    sides = _sides(sides)
    df = _check_df(df)
    q = float(q)
    if np.isposinf(q):
        return 1.0, 0.0
    if np.isneginf(q):
        return 0.0, 0.0
    return _estimate(_maxima(R, sides, settings), q, df, sides)


def adjusted_pvalues(tstats, R, df, sides=ONE_SIDED, settings: MvtSettings | None = None):
    """Single-step maxT adjusted p-values ``1 - P(max T <= t_i)``.

    For two-sided tests pass the signed statistics; their absolute values
    are used.
    """
    settings = settings or MvtSettings()
    sides = _sides(sides)
    df = _check_df(df)
    M = _maxima(R, sides, settings)
    out = []
    for t in np.asarray(tstats, dtype=float):
        q = abs(t) if sides == TWO_SIDED else t
        out.append(1.0 - _estimate(M, q, df, sides)[0])
    return np.clip(np.array(out), 0.0, 1.0)


def equicoordinate_quantile(alpha, R, df, sides=ONE_SIDED, settings: MvtSettings | None = None):
    """q with ``mvt_prob(q) = 1 - alpha`` on the fixed point set.

    The search starts from the bracket [univariate t quantile,
    Bonferroni quantile at alpha / (2k)] and widens it if the estimate
    falls outside; ``ConvergenceError`` if no bracket is found.
    """
    settings = settings or MvtSettings()
    sides = _sides(sides)
    df = _check_df(df)
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    R = _as_correlation(R)
    k = R.shape[0]
    M = _maxima(R, sides, settings)
    target = 1.0 - alpha

    def f(q):
        return _estimate(M, q, df, sides)[0] - target

    lo = float(stats.t.ppf(1.0 - alpha, df))
    hi = float(stats.t.ppf(1.0 - alpha / (2.0 * k), df))
    if sides == TWO_SIDED:
        lo = max(lo, 1e-8)
    step = max(0.1, hi - lo)
    it = 0
    while f(lo) > 0:
        it += 1
        if it > settings.max_quantile_iters:
            raise ConvergenceError("could not bracket quantile from below")
        lo = lo - step if sides == ONE_SIDED else lo / 2.0
        step *= 2.0
    step = max(0.1, hi - lo)
    while f(hi) < 0:
        it += 1
        if it > settings.max_quantile_iters:
            raise ConvergenceError("could not bracket quantile from above")
        hi += step
        step *= 2.0
    try:
        q = optimize.brentq(f, lo, hi, xtol=1e-10, rtol=1e-12, maxiter=settings.max_quantile_iters)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    return float(q)
