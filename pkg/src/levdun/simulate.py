"""Monte Carlo estimates of familywise error rate and power.

Each replication draws normal data with per-group standard deviations and
applies the maxT test. Because the contrast correlation and residual df
depend only on the (post-trimming) group sizes, they are fixed for a
scenario; the critical value is computed once and a contrast is rejected
iff its directional t statistic reaches it. On the shared MVT point set
this is the same decision as ``adj_p <= alpha``.

Replication r of stream j uses its own generator seeded from
``SeedSequence(seed, spawn_key=(j, r))``, so results do not depend on how
replications are split across worker threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .contrasts import contrast_matrix, correlation_from_contrasts
from .errors import DegenerateFitError, InsufficientDataError, ValidationError
from .inference import TestSpec, _norm_alternative, _norm_kind
from .mvt import ONE_SIDED, TWO_SIDED, MvtSettings, equicoordinate_quantile

__all__ = [
    "ScenarioSpec",
    "SimResult",
    "run_scenario",
    "run_power_grid",
    "elevated_pattern",
    "load_scenarios",
    "results_to_csv",
    "ELEVATION_RATIO",
]

# SD multiplier for an "elevated variance" group; not stated in the source
# tables, chosen so that power at n = 10 is of the reported order.
ELEVATION_RATIO = 3.0


@dataclass(frozen=True)
class ScenarioSpec:
    group_sizes: tuple
    group_sds: tuple
    alternative: str = "greater"
    modified: bool = False
    contrast_kind: str = "dunnett"
    alpha: float = 0.05
    replications: int = 10_000
    seed: int = 1
    mvt_budget: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "group_sizes", tuple(int(n) for n in self.group_sizes))
        object.__setattr__(self, "group_sds", tuple(float(s) for s in self.group_sds))
        object.__setattr__(self, "alternative", _norm_alternative(self.alternative))
        object.__setattr__(self, "contrast_kind", _norm_kind(self.contrast_kind))
        if len(self.group_sizes) < 2:
            raise ValidationError("at least 2 groups are required")
        if len(self.group_sizes) != len(self.group_sds):
            raise ValidationError("group_sizes and group_sds differ in length")
        if any(n < 1 for n in self.group_sizes):
            raise ValidationError("group sizes must be positive")
        if any(not (s > 0 and math.isfinite(s)) for s in self.group_sds):
            raise ValidationError("group SDs must be positive and finite")
        if not 0.0 <= self.alpha < 1.0:
            raise ValidationError("alpha must lie in [0, 1)")
        if int(self.replications) < 1:
            raise ValidationError("replications must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.modified and any(n == 1 for n in self.group_sizes):
            raise ValidationError("the modified transform needs odd groups of size >= 3")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValidationError(f"unknown scenario fields {sorted(extra)}")
        return cls(**d)

    @property
    def effective_sizes(self):
        if self.modified:
            return tuple(n - (n % 2) for n in self.group_sizes)
        return self.group_sizes

    @property
    def sides(self):
        return TWO_SIDED if self.alternative == "two_sided" else ONE_SIDED

    def test_spec(self):
        """The equivalent :class:`TestSpec` (for cross-checks with ``max_t_test``)."""
        return TestSpec(
            self.contrast_kind,
            self.alternative,
            self.modified,
            self.alpha if self.alpha > 0 else 0.05,
            MvtSettings(sample_budget=self.mvt_budget, seed=self.seed),
        )


@dataclass(frozen=True)
class SimResult:
    global_rejection_rate: float
    per_contrast_rejection_rates: tuple
    replications_used: int
    error_replications: int
    critical_value: float
    spec: ScenarioSpec = field(repr=False)

    def to_dict(self):
        d = {
            "group_sizes": list(self.spec.group_sizes),
            "group_sds": list(self.spec.group_sds),
            "alternative": self.spec.alternative,
            "modified": self.spec.modified,
            "contrast_kind": self.spec.contrast_kind,
            "alpha": self.spec.alpha,
            "seed": self.spec.seed,
            "global_rejection_rate": self.global_rejection_rate,
            "per_contrast_rejection_rates": list(self.per_contrast_rejection_rates),
            "replications_used": self.replications_used,
            "error_replications": self.error_replications,
            "critical_value": self.critical_value if math.isfinite(self.critical_value) else "inf",
        }
        return d


def elevated_pattern(n_groups, elevated, ratio=ELEVATION_RATIO):
    """SD vector of ones with ``ratio`` at the indices in ``elevated``."""
    sds = [1.0] * n_groups
    for i in elevated:
        sds[i] = float(ratio)
    return tuple(sds)


def _setup(spec: ScenarioSpec):
    sizes = spec.effective_sizes
    m = contrast_matrix(spec.contrast_kind, sizes)
    df = sum(sizes) - len(sizes)
    if df < 1:
        raise ValidationError(f"scenario leaves {df} residual degrees of freedom")
    if spec.alpha == 0.0:
        return m, df, math.inf
    R = correlation_from_contrasts(m)
    settings = MvtSettings(sample_budget=spec.mvt_budget, seed=spec.seed)
    q = equicoordinate_quantile(spec.alpha, R, df, spec.sides, settings)
    return m, df, q


def _replicate(spec, coef, se_factor, df, crit, stream, reps):
    """Count rejections over replication indices ``reps``."""
    k = coef.shape[0]
    n_global = 0
    n_contrast = np.zeros(k, dtype=np.int64)
    n_err = 0
    sizes, sds = spec.group_sizes, spec.group_sds
    for r in reps:
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=spec.seed, spawn_key=(stream, int(r)))
        )
        means = np.empty(len(sizes))
        ssw = 0.0
        for j, (n, sd) in enumerate(zip(sizes, sds)):
            y = rng.normal(0.0, sd, n)
            z = np.abs(y - np.median(y))
            if spec.modified and n % 2 == 1:
                z = np.delete(z, np.flatnonzero(z == 0.0)[0])
            means[j] = z.mean()
            ssw += float(((z - means[j]) ** 2).sum())
        if ssw == 0.0:
            n_err += 1
            continue
        t = (coef @ means) / (math.sqrt(ssw / df) * se_factor)
        if spec.alternative == "less":
            t = -t
        elif spec.alternative == "two_sided":
            t = np.abs(t)
        hit = t >= crit
        n_contrast += hit
        n_global += bool(hit.any())
    return n_global, n_contrast, n_err


def run_scenario(spec: ScenarioSpec, workers: int = 1, stream: int = 0) -> SimResult:
    """Estimate global and per-contrast rejection rates for one scenario.

    Replications whose pooled SD is zero are counted in
    ``error_replications`` and excluded from the rate denominators.
    """
    try:
        m, df, crit = _setup(spec)
    except (InsufficientDataError, DegenerateFitError) as exc:
        raise ValidationError(str(exc)) from exc
    coef = m.coefficients
    se_factor = np.sqrt((coef**2 / np.asarray(m.group_sizes, dtype=float)).sum(axis=1))

    idx = np.arange(int(spec.replications))
    chunks = [c for c in np.array_split(idx, max(1, int(workers) * 4)) if c.size]
    job = lambda c: _replicate(spec, coef, se_factor, df, crit, stream, c)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as ex:
            parts = list(ex.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]

    n_global = sum(p[0] for p in parts)
    n_contrast = sum((p[1] for p in parts), np.zeros(coef.shape[0], dtype=np.int64))
    n_err = sum(p[2] for p in parts)
    used = int(spec.replications) - n_err
    denom = max(used, 1)
    return SimResult(
        n_global / denom,
        tuple(float(c) / denom for c in n_contrast),
        used,
        n_err,
        float(crit),
        spec,
    )


def run_power_grid(base: ScenarioSpec, sd_patterns, workers: int = 1):
    """Run ``base`` once per SD pattern, each on its own random stream.

    Returns a list of ``(pattern, SimResult)`` in input order.
    """
    out = []
    for i, pattern in enumerate(sd_patterns):
        pattern = tuple(float(s) for s in pattern)
        if len(pattern) != len(base.group_sizes):
            raise ValidationError(
                f"pattern {pattern} has {len(pattern)} entries, expected {len(base.group_sizes)}"
            )
        spec = ScenarioSpec(**{**asdict(base), "group_sds": pattern})
        out.append((pattern, run_scenario(spec, workers=workers, stream=i + 1)))
    return out


def load_scenarios(path):
    """Read scenarios from JSON: an object, a list, or ``{"scenarios": [...]}``."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(data, dict) and "scenarios" in data:
        data = data["scenarios"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not all(isinstance(d, dict) for d in data):
        raise ValidationError(f"{path}: expected a scenario object or a list of them")
    try:
        return [ScenarioSpec.from_dict(d) for d in data]
    except TypeError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def results_to_csv(results):
    """One CSV row per result: design, global rate and per-contrast rates."""
    k = max(len(r.per_contrast_rejection_rates) for r in results)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["group_sizes", "group_sds", "alternative", "modified", "contrast_kind", "alpha",
         "replications_used", "error_replications", "global_rate"]
        + [f"rate_{i + 1}" for i in range(k)]
    )
    for r in results:
        s = r.spec
        w.writerow(
            [" ".join(map(str, s.group_sizes)), " ".join(repr(x) for x in s.group_sds),
             s.alternative, s.modified, s.contrast_kind, s.alpha,
             r.replications_used, r.error_replications, repr(r.global_rejection_rate)]
            + [repr(x) for x in r.per_contrast_rejection_rates]
        )
    return buf.getvalue()
