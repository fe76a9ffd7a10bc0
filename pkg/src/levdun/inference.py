"""The Levene-Dunnett procedure: adjusted p-values, simultaneous intervals, min-p."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .anova import FitSummary, contrast_estimate, fit_oneway
from .contrasts import ContrastMatrix, contrast_matrix, correlation_from_contrasts
from .dataset import GroupedSample
from .errors import ValidationError
from .mvt import ONE_SIDED, TWO_SIDED, MvtSettings, adjusted_pvalues, equicoordinate_quantile
from .transform import levene_transform, modified_levene_transform

__all__ = [
    "TestSpec",
    "ContrastRow",
    "TestReport",
    "max_t_test",
    "simultaneous_ci",
    "global_min_p",
    "transform_for",
]

ALTERNATIVES = ("greater", "less", "two_sided")
CONTRAST_KINDS = ("dunnett", "grand_mean")


def _norm_alternative(alt):
    key = str(alt).lower().replace("-", "_").replace(".", "_")
    if key in ("two_sided", "twosided", "two"):
        return "two_sided"
    if key not in ALTERNATIVES:
        raise ValidationError(f"unknown alternative {alt!r}; use one of {ALTERNATIVES}")
    return key


def _norm_kind(kind):
    key = str(kind).lower().replace("-", "_")
    if key == "grandmean":
        key = "grand_mean"
    if key not in CONTRAST_KINDS:
        raise ValidationError(f"unknown contrast kind {kind!r}; use one of {CONTRAST_KINDS}")
    return key


@dataclass(frozen=True)
class TestSpec:
    """Options for :func:`max_t_test`.

    ``alternative="greater"`` on Dunnett contrasts asks whether a treatment's
    spread exceeds the control's.
    """

    __test__ = False  # not a pytest class

    contrast_kind: str = "dunnett"
    alternative: str = "greater"
    modified: bool = False
    alpha: float = 0.05
    mvt_settings: MvtSettings = field(default_factory=MvtSettings)

    def __post_init__(self):
        object.__setattr__(self, "contrast_kind", _norm_kind(self.contrast_kind))
        object.__setattr__(self, "alternative", _norm_alternative(self.alternative))
        if not 0.0 < float(self.alpha) < 1.0:
            raise ValidationError("alpha must lie in (0, 1)")

    @property
    def sides(self):
        return TWO_SIDED if self.alternative == "two_sided" else ONE_SIDED


@dataclass(frozen=True)
class ContrastRow:
    label: str
    estimate: float
    stderr: float
    tstat: float
    adj_p: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class TestReport:
    __test__ = False

    rows: tuple
    global_min_p: float
    quantile_used: float
    df: int
    correlation: np.ndarray
    spec: TestSpec

    @property
    def labels(self):
        return [r.label for r in self.rows]

    @property
    def adj_p(self):
        return np.array([r.adj_p for r in self.rows])

    @property
    def tstats(self):
        return np.array([r.tstat for r in self.rows])

    def row(self, label):
        for r in self.rows:
            if r.label == label or r.label.split(" - ")[0] == label:
                return r
        raise KeyError(label)

    def to_dict(self):
        spec = asdict(self.spec)
        return {
            "rows": [{k: _json_num(v) for k, v in asdict(r).items()} for r in self.rows],
            "global_min_p": self.global_min_p,
            "quantile_used": self.quantile_used,
            "df": self.df,
            "correlation": self.correlation.tolist(),
            "spec": spec,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    def to_table(self):
        head = ["contrast", "estimate", "stderr", "t", "adj_p", "lower", "upper"]
        body = [
            [r.label] + [_fmt(v) for v in (r.estimate, r.stderr, r.tstat, r.adj_p, r.ci_low, r.ci_high)]
            for r in self.rows
        ]
        widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
        lines = [
            "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(line, widths)))
            for line in [head] + body
        ]
        s = self.spec
        lines.insert(1, "-" * len(lines[0]))
        lines.append("")
        lines.append(
            f"{s.contrast_kind} contrasts, alternative={s.alternative}, "
            f"modified={s.modified}, df={self.df}"
        )
        lines.append(
            f"critical value {_fmt(self.quantile_used)} at alpha={s.alpha}; "
            f"global min-p {_fmt(self.global_min_p)}"
        )
        return "\n".join(lines)

    def ci_csv(self):
        """CSV with ``label,estimate,lower,upper``; infinite bounds as ``inf``/``-inf``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "estimate", "lower", "upper"])
        for r in self.rows:
            w.writerow([r.label, repr(r.estimate), _csv_num(r.ci_low), _csv_num(r.ci_high)])
        return buf.getvalue()


def _fmt(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.4g}"


def _json_num(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _csv_num(v):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def transform_for(s: GroupedSample, modified: bool):
    return modified_levene_transform(s) if modified else levene_transform(s)


def _contrasts(kind, fit: FitSummary, s: GroupedSample) -> ContrastMatrix:
    return contrast_matrix(kind, fit.group_sizes, s.labels)


def simultaneous_ci(fit: FitSummary, m: ContrastMatrix, spec: TestSpec, quantile=None):
    """Simultaneous confidence bounds for every contrast row.

    Returns ``(bounds, quantile)`` where ``bounds`` is a list of
    ``(ci_low, ci_high)``. One-sided intervals have one infinite end.
    """
    if quantile is None:
        R = correlation_from_contrasts(m)
        quantile = equicoordinate_quantile(spec.alpha, R, fit.df_resid, spec.sides, spec.mvt_settings)
    bounds = []
    for i in range(m.n_rows):
        est, se, _ = contrast_estimate(fit, m, i)
        if spec.alternative == "greater":
            bounds.append((est - quantile * se, math.inf))
        elif spec.alternative == "less":
            bounds.append((-math.inf, est + quantile * se))
        else:
            bounds.append((est - quantile * se, est + quantile * se))
    return bounds, quantile


def max_t_test(s: GroupedSample, spec: TestSpec | None = None) -> TestReport:
    """Run the (modified) Levene-Dunnett or grand-mean maxT test on raw responses.

    The data are Levene-transformed, a one-way model is fitted to the
    deviations, and each contrast's t statistic is referred to the joint
    multivariate t distribution of all contrasts (single-step).
    """
    spec = spec or TestSpec()
    if spec.contrast_kind == "dunnett" and s.control_index != 0:
        # contrast builders treat column 0 as the control
        groups = list(s.groups)
        ctrl = groups.pop(s.control_index)
        s = GroupedSample(tuple([ctrl] + groups), 0)
    fit = fit_oneway(transform_for(s, spec.modified))
    m = _contrasts(spec.contrast_kind, fit, s)
    R = correlation_from_contrasts(m)

    est = [contrast_estimate(fit, m, i) for i in range(m.n_rows)]
    t = np.array([e[2] for e in est])
    t_dir = -t if spec.alternative == "less" else t
    adj = adjusted_pvalues(t_dir, R, fit.df_resid, spec.sides, spec.mvt_settings)
    bounds, q = simultaneous_ci(fit, m, spec)

    rows = tuple(
        ContrastRow(label, e[0], e[1], e[2], float(p), lo, hi)
        for label, e, p, (lo, hi) in zip(m.row_labels, est, adj, bounds)
    )
    R.flags.writeable = False
    return TestReport(rows, float(adj.min()), float(q), fit.df_resid, R, spec)


def global_min_p(report: TestReport) -> float:
    """Smallest adjusted p-value; the global null is rejected at level alpha iff it is <= alpha."""
    if not report.rows:
        raise ValidationError("empty report")
    return float(min(r.adj_p for r in report.rows))


def with_seed(spec: TestSpec, seed: int) -> TestSpec:
    return replace(spec, mvt_settings=replace(spec.mvt_settings, seed=int(seed)))
