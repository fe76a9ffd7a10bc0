import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from levdun import (
    DegenerateFitError,
    GroupedSample,
    MvtSettings,
    TestSpec,
    ValidationError,
    global_min_p,
    max_t_test,
)
from levdun.inference import ContrastRow, TestReport

SPEC = TestSpec(mvt_settings=MvtSettings(seed=3))


def sample(*groups, control_index=0):
    return GroupedSample(tuple((f"G{i}", g) for i, g in enumerate(groups)), control_index)


rng = np.random.default_rng(99)
BASE = sample(*[rng.normal(0, s, n) for s, n in [(1, 9), (4, 11), (1, 8), (1.4, 10)]])


def test_spec_validation():
    with pytest.raises(ValidationError):
        TestSpec(alpha=1.0)
    with pytest.raises(ValidationError):
        TestSpec(alternative="sideways")
    with pytest.raises(ValidationError):
        TestSpec(contrast_kind="tukey")
    assert TestSpec(contrast_kind="grandmean", alternative="two-sided").contrast_kind == "grand_mean"


def test_constant_groups_degenerate():
    with pytest.raises(DegenerateFitError):
        max_t_test(sample([5, 5, 5], [2, 2, 2], [7, 7, 7]), SPEC)


def test_report_structure():
    r = max_t_test(BASE, SPEC)
    assert r.labels == ["G1 - G0", "G2 - G0", "G3 - G0"]
    assert r.df == 38 - 4
    assert r.global_min_p == global_min_p(r) == min(r.adj_p)
    for row in r.rows:
        assert 0 <= row.adj_p <= 1
        assert row.ci_high == math.inf and math.isfinite(row.ci_low)
        assert row.adj_p >= stats.t.sf(row.tstat, r.df) - 2e-3
    assert r.row("G1 - G0").adj_p < 0.05


def test_less_and_two_sided_shapes():
    less = max_t_test(BASE, TestSpec(alternative="less", mvt_settings=SPEC.mvt_settings))
    assert all(row.ci_low == -math.inf and math.isfinite(row.ci_high) for row in less.rows)
    assert less.row("G1").adj_p > 0.9
    two = max_t_test(BASE, TestSpec(alternative="two_sided", mvt_settings=SPEC.mvt_settings))
    assert all(math.isfinite(row.ci_low) and math.isfinite(row.ci_high) for row in two.rows)
    for row in two.rows:
        assert row.ci_low < row.estimate < row.ci_high


@pytest.mark.parametrize("alternative", ["greater", "two_sided"])
def test_single_contrast_matches_t_test(alternative):
    s = sample([1.0, 2.5, 3.1, 0.2, 4.4], [0.5, 7.2, 3.3, 9.1, -2.0, 1.0])
    r = max_t_test(s, TestSpec(alternative=alternative, mvt_settings=SPEC.mvt_settings))
    (row,) = r.rows
    p = stats.t.sf(row.tstat, r.df) if alternative == "greater" else 2 * stats.t.sf(abs(row.tstat), r.df)
    assert row.adj_p == pytest.approx(p, abs=1e-3)
    q = stats.t.ppf(0.95 if alternative == "greater" else 0.975, r.df)
    assert row.ci_low == pytest.approx(row.estimate - q * row.stderr, abs=2e-3 * row.stderr)


def test_ci_widths_shrink_with_alpha():
    widths = []
    for a in (0.01, 0.05, 0.1, 0.2):
        r = max_t_test(BASE, TestSpec(alternative="two_sided", alpha=a, mvt_settings=SPEC.mvt_settings))
        widths.append([row.ci_high - row.ci_low for row in r.rows])
    widths = np.array(widths)
    assert np.all(np.diff(widths, axis=0) < 0)


def test_coherence_pvalue_and_bound():
    gen = np.random.default_rng(5)
    checked = 0
    for _ in range(20):
        s = sample(*[gen.normal(0, sd, 10) for sd in (1, 2, 1, 1.7)])
        r = max_t_test(s, SPEC)
        for row in r.rows:
            if abs(row.adj_p - SPEC.alpha) < 2 * SPEC.mvt_settings.target_abs_error:
                continue
            assert (row.adj_p <= SPEC.alpha) == (row.ci_low > 0)
            checked += 1
    assert checked > 40


def test_control_index_reordered():
    a = max_t_test(BASE, SPEC)
    groups = list(BASE.groups)
    moved = GroupedSample(tuple(groups[1:2] + groups[0:1] + groups[2:]), control_index=1)
    b = max_t_test(moved, SPEC)
    assert [row.adj_p for row in b.rows] == [row.adj_p for row in a.rows]


shift_st = st.lists(st.integers(-50, 50), min_size=4, max_size=4)


@settings(max_examples=25, deadline=None)
@given(shift_st)
def test_location_shift_invariance(shifts):
    shifted = BASE.map_values(lambda i, y: y + shifts[i] * 0.25)
    a, b = max_t_test(BASE, SPEC), max_t_test(shifted, SPEC)
    for ra, rb in zip(a.rows, b.rows):
        assert rb.tstat == pytest.approx(ra.tstat, rel=1e-9)
        assert rb.adj_p == pytest.approx(ra.adj_p, abs=1e-9)
    assert a.quantile_used == b.quantile_used


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-3, 1e3))
def test_scale_invariance(c):
    scaled = BASE.map_values(lambda i, y: c * y)
    a, b = max_t_test(BASE, SPEC), max_t_test(scaled, SPEC)
    for ra, rb in zip(a.rows, b.rows):
        assert rb.tstat == pytest.approx(ra.tstat, rel=1e-9)
        assert rb.adj_p == pytest.approx(ra.adj_p, abs=1e-9)


def test_json_and_csv_serialization():
    r = max_t_test(BASE, SPEC)
    d = json.loads(r.to_json())
    assert [row["adj_p"] for row in d["rows"]] == [row.adj_p for row in r.rows]
    assert d["rows"][0]["ci_high"] == "inf"
    assert d["df"] == r.df and d["spec"]["alternative"] == "greater"
    lines = r.ci_csv().splitlines()
    assert lines[0] == "label,estimate,lower,upper"
    assert len(lines) == 4 and all(line.endswith(",inf") for line in lines[1:])
    assert "adj_p" in r.to_table()


def test_global_min_p_examples():
    def report(ps):
        rows = tuple(ContrastRow(f"r{i}", 0, 1, 0, p, -1, 1) for i, p in enumerate(ps))
        return TestReport(rows, min(ps), 2.0, 10, np.eye(len(ps)), SPEC)

    assert global_min_p(report([0.3, 0.7])) == 0.3
    assert global_min_p(report([0.42])) == 0.42


def test_survival_grand_mean(survival):
    plain = max_t_test(survival, TestSpec("grand_mean", "two_sided"))
    assert plain.row("breast").adj_p == pytest.approx(0.002, abs=0.005)
    assert plain.global_min_p == pytest.approx(0.002, abs=0.005)
    mod = max_t_test(survival, TestSpec("grand_mean", "two_sided", modified=True))
    expected = {"breast": 0.002, "bronchus": 0.13, "colon": 0.78, "ovary": 0.54, "stomach": 0.79}
    for site, p in expected.items():
        assert mod.row(site).adj_p == pytest.approx(p, abs=0.02)
    assert mod.df == 64 - 4 - 5  # four odd-sized sites lose one zero each


def test_litter_dunnett(litter):
    r = max_t_test(litter, TestSpec("dunnett", "greater"))
    assert r.labels == ["5 - 0", "50 - 0", "500 - 0"]
    np.testing.assert_allclose(r.adj_p, [0.022, 0.491, 0.022], atol=0.005)
    assert r.row("50").ci_low < 0 < r.row("5").ci_low
