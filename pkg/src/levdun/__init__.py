"""Many-to-one and grand-mean comparisons of variances via Levene-transformed maxT tests."""

from .anova import FitSummary, brown_forsythe_f, contrast_estimate, fit_oneway
from .contrasts import (
    ContrastMatrix,
    correlation_from_contrasts,
    dunnett_matrix,
    grand_mean_matrix,
)
from .dataset import GroupedSample, bundled_dataset, load_csv, summarize_groups
from .errors import (
    ConvergenceError,
    DegenerateFitError,
    DegenerateGroupError,
    InsufficientDataError,
    LevDunError,
    NumericError,
    ParseError,
    SchemaError,
    ValidationError,
)
from .inference import TestReport, TestSpec, global_min_p, max_t_test, simultaneous_ci
from .mvt import MvtSettings, cholesky_factor, equicoordinate_quantile, mvt_prob
from .simulate import ScenarioSpec, SimResult, run_power_grid, run_scenario
from .transform import (
    TransformedSample,
    group_median,
    levene_transform,
    modified_levene_transform,
)

__version__ = "0.1.0"
