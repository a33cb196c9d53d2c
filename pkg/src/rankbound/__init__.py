"""rankbound: learned-index local search with counted steps, piecewise
CDF approximation oracles, and empirical checks of query-cost lower
bounds."""

from ._accel import NUMBA_ENABLED
from .affine import best_affine_l1, best_affine_on_table
from .bounds import (
    ROWS,
    BoundReport,
    BoundSpec,
    e1_table_form,
    log_bound_constants,
    table1_bound,
    vacuity_threshold,
)
from .distributions import (
    CdfModel,
    KeySample,
    parse_dist,
    power_law,
    sample_iid,
    staircase,
    tabulated_cdf,
    truncated_exponential,
    truncated_logistic,
    uniform,
)
from .dp import dp_segment_values, optimal_p0_general, optimal_piecewise_dp
from .empirical import (
    DeviationReport,
    cvm_small_dev_log10,
    cvm_small_dev_probability,
    cvm_statistic,
    cvm_threshold,
    deviation_report,
    dkw_expected_bound,
    ecdf_eval,
    l1_deviation,
    sup_deviation,
)
from .errors import (
    DomainError,
    InvariantViolation,
    ResolutionError,
    SingularityError,
    UnsupportedError,
)
from .harness import (
    ExperimentConfig,
    baseline_binary_search,
    parse_config,
    run_experiment,
    verify_bounds,
)
from .index import CostBreakdown, LearnedIndex, build
from .measures import MeasureSpec, explicit, lebesgue, matched, parse_mu, sample_queries
from .piecewise import (
    ApproxResult,
    PiecewiseModel,
    adversarial_lower_bound,
    cdf_from_lipschitz,
    interpolation_upper_bound,
    l1_error,
    make_model,
    optimal_p0_matched,
    pushforward_density,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "best_affine_l1",
    "best_affine_on_table",
    "ROWS",
    "BoundReport",
    "BoundSpec",
    "e1_table_form",
    "log_bound_constants",
    "table1_bound",
    "vacuity_threshold",
    "CdfModel",
    "KeySample",
    "parse_dist",
    "power_law",
    "sample_iid",
    "staircase",
    "tabulated_cdf",
    "truncated_exponential",
    "truncated_logistic",
    "uniform",
    "dp_segment_values",
    "optimal_p0_general",
    "optimal_piecewise_dp",
    "DeviationReport",
    "cvm_small_dev_log10",
    "cvm_small_dev_probability",
    "cvm_statistic",
    "cvm_threshold",
    "deviation_report",
    "dkw_expected_bound",
    "ecdf_eval",
    "l1_deviation",
    "sup_deviation",
    "DomainError",
    "InvariantViolation",
    "ResolutionError",
    "SingularityError",
    "UnsupportedError",
    "ExperimentConfig",
    "baseline_binary_search",
    "parse_config",
    "run_experiment",
    "verify_bounds",
    "CostBreakdown",
    "LearnedIndex",
    "build",
    "MeasureSpec",
    "explicit",
    "lebesgue",
    "matched",
    "parse_mu",
    "sample_queries",
    "ApproxResult",
    "PiecewiseModel",
    "adversarial_lower_bound",
    "cdf_from_lipschitz",
    "interpolation_upper_bound",
    "l1_error",
    "make_model",
    "optimal_p0_matched",
    "pushforward_density",
]
