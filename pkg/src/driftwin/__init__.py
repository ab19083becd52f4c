"""Adaptive rolling-window model assessment and selection under temporal drift."""

from .summaries import PeriodSummary, SummarySeries, pooled_stats, summarize_batch
from .window import (
    WindowConfig,
    WindowDiagnostics,
    bias_proxy,
    noise_bound,
    select_window,
    union_bound_delta,
)
from .selection import (
    BracketRecord,
    ComparisonResult,
    LossTable,
    MatchRecord,
    RoundRecord,
    assess_model,
    compare_pair,
    comparison_range_width,
    diff_summaries,
    expected_rounds,
    fixed_window_select,
    tournament,
)
from .synthetic import (
    ExperimentReport,
    ScenarioConfig,
    bounded_drift_means,
    candidate_estimates,
    changepoint_means,
    composite_means,
    constant_means,
    gen_trial_data,
    oracle_bias_variance,
    run_experiment,
    trial_rng,
)
from .io import DataFormatError, read_losses, read_samples, write_report
from .estimators import AdaptiveRollingMean, FixedWindowSelector, TournamentSelector
from .validation import as_batches, as_loss_table, as_series

__version__ = "0.1.0"

__all__ = [
    "PeriodSummary",
    "SummarySeries",
    "pooled_stats",
    "summarize_batch",
    "WindowConfig",
    "WindowDiagnostics",
    "bias_proxy",
    "noise_bound",
    "select_window",
    "union_bound_delta",
    "BracketRecord",
    "ComparisonResult",
    "LossTable",
    "MatchRecord",
    "RoundRecord",
    "assess_model",
    "compare_pair",
    "comparison_range_width",
    "diff_summaries",
    "expected_rounds",
    "fixed_window_select",
    "tournament",
    "ExperimentReport",
    "ScenarioConfig",
    "bounded_drift_means",
    "candidate_estimates",
    "changepoint_means",
    "composite_means",
    "constant_means",
    "gen_trial_data",
    "oracle_bias_variance",
    "run_experiment",
    "trial_rng",
    "DataFormatError",
    "read_losses",
    "read_samples",
    "write_report",
    "AdaptiveRollingMean",
    "FixedWindowSelector",
    "TournamentSelector",
    "as_batches",
    "as_loss_table",
    "as_series",
]
