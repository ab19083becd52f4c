"""Scikit-learn style wrappers around the adaptive window routines.

These estimators make the package compose with sklearn tooling
(``get_params`` / ``set_params``, cloning, pipelines that pass through
fitted attributes). X is a per-period structure rather than a flat
sample matrix: a sequence of 1-d batches for mean estimation, and a
sequence of (samples x models) loss matrices for selection.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .selection import fixed_window_select, tournament
from .validation import as_loss_table, as_series
from .window import WindowConfig, select_window


class AdaptiveRollingMean(BaseEstimator):
    """Estimate the current period's mean by adaptive look-back pooling.

    Parameters
    ----------
    delta_prime : float, default=0.1
        Per-window confidence level of the noise bound.
    range_width : float, default=0.0
        Known width of the observation range; 0 disables range terms.
    tie_break : {"smallest_k", "largest_k"}, default="smallest_k"
        Which window wins when objectives tie exactly.

    Attributes
    ----------
    estimate_ : float
        Pooled mean at the selected window.
    window_ : int
        Selected look-back window (1-based; 1 means current period only).
    diagnostics_ : WindowDiagnostics
        Per-window scores behind the selection.
    """

    def __init__(
        self,
        delta_prime: float = 0.1,
        range_width: float = 0.0,
        tie_break: str = "smallest_k",
    ):
        self.delta_prime = delta_prime
        self.range_width = range_width
        self.tie_break = tie_break

    def fit(self, X, y=None):
        """Fit on per-period batches (sequence of 1-d arrays or a SummarySeries)."""
        series = as_series(X)
        diagnostics = select_window(series, self._config())
        self.diagnostics_ = diagnostics
        self.window_ = diagnostics.chosen_window
        self.estimate_ = diagnostics.estimate
        self.n_periods_ = len(series)
        return self

    def predict(self, X=None) -> float:
        """Return the fitted estimate of the current mean."""
        if not hasattr(self, "estimate_"):
            raise NotFittedError("call fit before predict")
        return self.estimate_

    def _config(self) -> WindowConfig:
        return WindowConfig(
            delta_prime=self.delta_prime,
            range_width=self.range_width,
            tie_break=self.tie_break,
        )


class TournamentSelector(BaseEstimator):
    """Pick the best model column of a loss table by tournament comparison.

    Attributes after ``fit``: ``best_index_``, ``best_model_`` and the
    full ``bracket_`` trace.
    """

    def __init__(
        self,
        delta_prime: float = 0.1,
        range_width: float = 0.0,
        tie_break: str = "smallest_k",
    ):
        self.delta_prime = delta_prime
        self.range_width = range_width
        self.tie_break = tie_break

    def fit(self, X, y=None):
        """Fit on per-period loss matrices (samples x models per period)."""
        table = as_loss_table(X)
        config = WindowConfig(
            delta_prime=self.delta_prime,
            range_width=self.range_width,
            tie_break=self.tie_break,
        )
        bracket = tournament(table, config)
        self.bracket_ = bracket
        self.best_index_ = bracket.champion
        self.best_model_ = table.models[bracket.champion]
        self.n_models_ = table.n_models
        return self


class FixedWindowSelector(BaseEstimator):
    """Pick the model with the lowest mean loss over the last ``window`` periods."""

    def __init__(self, window: int = 1):
        self.window = window

    def fit(self, X, y=None):
        table = as_loss_table(X)
        self.best_index_ = fixed_window_select(table, self.window)
        self.best_model_ = table.models[self.best_index_]
        self.n_models_ = table.n_models
        return self
