"""Adaptive look-back window selection for mean estimation under drift.

For every window k the pooled mean over the last k periods is scored by
two data-driven terms:

* ``noise_bound`` - an empirical-Bernstein bound on the stochastic
  fluctuation of the pooled mean,
* ``bias_proxy`` - a pairwise-comparison estimate of the pooling bias,
  in the style of adaptive bandwidth selection: window k is compared
  against every smaller window i and any excess gap beyond the combined
  noise bounds is attributed to bias.

The selected window minimizes their sum, trading freshness (small k, low
bias) against sample size (large k, low noise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .summaries import SummarySeries, window_arrays

TieBreak = Literal["smallest_k", "largest_k"]


@dataclass(frozen=True)
class WindowConfig:
    """Hyperparameters for adaptive window selection.

    ``delta_prime`` is the per-window confidence level inside the noise
    bound; ``range_width`` is the width of the interval the observations
    are known to lie in (0 disables the range-dependent term, which is
    how the synthetic experiments run); ties in the objective are broken
    per ``tie_break``.
    """

    delta_prime: float = 0.1
    range_width: float = 0.0
    tie_break: TieBreak = "smallest_k"

    def __post_init__(self) -> None:
        if not 0.0 < self.delta_prime < 1.0:
            raise ValueError(f"delta_prime must be in (0, 1), got {self.delta_prime}")
        if self.range_width < 0.0:
            raise ValueError(f"range_width must be >= 0, got {self.range_width}")
        if self.tie_break not in ("smallest_k", "largest_k"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")


@dataclass(frozen=True)
class WindowDiagnostics:
    """Per-window scores and the selected window.

    Arrays are indexed by window size minus one: entry ``k - 1`` refers to
    pooling the last ``k`` periods. ``chosen_window`` is 1-based.
    """

    counts: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    noise_bounds: np.ndarray
    bias_proxies: np.ndarray
    objectives: np.ndarray
    chosen_window: int
    estimate: float

    @property
    def n_windows(self) -> int:
        return len(self.counts)


def union_bound_delta(delta: float, n_periods: int, n_models: int = 1) -> float:
    """Per-window confidence level that makes the overall guarantee hold at ``delta``.

    Splits the failure probability across the ``n_periods`` candidate
    windows (and, for tournaments over ``n_models`` candidates, across all
    model pairs): delta / (3 * n_models**2 * n_periods).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if n_periods < 1 or n_models < 1:
        raise ValueError("n_periods and n_models must be >= 1")
    return delta / (3.0 * n_models**2 * n_periods)


def noise_bound(
    pooled_var: float, pooled_count: int, delta_prime: float, range_width: float
) -> float:
    """Empirical-Bernstein fluctuation bound for a pooled mean.

    With B pooled samples of sample variance v^2, values confined to an
    interval of width M, and confidence level delta':

        sqrt(v^2) * sqrt(2 ln(2/delta') / B) + 8 M ln(2/delta') / (3 (B - 1))

    A single sample carries no variance information, so the bound
    degrades to M there.
    """
    if not 0.0 < delta_prime < 1.0:
        raise ValueError(f"delta_prime must be in (0, 1), got {delta_prime}")
    if pooled_count < 1:
        raise ValueError(f"pooled_count must be >= 1, got {pooled_count}")
    if pooled_var < 0.0:
        raise ValueError(f"pooled_var must be >= 0, got {pooled_var}")
    if pooled_count == 1:
        return float(range_width)
    log_term = math.log(2.0 / delta_prime)
    return float(
        math.sqrt(pooled_var) * math.sqrt(2.0 * log_term / pooled_count)
        + 8.0 * range_width * log_term / (3.0 * (pooled_count - 1))
    )


def bias_proxy(k: int, pooled_means: Sequence[float], noise_bounds: Sequence[float]) -> float:
    """Estimated pooling bias of window ``k`` against all smaller windows.

    max over i <= k of (|mean_k - mean_i| - (noise_k + noise_i))_+ .
    Any gap between two window means that the noise bounds cannot explain
    is counted as bias; the positive part discards gaps they can.
    """
    means = np.asarray(pooled_means, dtype=float)
    noise = np.asarray(noise_bounds, dtype=float)
    if not 1 <= k <= len(means) or len(means) != len(noise):
        raise ValueError("windows 1..k must be covered by both arrays")
    gaps = np.abs(means[k - 1] - means[:k]) - (noise[k - 1] + noise[:k])
    return float(np.maximum(gaps, 0.0).max())


def select_window(series: SummarySeries, config: WindowConfig) -> WindowDiagnostics:
    """Score every look-back window and pick the objective minimizer.

    The objective for window k is bias_proxy(k) + noise_bound(k); the
    estimate is the pooled mean at the chosen window.
    """
    counts, means, variances = window_arrays(series)
    t = len(counts)

    log_term = math.log(2.0 / config.delta_prime)
    noise = np.empty(t)
    single = counts == 1
    noise[single] = config.range_width
    b = counts[~single].astype(float)
    noise[~single] = np.sqrt(variances[~single]) * np.sqrt(2.0 * log_term / b) + (
        8.0 * config.range_width * log_term / (3.0 * (b - 1.0))
    )

    if t <= 2048:
        gaps = np.abs(means[:, None] - means[None, :]) - (noise[:, None] + noise[None, :])
        gaps[~np.tri(t, dtype=bool)] = -np.inf  # window k only checks i <= k
        bias = np.maximum(gaps.max(axis=1), 0.0)
    else:
        bias = np.empty(t)
        for k in range(1, t + 1):
            pair_gaps = np.abs(means[k - 1] - means[:k]) - (noise[k - 1] + noise[:k])
            bias[k - 1] = max(pair_gaps.max(), 0.0)

    objectives = bias + noise
    if not np.all(np.isfinite(objectives)):
        raise ArithmeticError("window objectives are not finite")

    best = objectives.min()
    ties = np.flatnonzero(objectives == best)
    chosen = int(ties[0] if config.tie_break == "smallest_k" else ties[-1]) + 1

    return WindowDiagnostics(
        counts=counts,
        means=means,
        variances=variances,
        noise_bounds=noise,
        bias_proxies=bias,
        objectives=objectives,
        chosen_window=chosen,
        estimate=float(means[chosen - 1]),
    )
