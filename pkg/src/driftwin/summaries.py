"""Per-period summary statistics and pooled look-back window statistics.

Each time period contributes a batch of scalar observations. A batch is
reduced to (count, mean, second moment); pooled means and Bessel-corrected
sample variances over any trailing window of periods are then exact
functions of these summaries:

    pooled_mean = sum_j B_j * mean_j / B
    pooled_var  = B / (B - 1) * (sum_j B_j * second_moment_j / B - pooled_mean^2)

with B the pooled count. No raw samples need to be retained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

# Slack for the second_moment >= mean^2 invariant; the difference enters
# pooled variances, which are clamped at zero anyway.
MOMENT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PeriodSummary:
    """Sufficient statistics of one period's batch."""

    count: int
    mean: float
    second_moment: float

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not (np.isfinite(self.mean) and np.isfinite(self.second_moment)):
            raise ValueError("summary statistics must be finite")
        floor = self.mean**2 - MOMENT_TOLERANCE * max(1.0, self.mean**2)
        if self.second_moment < floor:
            raise ValueError(
                f"second_moment {self.second_moment} is below mean^2 {self.mean**2}"
            )


def summarize_batch(samples: Sequence[float] | np.ndarray) -> PeriodSummary:
    """Reduce one period's batch of scalar samples to its summary."""
    values = np.asarray(samples, dtype=float)
    if values.ndim != 1:
        raise ValueError(f"expected a 1-d batch, got shape {values.shape}")
    if values.size == 0:
        raise ValueError("empty batch")
    if not np.all(np.isfinite(values)):
        raise ValueError("batch contains non-finite values")
    return PeriodSummary(
        count=int(values.size),
        mean=float(values.mean()),
        second_moment=float(np.mean(values**2)),
    )


class SummarySeries:
    """Time-ordered per-period summaries; the last entry is the current period."""

    def __init__(self, periods: Iterable[PeriodSummary]):
        periods = tuple(periods)
        if not periods:
            raise ValueError("series must contain at least one period")
        self._counts = np.array([p.count for p in periods], dtype=np.int64)
        self._means = np.array([p.mean for p in periods], dtype=float)
        self._second_moments = np.array([p.second_moment for p in periods], dtype=float)

    @classmethod
    def from_arrays(
        cls,
        counts: np.ndarray,
        means: np.ndarray,
        second_moments: np.ndarray,
    ) -> "SummarySeries":
        """Build a series directly from parallel per-period arrays."""
        counts = np.asarray(counts, dtype=np.int64)
        means = np.asarray(means, dtype=float)
        second_moments = np.asarray(second_moments, dtype=float)
        if not (counts.shape == means.shape == second_moments.shape) or counts.ndim != 1:
            raise ValueError("counts, means and second_moments must be parallel 1-d arrays")
        if counts.size == 0:
            raise ValueError("series must contain at least one period")
        if counts.min() < 1:
            raise ValueError("every period count must be >= 1")
        if not (np.all(np.isfinite(means)) and np.all(np.isfinite(second_moments))):
            raise ValueError("summary statistics must be finite")
        floor = means**2 - MOMENT_TOLERANCE * np.maximum(1.0, means**2)
        if np.any(second_moments < floor):
            raise ValueError("second_moment below mean^2 in at least one period")
        series = cls.__new__(cls)
        series._counts = counts
        series._means = means
        series._second_moments = second_moments
        return series

    @classmethod
    def from_batches(cls, batches: Iterable[Sequence[float] | np.ndarray]) -> "SummarySeries":
        return cls(summarize_batch(b) for b in batches)

    @property
    def counts(self) -> np.ndarray:
        return self._counts

    @property
    def means(self) -> np.ndarray:
        return self._means

    @property
    def second_moments(self) -> np.ndarray:
        return self._second_moments

    def __len__(self) -> int:
        return len(self._counts)

    def __iter__(self) -> Iterator[PeriodSummary]:
        return (self[j] for j in range(len(self)))

    def __getitem__(self, j: int) -> PeriodSummary:
        return PeriodSummary(
            count=int(self._counts[j]),
            mean=float(self._means[j]),
            second_moment=float(self._second_moments[j]),
        )

    def __repr__(self) -> str:
        return f"SummarySeries(t={len(self)}, total_count={int(self._counts.sum())})"


def pooled_stats(series: SummarySeries, k: int) -> tuple[int, float, float]:
    """Pooled (count, mean, sample variance) over the last ``k`` periods.

    The variance is the Bessel-corrected sample variance of all pooled
    samples, clamped below at zero; it is defined as 0.0 when the pooled
    count is 1.
    """
    t = len(series)
    if not 1 <= k <= t:
        raise ValueError(f"window k={k} out of range [1, {t}]")
    counts, means, variances = window_arrays(series)
    return int(counts[k - 1]), float(means[k - 1]), float(variances[k - 1])


def window_arrays(series: SummarySeries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pooled counts, means and sample variances for every window k = 1..t.

    One backward prefix scan over the summaries; entry ``k - 1``
    corresponds to pooling the last ``k`` periods.
    """
    counts = series.counts[::-1].cumsum()
    weighted_means = (series.counts * series.means)[::-1].cumsum()
    weighted_moments = (series.counts * series.second_moments)[::-1].cumsum()

    means = weighted_means / counts
    variances = np.zeros_like(means)
    multi = counts > 1
    raw = weighted_moments[multi] / counts[multi] - means[multi] ** 2
    variances[multi] = counts[multi] / (counts[multi] - 1) * np.maximum(raw, 0.0)
    return counts, means, variances
