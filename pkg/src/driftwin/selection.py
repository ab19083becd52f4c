"""Model assessment, pairwise comparison and tournament selection.

All routines consume a :class:`LossTable` of raw per-sample losses. A
model is assessed by adaptively window-averaging its own losses; two
models are compared by window-averaging the per-sample loss differences,
which is what makes the comparison sharp when the models are correlated.
A single-elimination tournament extends pairwise comparison to any number
of candidates with exactly m - 1 comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .summaries import SummarySeries
from .window import WindowConfig, WindowDiagnostics, select_window


class LossTable:
    """Per-period matrices of per-sample losses, one column per model.

    Stored as one stacked (total_samples x n_models) matrix plus period
    offsets, so per-period and windowed aggregates are single reductions.
    """

    def __init__(self, periods: Sequence[np.ndarray], models: Sequence[str] | None = None):
        matrices = [np.asarray(p, dtype=float) for p in periods]
        if not matrices:
            raise ValueError("loss table must contain at least one period")
        for j, mat in enumerate(matrices):
            if mat.ndim != 2 or mat.shape[0] < 1:
                raise ValueError(f"period {j + 1}: expected a non-empty 2-d loss matrix")
            if mat.shape[1] != matrices[0].shape[1]:
                raise ValueError(
                    f"period {j + 1}: has {mat.shape[1]} models, expected {matrices[0].shape[1]}"
                )
        counts = np.array([mat.shape[0] for mat in matrices], dtype=np.int64)
        stacked = np.concatenate(matrices, axis=0) if len(matrices) > 1 else matrices[0]
        self._setup(stacked, counts, models)

    @classmethod
    def from_stacked(
        cls,
        stacked: np.ndarray,
        counts: Sequence[int] | np.ndarray,
        models: Sequence[str] | None = None,
    ) -> "LossTable":
        """Build from an already stacked loss matrix and per-period row counts."""
        stacked = np.asarray(stacked, dtype=float)
        counts = np.asarray(counts, dtype=np.int64)
        if stacked.ndim != 2:
            raise ValueError(f"expected a 2-d stacked matrix, got shape {stacked.shape}")
        if counts.ndim != 1 or counts.size == 0 or counts.min() < 1:
            raise ValueError("counts must be a non-empty 1-d array of positive integers")
        if counts.sum() != stacked.shape[0]:
            raise ValueError(
                f"counts sum to {counts.sum()} but the matrix has {stacked.shape[0]} rows"
            )
        table = cls.__new__(cls)
        table._setup(stacked, counts, models)
        return table

    def _setup(
        self, stacked: np.ndarray, counts: np.ndarray, models: Sequence[str] | None
    ) -> None:
        if not np.all(np.isfinite(stacked)):
            raise ValueError("losses contain non-finite values")
        self._stacked = stacked
        self._counts = counts
        self._offsets = np.concatenate([[0], np.cumsum(counts)])
        n_models = stacked.shape[1]
        if models is None:
            models = tuple(f"f{r + 1}" for r in range(n_models))
        else:
            models = tuple(str(m) for m in models)
            if len(models) != n_models:
                raise ValueError(f"{len(models)} model names for {n_models} columns")
            if len(set(models)) != len(models):
                raise ValueError("model names must be unique")
        self.models = models

    @property
    def periods(self) -> tuple[np.ndarray, ...]:
        return tuple(
            self._stacked[self._offsets[j] : self._offsets[j + 1]]
            for j in range(self.n_periods)
        )

    @property
    def counts(self) -> np.ndarray:
        """Batch size of each period."""
        return self._counts

    @property
    def n_periods(self) -> int:
        return len(self._counts)

    @property
    def n_models(self) -> int:
        return len(self.models)

    def model_index(self, name: str) -> int:
        try:
            return self.models.index(name)
        except ValueError:
            raise KeyError(f"unknown model {name!r}; have {list(self.models)}") from None

    def column(self, r: int) -> list[np.ndarray]:
        """Per-period loss vectors of model ``r``."""
        self._check_index(r)
        return [
            self._stacked[self._offsets[j] : self._offsets[j + 1], r]
            for j in range(self.n_periods)
        ]

    def _check_index(self, r: int) -> None:
        if not 0 <= r < self.n_models:
            raise IndexError(f"model index {r} out of range [0, {self.n_models})")

    def _series_of(self, values: np.ndarray) -> SummarySeries:
        """Per-period summaries of one value per stacked sample row."""
        starts = self._offsets[:-1]
        sums = np.add.reduceat(values, starts)
        moments = np.add.reduceat(values * values, starts)
        return SummarySeries.from_arrays(
            self._counts, sums / self._counts, moments / self._counts
        )

    def __repr__(self) -> str:
        return f"LossTable(t={self.n_periods}, models={list(self.models)})"


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome of one adaptive pairwise comparison.

    ``gap_estimate`` is the window-averaged loss difference first minus
    second at the selected window; the first model wins ties.
    """

    first: int
    second: int
    winner: int
    gap_estimate: float
    diagnostics: WindowDiagnostics


@dataclass(frozen=True)
class MatchRecord:
    first: int
    second: int
    winner: int
    gap_estimate: float
    window: int


@dataclass(frozen=True)
class RoundRecord:
    matches: tuple[MatchRecord, ...]
    bye: int | None


@dataclass(frozen=True)
class BracketRecord:
    """Full trace of a single-elimination tournament."""

    rounds: tuple[RoundRecord, ...]
    champion: int
    comparisons_made: int


def assess_model(
    losses: LossTable, r: int, config: WindowConfig
) -> tuple[float, WindowDiagnostics]:
    """Estimate model ``r``'s current generalization error from its loss history."""
    losses._check_index(r)
    diagnostics = select_window(losses._series_of(losses._stacked[:, r]), config)
    return diagnostics.estimate, diagnostics


def diff_summaries(losses: LossTable, r1: int, r2: int) -> SummarySeries:
    """Per-period summaries of the per-sample loss differences r1 minus r2."""
    losses._check_index(r1)
    losses._check_index(r2)
    if r1 == r2:
        raise ValueError("model indices must differ")
    return losses._series_of(losses._stacked[:, r1] - losses._stacked[:, r2])


def compare_pair(losses: LossTable, r1: int, r2: int, config: WindowConfig) -> ComparisonResult:
    """Compare two models on the adaptively window-averaged loss gap.

    The caller should set ``config.range_width`` to the scale of the
    differences: if single-model losses span width w, differences span
    width 2w.
    """
    series = diff_summaries(losses, r1, r2)
    diagnostics = select_window(series, config)
    gap = diagnostics.estimate
    winner = r1 if gap <= 0.0 else r2
    return ComparisonResult(
        first=r1, second=r2, winner=winner, gap_estimate=gap, diagnostics=diagnostics
    )


def tournament(losses: LossTable, config: WindowConfig) -> BracketRecord:
    """Single-elimination tournament over all models in the table.

    Survivors are paired in input order each round; a leftover model
    advances on a bye. Runs exactly ``n_models - 1`` comparisons over
    ``ceil(log2(n_models))`` rounds.
    """
    survivors = list(range(losses.n_models))
    rounds: list[RoundRecord] = []
    comparisons = 0
    while len(survivors) > 1:
        matches = []
        advancing = []
        for i in range(0, len(survivors) - 1, 2):
            result = compare_pair(losses, survivors[i], survivors[i + 1], config)
            matches.append(
                MatchRecord(
                    first=result.first,
                    second=result.second,
                    winner=result.winner,
                    gap_estimate=result.gap_estimate,
                    window=result.diagnostics.chosen_window,
                )
            )
            advancing.append(result.winner)
            comparisons += 1
        bye = survivors[-1] if len(survivors) % 2 else None
        if bye is not None:
            advancing.append(bye)
        rounds.append(RoundRecord(matches=tuple(matches), bye=bye))
        survivors = advancing
    return BracketRecord(
        rounds=tuple(rounds), champion=survivors[0], comparisons_made=comparisons
    )


def expected_rounds(n_models: int) -> int:
    """Number of tournament rounds for ``n_models`` candidates."""
    if n_models < 1:
        raise ValueError("need at least one model")
    return math.ceil(math.log2(n_models)) if n_models > 1 else 0


def comparison_range_width(lo: float, hi: float) -> float:
    """Range width to use when comparing models with losses in [lo, hi].

    Per-sample loss differences live in [-(hi - lo), hi - lo], so their
    range width is twice the single-model one.
    """
    if hi < lo:
        raise ValueError(f"invalid loss range [{lo}, {hi}]")
    return 2.0 * (hi - lo)


def fixed_window_select(losses: LossTable, k: int) -> int:
    """Pick the model with the lowest pooled mean loss over the last min(t, k) periods.

    Ties go to the smallest model index.
    """
    if k < 1:
        raise ValueError(f"window k must be >= 1, got {k}")
    span = min(losses.n_periods, k)
    start = losses._offsets[losses.n_periods - span]
    pooled = losses._stacked[start:].mean(axis=0)
    return int(np.argmin(pooled))
