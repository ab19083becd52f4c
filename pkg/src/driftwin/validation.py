"""Input coercion and validation helpers shared by the estimator API and CLI."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .selection import LossTable
from .summaries import SummarySeries


def as_batches(X) -> list[np.ndarray]:
    """Coerce input into a list of per-period 1-d sample batches.

    Accepts a sequence of 1-d array-likes (ragged batches allowed) or a
    2-d array whose rows are equal-sized period batches.
    """
    if isinstance(X, np.ndarray) and X.ndim == 2:
        X = list(X)
    batches = []
    for j, batch in enumerate(X):
        values = np.asarray(batch, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError(f"period {j + 1}: expected a non-empty 1-d batch")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"period {j + 1}: batch contains non-finite values")
        batches.append(values)
    if not batches:
        raise ValueError("need at least one period batch")
    return batches


def as_series(X) -> SummarySeries:
    """Coerce input into a :class:`SummarySeries`."""
    if isinstance(X, SummarySeries):
        return X
    return SummarySeries.from_batches(as_batches(X))


def as_loss_table(X, models: Sequence[str] | None = None) -> LossTable:
    """Coerce input into a :class:`LossTable`.

    Accepts a LossTable, a 3-d array (periods x samples x models), or a
    sequence of per-period 2-d loss matrices.
    """
    if isinstance(X, LossTable):
        return X
    if isinstance(X, np.ndarray) and X.ndim == 3:
        X = list(X)
    return LossTable(X, models=models)
