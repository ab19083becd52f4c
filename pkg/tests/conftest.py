"""Shared independent oracles and data generators for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from driftwin import LossTable


def flatten_pooled(batches, k):
    """Reference pooled stats: flatten the last k raw batches and recompute.

    Independent of the summary-based path; Bessel-corrected variance,
    defined as 0.0 for a single pooled sample.
    """
    values = np.concatenate([np.asarray(b, dtype=float) for b in batches[len(batches) - k :]])
    count = values.size
    mean = values.sum() / count
    if count == 1:
        return count, mean, 0.0
    var = np.sum((values - mean) ** 2) / (count - 1)
    return count, mean, float(var)


def reference_noise_bound(var, count, delta_prime, range_width):
    """Reference empirical-Bernstein bound, written directly from the formula."""
    if count == 1:
        return range_width
    log_term = math.log(2.0 / delta_prime)
    return math.sqrt(var) * math.sqrt(2.0 * log_term / count) + (
        8.0 * range_width * log_term / (3.0 * (count - 1))
    )


def random_batches(rng, t=None, max_batch=5, loc_scale=2.0):
    """Ragged per-period batches with random sizes and shifting locations."""
    if t is None:
        t = int(rng.integers(1, 12))
    sizes = rng.integers(1, max_batch + 1, size=t)
    centers = rng.normal(0.0, loc_scale, size=t)
    return [rng.normal(c, 1.0, size=int(n)) for c, n in zip(centers, sizes)]


def mixed_bounded_series(rng, t_range=(5, 50)):
    """One bounded synthetic series with known per-period means.

    Mean patterns cycle through constant, single shift, sinusoid and a
    small random walk; observations are Bernoulli so they live in [0, 1]
    with range width 1 and known variance m * (1 - m).
    """
    t = int(rng.integers(*t_range))
    kind = int(rng.integers(4))
    base = float(rng.uniform(0.2, 0.8))
    if kind == 0:
        means = np.full(t, base)
    elif kind == 1:
        means = np.full(t, base)
        if t > 1:
            means[int(rng.integers(1, t)) :] = rng.uniform(0.1, 0.9)
    elif kind == 2:
        means = base + 0.3 * np.sin(np.linspace(0.0, rng.uniform(1.0, 3.0) * np.pi, t))
    else:
        steps = rng.choice([-1.0, 1.0], size=t - 1) * rng.uniform(0.01, 0.05)
        means = base + np.concatenate([[0.0], np.cumsum(steps)])
    means = np.clip(means, 0.05, 0.95)
    counts = rng.integers(1, 6, size=t)
    batches = [rng.binomial(1, m, size=int(c)).astype(float) for m, c in zip(means, counts)]
    return means, counts, batches


def two_model_table(rng, t_range=(3, 25)):
    """Loss table for two models with known per-period true mean losses.

    Returns (table, true_means) where true_means has shape (t, 2); losses
    are Gaussian around them so the current-period risks are known.
    """
    t = int(rng.integers(*t_range))
    true_means = rng.normal(1.0, 0.7, size=(t, 2))
    mats = []
    for j in range(t):
        n = int(rng.integers(1, 5))
        mats.append(true_means[j] + rng.normal(0.0, 0.5, size=(n, 2)))
    return LossTable(mats), true_means


@pytest.fixture
def rng():
    return np.random.default_rng(20240911)
