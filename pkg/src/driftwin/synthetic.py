"""Synthetic drift scenarios and the simulation harness.

Each scenario is a sequence of true per-period means; per-period batches
are Gaussian around them. Candidate models are trailing-window averages
of the training stream, selection methods see squared-error losses on
the validation stream, and a selected candidate is charged the squared
distance between its value and the current true mean (its excess risk,
since all candidates share the same irreducible noise).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .selection import LossTable, fixed_window_select, tournament
from .window import WindowConfig

ADAPTIVE_METHOD = "ARW"


@dataclass(frozen=True)
class ScenarioConfig:
    """Knobs for scenario generation and the simulation protocol.

    The composite scenario concatenates four segments: abrupt level
    shifts, a sinusoid, a stationary stretch, and a +/-step random walk.
    ``boundaries`` are the last periods (1-based) of segments 1-3; the
    walk runs to the horizon.
    """

    horizon: int = 100
    sigma2: float = 1.0
    window_menu: tuple[int, ...] = (1, 4, 16, 64, 256)
    trials: int = 20
    seed: int = 0
    boundaries: tuple[int, int, int] = (10, 32, 80)
    shift_levels: tuple[float, ...] = (0.5, 2.5, 1.2)
    wave_center: float = 2.0
    wave_amplitude: float = 0.4
    wave_cycles: float = 1.0
    stationary_level: float = 2.0
    walk_step: float = 0.05

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.sigma2 <= 0.0:
            raise ValueError("sigma2 must be > 0")
        menu = self.window_menu
        if not menu or any(w < 1 for w in menu) or list(menu) != sorted(set(menu)):
            raise ValueError("window_menu must be non-empty, ascending, without duplicates")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one trial; unaffected by the trial count."""
    return np.random.default_rng([seed, trial])


def constant_means(horizon: int, mu0: float = 0.0) -> np.ndarray:
    """Stationary scenario: the true mean never moves."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return np.full(horizon, float(mu0))


def changepoint_means(
    horizon: int, shift_at: int, before: float = 0.0, after: float = 3.0
) -> np.ndarray:
    """One abrupt shift: ``before`` through period ``shift_at``, ``after`` from the next."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if not 1 <= shift_at < horizon:
        raise ValueError(f"shift_at must be in [1, {horizon - 1}], got {shift_at}")
    means = np.full(horizon, float(before))
    means[shift_at:] = float(after)
    return means


def bounded_drift_means(
    horizon: int, step: float, seed: int = 0, start: float = 0.0
) -> np.ndarray:
    """Random walk with independent +/-step increments of equal probability."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if step < 0.0:
        raise ValueError("step must be >= 0")
    rng = np.random.default_rng([seed, 0x77A1])
    signs = rng.choice([-1.0, 1.0], size=horizon - 1)
    return start + np.concatenate([[0.0], np.cumsum(signs * step)])


def composite_means(config: ScenarioConfig) -> np.ndarray:
    """Four-segment scenario: shifts, sinusoid, stationary stretch, random walk."""
    b1, b2, b3 = config.boundaries
    if not 1 <= b1 < b2 < b3 < config.horizon:
        raise ValueError(
            f"boundaries {config.boundaries} do not partition [1, {config.horizon}]"
        )
    means = np.empty(config.horizon)

    levels = config.shift_levels or (0.0,)
    block = int(np.ceil(b1 / len(levels)))
    for t in range(b1):
        means[t] = levels[min(t // block, len(levels) - 1)]

    wave_len = b2 - b1
    phase = np.arange(wave_len) / wave_len
    means[b1:b2] = config.wave_center + config.wave_amplitude * np.sin(
        2.0 * np.pi * config.wave_cycles * phase
    )

    means[b2:b3] = config.stationary_level

    rng = np.random.default_rng([config.seed, 0xC0])
    signs = rng.choice([-1.0, 1.0], size=config.horizon - b3)
    means[b3:] = config.stationary_level + np.cumsum(signs * config.walk_step)
    return means


def gen_trial_data(
    means: np.ndarray, config: ScenarioConfig, rng: np.random.Generator
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per-period (train, validation) batches around the true means.

    Validation sizes are uniform on {2, 3, 4}, training batches are three
    times as large, and all samples are Normal(mean_t, sigma2). Sizes and
    values come from independent substreams so one never perturbs the
    other.
    """
    means = np.asarray(means, dtype=float)
    size_rng, value_rng = rng.spawn(2)
    sigma = float(np.sqrt(config.sigma2))
    val_sizes = size_rng.integers(2, 5, size=len(means))
    train, val = [], []
    for mu, n_val in zip(means, val_sizes):
        n_val = int(n_val)
        train.append(value_rng.normal(mu, sigma, size=3 * n_val))
        val.append(value_rng.normal(mu, sigma, size=n_val))
    return train, val


def candidate_estimates(
    train_batches: Sequence[np.ndarray], window_menu: Sequence[int]
) -> np.ndarray:
    """Trailing-window averages of the training stream.

    Entry [t - 1, i] is the pooled mean of the last min(w_i, t) training
    batches, the value the corresponding candidate model predicts at
    period t.
    """
    if any(w < 1 for w in window_menu):
        raise ValueError("windows must be >= 1")
    sums = np.concatenate([[0.0], np.cumsum([b.sum() for b in train_batches])])
    counts = np.concatenate([[0], np.cumsum([len(b) for b in train_batches])])
    horizon = len(train_batches)
    out = np.empty((horizon, len(window_menu)))
    for i, w in enumerate(window_menu):
        for t in range(1, horizon + 1):
            lo = max(0, t - w)
            out[t - 1, i] = (sums[t] - sums[lo]) / (counts[t] - counts[lo])
    return out


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregate of one simulated scenario across trials.

    ``per_period`` holds each method's excess risk averaged over trials,
    one entry per period; ``mean_excess`` averages those over periods.
    ``window_trace`` is the adaptive method's decisive comparison window
    (final tournament match), averaged over trials.
    """

    methods: tuple[str, ...]
    per_period: dict[str, np.ndarray]
    mean_excess: dict[str, float]
    window_trace: np.ndarray
    horizon: int = 0
    trials: int = 0


def run_experiment(
    config: ScenarioConfig,
    means: np.ndarray,
    selection_config: WindowConfig | None = None,
) -> ExperimentReport:
    """Simulate the full selection protocol on one mean sequence.

    Per trial and period t, the candidates are the trailing-window
    averages frozen at t; every method picks one using squared-error
    losses on the validation batches of periods 1..t, and is charged the
    squared distance between the pick's value and the true mean.
    """
    means = np.asarray(means, dtype=float)
    if len(means) != config.horizon:
        raise ValueError(f"means has length {len(means)}, expected {config.horizon}")
    if selection_config is None:
        selection_config = WindowConfig()

    menu = config.window_menu
    labels = [f"avg{w}" for w in menu]
    methods = (ADAPTIVE_METHOD, *[f"V{w}" for w in menu])
    excess = {m: np.zeros(config.horizon) for m in methods}
    windows = np.zeros(config.horizon)

    for trial in range(config.trials):
        rng = trial_rng(config.seed, trial)
        train, val = gen_trial_data(means, config, rng)
        candidates = candidate_estimates(train, menu)
        val_counts = np.array([len(v) for v in val], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(val_counts)])
        val_all = np.concatenate(val)

        for t in range(1, config.horizon + 1):
            values = candidates[t - 1]
            # loss of the constant predictor c on sample z is (c - z)^2
            stacked = (values[None, :] - val_all[: offsets[t], None]) ** 2
            table = LossTable.from_stacked(stacked, val_counts[:t], models=labels)

            bracket = tournament(table, selection_config)
            excess[ADAPTIVE_METHOD][t - 1] += (values[bracket.champion] - means[t - 1]) ** 2
            if bracket.rounds:
                windows[t - 1] += bracket.rounds[-1].matches[-1].window
            else:
                windows[t - 1] += 1

            for w in menu:
                pick = fixed_window_select(table, w)
                excess[f"V{w}"][t - 1] += (values[pick] - means[t - 1]) ** 2

    for m in methods:
        excess[m] /= config.trials
    windows /= config.trials

    return ExperimentReport(
        methods=methods,
        per_period=excess,
        mean_excess={m: float(excess[m].mean()) for m in methods},
        window_trace=windows,
        horizon=config.horizon,
        trials=config.trials,
    )


def oracle_bias_variance(
    means: np.ndarray,
    variances: np.ndarray | float,
    batch_sizes: np.ndarray,
    k: int,
) -> tuple[float, float]:
    """Ground-truth bias and pooled noise scale of window ``k``.

    Returns (bias, sigma): the worst-case mean discrepancy inside the
    window, max over the window of |mean_j - mean_t|, and the square root
    of the count-weighted average of the per-period variances. Only
    available in synthetic settings where the generator is known.
    """
    means = np.asarray(means, dtype=float)
    t = len(means)
    if not 1 <= k <= t:
        raise ValueError(f"window k={k} out of range [1, {t}]")
    sizes = np.asarray(batch_sizes, dtype=float)
    if sizes.shape != means.shape:
        raise ValueError("batch_sizes must match means in length")
    var = np.broadcast_to(np.asarray(variances, dtype=float), means.shape)

    window = slice(t - k, t)
    bias = float(np.abs(means[window] - means[-1]).max())
    pooled_var = float((sizes[window] * var[window]).sum() / sizes[window].sum())
    return bias, float(np.sqrt(pooled_var))
