import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from driftwin import (
    SummarySeries,
    WindowConfig,
    bias_proxy,
    noise_bound,
    select_window,
    union_bound_delta,
)

from conftest import flatten_pooled, random_batches, reference_noise_bound


class TestWindowConfig:
    def test_defaults(self):
        config = WindowConfig()
        assert (config.delta_prime, config.range_width, config.tie_break) == (
            0.1,
            0.0,
            "smallest_k",
        )

    @pytest.mark.parametrize("delta", [0.0, 1.0, -0.2, 1.5])
    def test_delta_domain(self, delta):
        with pytest.raises(ValueError, match="delta_prime"):
            WindowConfig(delta_prime=delta)

    def test_range_width_domain(self):
        with pytest.raises(ValueError, match="range_width"):
            WindowConfig(range_width=-1.0)

    def test_tie_break_domain(self):
        with pytest.raises(ValueError, match="tie_break"):
            WindowConfig(tie_break="coin_flip")


class TestNoiseBound:
    def test_single_sample_returns_range(self):
        assert noise_bound(3.7, 1, 0.25, 5.0) == 5.0

    def test_zero_variance_zero_range(self):
        assert noise_bound(0.0, 4, 0.5, 0.0) == 0.0

    def test_formula_value(self):
        expected = math.sqrt(2.0 * math.log(20.0) / 8.0)
        assert noise_bound(1.0, 8, 0.1, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_matches_reference_formula(self, rng):
        for _ in range(200):
            var = float(rng.uniform(0.0, 9.0))
            count = int(rng.integers(1, 200))
            delta = float(rng.uniform(0.01, 0.99))
            width = float(rng.uniform(0.0, 4.0))
            assert noise_bound(var, count, delta, width) == pytest.approx(
                reference_noise_bound(var, count, delta, width), rel=1e-12
            )

    def test_nonincreasing_in_count(self):
        values = [noise_bound(1.3, n, 0.1, 2.0) for n in range(2, 100)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            noise_bound(1.0, 0, 0.1, 0.0)
        with pytest.raises(ValueError):
            noise_bound(-1.0, 3, 0.1, 0.0)
        with pytest.raises(ValueError):
            noise_bound(1.0, 3, 1.2, 0.0)


class TestBiasProxy:
    def test_single_window_is_zero(self):
        assert bias_proxy(1, [4.2], [0.3]) == 0.0

    def test_equal_means_zero(self):
        assert bias_proxy(3, [1.0, 1.0, 1.0], [0.1, 0.2, 0.0]) == 0.0

    def test_hand_computed(self):
        assert bias_proxy(2, [1.0, 0.0], [0.2, 0.1]) == pytest.approx(0.7)

    def test_covers_only_first_k(self):
        # the third entry would dominate but lies outside window k = 2
        assert bias_proxy(2, [1.0, 0.0, 99.0], [0.2, 0.1, 0.0]) == pytest.approx(0.7)

    def test_mismatched_arrays(self):
        with pytest.raises(ValueError):
            bias_proxy(2, [1.0, 0.0], [0.1])

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=10),
        st.data(),
    )
    def test_nonnegative(self, means, data):
        noise = data.draw(
            st.lists(
                st.floats(0, 50, allow_nan=False),
                min_size=len(means),
                max_size=len(means),
            )
        )
        for k in range(1, len(means) + 1):
            assert bias_proxy(k, means, noise) >= 0.0


def brute_force_selection(batches, config):
    """Re-derive the whole selection from raw samples, independently."""
    t = len(batches)
    stats = [flatten_pooled(batches, k) for k in range(1, t + 1)]
    noise = [
        reference_noise_bound(var, count, config.delta_prime, config.range_width)
        for count, _, var in stats
    ]
    means = [mean for _, mean, _ in stats]
    objectives = []
    for k in range(1, t + 1):
        gaps = [
            abs(means[k - 1] - means[i]) - (noise[k - 1] + noise[i]) for i in range(k)
        ]
        objectives.append(max(max(gaps), 0.0) + noise[k - 1])
    best = min(objectives)
    ties = [k for k, obj in enumerate(objectives, start=1) if obj == best]
    chosen = ties[0] if config.tie_break == "smallest_k" else ties[-1]
    return chosen, means[chosen - 1], objectives


class TestSelectWindow:
    def test_single_period(self):
        series = SummarySeries.from_batches([[1.0, 5.0]])
        d = select_window(series, WindowConfig())
        assert d.chosen_window == 1
        assert d.estimate == 3.0
        assert d.bias_proxies[0] == 0.0

    def test_matches_brute_force_enumeration(self, rng):
        config = WindowConfig(delta_prime=0.2, range_width=1.5)
        for _ in range(50):
            batches = random_batches(rng)
            d = select_window(SummarySeries.from_batches(batches), config)
            chosen, estimate, objectives = brute_force_selection(batches, config)
            assert d.chosen_window == chosen
            assert d.estimate == pytest.approx(estimate, rel=1e-10)
            np.testing.assert_allclose(d.objectives, objectives, rtol=1e-9, atol=1e-12)

    def test_three_period_hand_case(self):
        # constant batches make every noise bound and bias proxy exactly 0,
        # so all objectives tie and the policy decides
        batches = [[2.0, 2.0], [2.0], [2.0, 2.0, 2.0]]
        series = SummarySeries.from_batches(batches)
        small = select_window(series, WindowConfig(tie_break="smallest_k"))
        large = select_window(series, WindowConfig(tie_break="largest_k"))
        assert small.chosen_window == 1
        assert large.chosen_window == 3
        assert small.estimate == large.estimate == 2.0

    def test_bias_proxy_zero_at_first_window(self, rng):
        for _ in range(20):
            d = select_window(
                SummarySeries.from_batches(random_batches(rng)), WindowConfig()
            )
            assert d.bias_proxies[0] == 0.0
            assert np.all(d.bias_proxies >= 0.0)
            assert np.all(np.diff(d.counts) > 0)

    def test_deterministic(self, rng):
        batches = random_batches(rng, t=8)
        series = SummarySeries.from_batches(batches)
        a = select_window(series, WindowConfig())
        b = select_window(series, WindowConfig())
        assert a.chosen_window == b.chosen_window
        for field in ("counts", "means", "variances", "noise_bounds", "bias_proxies", "objectives"):
            assert np.array_equal(getattr(a, field), getattr(b, field))

    def test_stationary_prefers_large_windows(self):
        # statistical check: under a constant mean the selected window
        # concentrates near the full history
        rng = np.random.default_rng(5)
        t = 40
        chosen = [
            select_window(
                SummarySeries.from_batches([rng.normal(0.0, 1.0, size=3) for _ in range(t)]),
                WindowConfig(),
            ).chosen_window
            for _ in range(25)
        ]
        assert np.median(chosen) >= t / 2

    def test_objective_identity(self, rng):
        d = select_window(SummarySeries.from_batches(random_batches(rng, t=6)), WindowConfig())
        np.testing.assert_allclose(d.objectives, d.bias_proxies + d.noise_bounds)
        assert d.objectives[d.chosen_window - 1] == d.objectives.min()


class TestUnionBoundDelta:
    def test_single_model_schedule(self):
        assert union_bound_delta(0.3, 10) == pytest.approx(0.3 / 30.0)

    def test_tournament_schedule(self):
        assert union_bound_delta(0.3, 10, n_models=4) == pytest.approx(0.3 / (3 * 16 * 10))

    def test_domain(self):
        with pytest.raises(ValueError):
            union_bound_delta(1.5, 10)
        with pytest.raises(ValueError):
            union_bound_delta(0.1, 0)
