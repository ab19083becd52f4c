import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from driftwin import (
    AdaptiveRollingMean,
    FixedWindowSelector,
    LossTable,
    TournamentSelector,
    WindowConfig,
    fixed_window_select,
    select_window,
    tournament,
)
from driftwin.summaries import SummarySeries
from driftwin.validation import as_batches, as_loss_table, as_series

from conftest import random_batches


class TestValidationHelpers:
    def test_as_batches_accepts_2d(self):
        batches = as_batches(np.arange(6.0).reshape(3, 2))
        assert len(batches) == 3
        assert np.array_equal(batches[1], [2.0, 3.0])

    def test_as_batches_rejects_empty_and_nan(self):
        with pytest.raises(ValueError):
            as_batches([])
        with pytest.raises(ValueError, match="period 2"):
            as_batches([[1.0], [np.nan]])

    def test_as_series_passthrough(self):
        series = SummarySeries.from_batches([[1.0]])
        assert as_series(series) is series

    def test_as_loss_table_accepts_3d(self):
        table = as_loss_table(np.ones((4, 2, 3)))
        assert table.n_periods == 4
        assert table.n_models == 3

    def test_as_loss_table_passthrough(self):
        table = LossTable([np.ones((1, 2))])
        assert as_loss_table(table) is table


class TestAdaptiveRollingMean:
    def test_params_round_trip(self):
        est = AdaptiveRollingMean(delta_prime=0.2, range_width=1.0, tie_break="largest_k")
        assert est.get_params() == {
            "delta_prime": 0.2,
            "range_width": 1.0,
            "tie_break": "largest_k",
        }
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fit_matches_functional_core(self, rng):
        batches = random_batches(rng, t=7)
        est = AdaptiveRollingMean().fit(batches)
        direct = select_window(SummarySeries.from_batches(batches), WindowConfig())
        assert est.estimate_ == direct.estimate
        assert est.window_ == direct.chosen_window
        assert est.n_periods_ == 7
        assert est.predict() == direct.estimate

    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            AdaptiveRollingMean().predict()

    def test_invalid_params_surface_at_fit(self):
        est = AdaptiveRollingMean(delta_prime=2.0)
        with pytest.raises(ValueError, match="delta_prime"):
            est.fit([[1.0]])


class TestTournamentSelector:
    def test_fit_matches_functional_core(self, rng):
        mats = [rng.uniform(0, 1, size=(3, 5)) for _ in range(6)]
        table = LossTable(mats)
        est = TournamentSelector().fit(mats)
        bracket = tournament(table, WindowConfig())
        assert est.best_index_ == bracket.champion
        assert est.best_model_ == f"f{bracket.champion + 1}"
        assert est.bracket_ == bracket
        assert est.n_models_ == 5

    def test_accepts_loss_table_with_names(self, rng):
        mats = [rng.uniform(0, 1, size=(2, 2)) for _ in range(3)]
        table = LossTable(mats, models=["ridge", "forest"])
        est = TournamentSelector().fit(table)
        assert est.best_model_ in ("ridge", "forest")


class TestFixedWindowSelector:
    def test_fit_matches_functional_core(self, rng):
        mats = [rng.uniform(0, 1, size=(3, 4)) for _ in range(5)]
        table = LossTable(mats)
        for window in (1, 3, 99):
            est = FixedWindowSelector(window=window).fit(mats)
            assert est.best_index_ == fixed_window_select(table, window)

    def test_window_param_validated_at_fit(self):
        with pytest.raises(ValueError):
            FixedWindowSelector(window=0).fit([np.ones((1, 2))])
