"""Cohort statistics: CCDF, quadrants, ternary shares, bins, OLS, ladder."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cocite.errors import (
    DegenerateX,
    EmptyInput,
    InsufficientData,
    RankDeficient,
    TooFewRows,
    ZeroImpact,
)
from cocite.stats import (
    MODEL_LADDER,
    ccdf,
    equal_count_bins,
    fit_model_ladder,
    fit_ols,
    fit_quadratic,
    quadrant_counts,
    quadrant_of,
    ternary_shares,
)
from cocite.synth import planted_regression_cohort
from cocite.topics import TopicType


class TestCcdf:
    def test_strictly_greater_convention(self):
        xs, probs = ccdf([0.0, 0.5, 1.0])
        assert list(xs) == [0.0, 0.5, 1.0]
        assert probs == pytest.approx([2 / 3, 1 / 3, 0.0])

    def test_duplicates_collapse(self):
        xs, probs = ccdf([1.0, 1.0, 2.0])
        assert list(xs) == [1.0, 2.0]
        assert probs == pytest.approx([1 / 3, 0.0])

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            ccdf([])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=50))
    def test_nonincreasing_and_ends_at_zero(self, values):
        xs, probs = ccdf(values)
        assert all(a >= b for a, b in zip(probs, probs[1:]))
        assert probs[-1] == 0.0
        assert list(xs) == sorted(set(xs))


class TestQuadrants:
    @pytest.mark.parametrize(
        "dp,ds,expected",
        [
            (1.0, 1.0, 1),
            (-1.0, 1.0, 2),
            (0.0, 1.0, 2),
            (-1.0, -1.0, 3),
            (0.0, 0.0, 3),
            (-1.0, 0.0, 3),
            (1.0, -1.0, 4),
            (1.0, 0.0, 4),
        ],
    )
    def test_ties_go_to_the_non_exceeding_side(self, dp, ds, expected):
        assert quadrant_of(dp, ds) == expected

    def test_counts_partition_the_cohort(self):
        deltas = [(1.0, 1.0), (0.0, 2.0), (-3.0, -1.0), (2.0, -2.0), (1.0, 1.0)]
        counts = quadrant_counts(deltas)
        assert counts == {1: 2, 2: 1, 3: 1, 4: 1}
        assert sum(counts.values()) == len(deltas)


class TestTernary:
    def test_normalization(self):
        shares = ternary_shares(
            {TopicType.PRIMARY: 1.0, TopicType.SECONDARY: 1.0, TopicType.NEW: 2.0}
        )
        assert shares == (0.25, 0.25, 0.5)

    def test_missing_types_default_to_zero(self):
        assert ternary_shares({TopicType.NEW: 3.0}) == (0.0, 0.0, 1.0)

    def test_mentor_only_impact_is_ignored(self):
        shares = ternary_shares(
            {TopicType.NEW: 1.0, TopicType.MENTOR_ONLY: 99.0}
        )
        assert shares == (0.0, 0.0, 1.0)

    def test_zero_impact_raises(self):
        with pytest.raises(ZeroImpact):
            ternary_shares({})


class TestBins:
    def test_equal_counts(self):
        x = list(range(40))
        y = [2.0 * v for v in x]
        curve = equal_count_bins(x, y, n_bins=4)
        assert curve.counts == (10, 10, 10, 10)
        assert curve.mean_x == (4.5, 14.5, 24.5, 34.5)
        assert curve.mean_y == (9.0, 29.0, 49.0, 69.0)

    def test_uneven_split_front_loads_remainder(self):
        curve = equal_count_bins(list(range(10)), [0.0] * 10, n_bins=3)
        assert curve.counts == (4, 3, 3)

    def test_too_few_points_raises(self):
        with pytest.raises(InsufficientData):
            equal_count_bins([1.0, 2.0], [1.0, 2.0], n_bins=3)

    def test_length_mismatch_raises(self):
        with pytest.raises(EmptyInput):
            equal_count_bins([1.0, 2.0, 3.0], [1.0], n_bins=1)


class TestOls:
    def test_hand_worked_example(self):
        # x = [0, 1, 2], y = [0, 1, 3]: beta = (-1/6, 3/2), RSS = 1/6,
        # df = 1, se = (sqrt(5)/6, sqrt(1/12)), R^2 = 27/28.
        res = fit_ols({"x": [0.0, 1.0, 2.0]}, [0.0, 1.0, 3.0])
        assert res.names == ("intercept", "x")
        assert res.beta == pytest.approx((-1 / 6, 1.5))
        assert res.df == 1
        assert res.se == pytest.approx((math.sqrt(5) / 6, math.sqrt(1 / 12)))
        assert res.r2 == pytest.approx(27 / 28)
        beta, se, t, p = res.coef("x")
        assert t == pytest.approx(1.5 / math.sqrt(1 / 12))
        assert 0.0 < p < 1.0

    def test_noiseless_recovery(self):
        x = np.arange(10, dtype=float)
        y = 2.0 + 3.0 * x
        res = fit_ols({"x": x}, y)
        assert res.beta == pytest.approx((2.0, 3.0), abs=1e-12)
        assert res.r2 == pytest.approx(1.0)

    def test_no_intercept(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        res = fit_ols({"x": x}, 2.0 * x, intercept=False)
        assert res.names == ("x",)
        assert res.beta == pytest.approx((2.0,), abs=1e-12)
        assert math.isnan(res.adj_r2)

    def test_rank_deficient_names_redundant_columns(self):
        a = np.array([1.0, 2.0, 3.0, 4.0])
        with pytest.raises(RankDeficient) as exc:
            fit_ols({"a": a, "b": 2.0 * a}, a)
        assert exc.value.columns == ("b",)

    def test_constant_column_clashes_with_intercept(self):
        with pytest.raises(RankDeficient) as exc:
            fit_ols({"c": [1.0, 1.0, 1.0, 1.0]}, [1.0, 2.0, 3.0, 4.0])
        assert exc.value.columns == ("c",)

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            fit_ols({"x": [1.0, 2.0], "z": [0.0, 1.0]}, [1.0, 2.0])

    def test_constant_outcome_raises(self):
        with pytest.raises(DegenerateX):
            fit_ols({"x": [1.0, 2.0, 3.0]}, [5.0, 5.0, 5.0])

    def test_length_mismatch(self):
        with pytest.raises(EmptyInput):
            fit_ols({"x": [1.0, 2.0]}, [1.0, 2.0, 3.0])


class TestQuadraticFit:
    def test_planted_vertex(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0.0, 4.0, 500)
        y = 4.0 * x - x * x + rng.normal(0.0, 0.5, 500)
        fit = fit_quadratic(x, y)
        assert fit.peak_x == pytest.approx(2.0, abs=0.1)
        assert fit.curvature < 0
        assert fit.inverted_u

    def test_upward_curve_is_not_inverted_u(self):
        x = np.linspace(0.0, 4.0, 100)
        fit = fit_quadratic(x, x * x)
        assert fit.curvature > 0
        assert not fit.inverted_u

    def test_insignificant_curvature_is_not_inverted_u(self):
        # Pure noise around a line: curvature hovers near zero.
        rng = np.random.default_rng(11)
        x = rng.uniform(0.0, 1.0, 200)
        y = x + rng.normal(0.0, 5.0, 200)
        fit = fit_quadratic(x, y)
        assert not fit.inverted_u or fit.p_curvature < 0.05

    def test_too_few_distinct_x(self):
        with pytest.raises(DegenerateX):
            fit_quadratic([1.0, 1.0, 2.0, 2.0], [0.0, 0.0, 1.0, 1.0])


class TestLadder:
    def test_r2_never_decreases_up_the_ladder(self):
        table, _ = planted_regression_cohort(seed=5, n=400)
        ladder = fit_model_ladder(table)
        r2 = ladder.r2_sequence()
        assert len(r2) == len(MODEL_LADDER)
        assert all(a <= b + 1e-12 for a, b in zip(r2, r2[1:]))

    def test_shared_complete_case_mask(self):
        table, _ = planted_regression_cohort(seed=5, n=200)
        table = {k: v.copy() for k, v in table.items()}
        table["common_collaborators_count"][:7] = np.nan
        ladder = fit_model_ladder(table)
        assert ladder.n_dropped == 7
        assert ladder.n_rows == 193
        # Every model, even ones not using the NaN column, fits 193 rows.
        assert all(res.n == 193 for _, res in ladder.models)

    def test_missing_column_raises(self):
        table, _ = planted_regression_cohort(seed=5, n=100)
        del table["topic_num_mto"]
        with pytest.raises(EmptyInput):
            fit_model_ladder(table)

    def test_log_outcome_option(self):
        table, _ = planted_regression_cohort(seed=5, n=300)
        plain = fit_model_ladder(table)
        logged = fit_model_ladder(table, log1p_outcome=True)
        assert plain.n_rows == logged.n_rows
        assert plain.models[0][1].beta != logged.models[0][1].beta

    def test_distance_terms_recovered(self):
        table, truth = planted_regression_cohort(seed=5, n=2000)
        ladder = fit_model_ladder(table)
        full = ladder.models[-1][1]
        beta_d, se_d, _, _ = full.coef("ave_distance")
        beta_d2, se_d2, _, p_d2 = full.coef("ave_distance_sq")
        assert abs(beta_d - truth["ave_distance"]) < 3 * se_d
        assert abs(beta_d2 - truth["ave_distance_sq"]) < 3 * se_d2
        assert beta_d2 < 0 and p_d2 < 0.001
