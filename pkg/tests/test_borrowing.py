import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmpborrow.borrowing import (
    BorrowingStrength,
    ElicitationSpec,
    borrowing_strength,
    elicit_prior_weight,
    level_set,
    weight_for_strength,
)
from rmpborrow.rmp import NormalComponent, RobustMixturePrior, SamplingModel, posterior_weight, predictive_spec

INF, SAMP = NormalComponent(0.0, 0.01), SamplingModel(0.02)

TABLE1_OMEGA = [0.500, 0.415, 0.335, 0.263, 0.201, 0.151, 0.112]


class TestStrength:
    def test_uip_anchor(self, informative, sampling):
        b = borrowing_strength(RobustMixturePrior(0.5, informative, NormalComponent(0, 1.0)), sampling)
        assert b.B == pytest.approx(math.sqrt(34), rel=1e-14)
        assert b.paper_beta == pytest.approx(1 / math.sqrt(34))
        assert b.exact

    def test_equals_posterior_odds_at_common_location(self, informative, sampling):
        r = RobustMixturePrior(0.3, informative, NormalComponent(0, 7.0))
        w = posterior_weight(r, 0.0, sampling)
        assert borrowing_strength(r, sampling).B == pytest.approx(w / (1 - w), rel=1e-12)

    def test_shifted_location_flagged(self, informative, sampling):
        r = RobustMixturePrior(0.3, informative, NormalComponent(1.0, 7.0))
        assert not borrowing_strength(r, sampling).exact

    @pytest.mark.parametrize("B", [0.0, -1.0, math.inf, math.nan])
    def test_invalid(self, B):
        with pytest.raises(ValueError):
            BorrowingStrength(B)

    @pytest.mark.parametrize("w", [0.0, 1.0])
    def test_undefined_at_degenerate_weight(self, w, informative, sampling):
        with pytest.raises(ValueError):
            borrowing_strength(RobustMixturePrior(w, informative, NormalComponent(0, 1.0)), sampling)


class TestLevelSet:
    def test_table_weights(self, informative, sampling):
        pairs = level_set(math.sqrt(34), [0.5 ** k for k in range(7)], informative, sampling)
        assert [w for w, _ in pairs] == pytest.approx(TABLE1_OMEGA, abs=1e-3)

    @given(st.floats(0.05, 50), st.floats(1e-6, 0.9))
    def test_post_condition(self, B, n0):
        (w, _), = level_set(B, [n0], INF, SAMP)
        got = borrowing_strength(RobustMixturePrior(w, INF, NormalComponent(0, 1 / n0)), SAMP).B
        assert got == pytest.approx(B, rel=1e-10)

    def test_weight_decreases_with_diffuseness(self, informative, sampling):
        ws = [w for w, _ in level_set(2.0, np.logspace(0, -8, 20), informative, sampling)]
        assert np.all(np.diff(ws) < 0)

    def test_rejects_narrow_robust(self, informative, sampling):
        with pytest.raises(ValueError):
            weight_for_strength(1.0, 0.005, informative, sampling)
        with pytest.raises(ValueError):
            level_set(1.0, [0.0], informative, sampling)


class TestElicitation:
    @pytest.mark.parametrize("d", [0.1, 0.3, 0.5, 1.0, -0.7])
    def test_roundtrip(self, d, informative, sampling):
        spec = ElicitationSpec(d, 1000.0)
        w, _ = elicit_prior_weight(spec, informative, sampling)
        r = RobustMixturePrior(w, informative, NormalComponent(0, 1e6))
        assert posterior_weight(r, d, sampling) == pytest.approx(0.5, abs=1e-10)

    def test_zero_drift(self, informative, sampling):
        w, b = elicit_prior_weight(ElicitationSpec(0.0, 1000.0), informative, sampling)
        R = predictive_spec(RobustMixturePrior(0.5, informative, NormalComponent(0, 1e6)), sampling).ratio
        assert w == pytest.approx(1 / (1 + R), rel=1e-12)
        assert b.B == pytest.approx(1.0, rel=1e-10)

    @given(st.floats(0.0, 1.5))
    def test_symmetric(self, d):
        inf, s = INF, SAMP
        a = elicit_prior_weight(ElicitationSpec(d, 1000.0), inf, s)[0]
        b = elicit_prior_weight(ElicitationSpec(-d, 1000.0), inf, s)[0]
        assert a == pytest.approx(b, rel=1e-12)

    def test_monotone(self, informative, sampling):
        ws = [elicit_prior_weight(ElicitationSpec(d, 1000.0), informative, sampling)[0] for d in np.linspace(0, 1.5, 16)]
        assert np.all(np.diff(ws) > 0)

    def test_warns_when_not_diffuse(self, informative, sampling):
        with pytest.warns(UserWarning):
            elicit_prior_weight(ElicitationSpec(0.3, 0.2), informative, sampling)

    def test_extreme_drift_rejected(self, informative, sampling):
        with pytest.raises(ValueError):
            elicit_prior_weight(ElicitationSpec(10.0, 1000.0), informative, sampling)

    @pytest.mark.parametrize("kw", [dict(d_star=math.nan, sigma_rob=1.0), dict(d_star=0.1, sigma_rob=0.0)])
    def test_spec_validation(self, kw):
        with pytest.raises(ValueError):
            ElicitationSpec(**kw)
