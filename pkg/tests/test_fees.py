import math
import random
from dataclasses import replace

import pytest

from sandwich_games.cpmm import expected_output
from sandwich_games.fees import (
    LPPosition,
    Regime,
    closed_form_divergence,
    fee_closed_form,
    fee_constructive,
    lp_fee,
    resolve_market,
    total_fee,
)
from sandwich_games.market import MarketConfig
from sandwich_games.traders import TraderParams, min_alpha_pool_n, min_alpha_pool_w


def market_with(p=0.0, omega=0.01, fee=0.003, x=5e6, y=5e6):
    return MarketConfig(x, y, fee, p=p, omega=omega)


# Reference points, one per regime, found by scanning the canonical market.
REGIME_POINTS = {
    Regime.NO_TRADING: (0.002, 0.01),
    Regime.N_ONLY_RETAIL_SAFE: (0.005, 0.01),
    Regime.N_ONLY_RETAIL_ATTACKED: (0.0105, 0.008),
    Regime.BOTH_POOLS_NO_ATTACK: (0.006, 0.001),
    Regime.BOTH_POOLS_RETAIL_ATTACKED: (0.014, 0.01),
    Regime.BOTH_POOLS_BOTH_ATTACKED: (0.05, 0.01),
}


def test_reference_points_hit_their_regimes():
    for regime, (alpha, s) in REGIME_POINTS.items():
        breakdown = fee_constructive(market_with(), TraderParams(alpha, s))
        assert breakdown.regime is regime, (alpha, s, breakdown.regime)


def test_no_trading_below_the_participation_bound():
    market = market_with()
    trader = TraderParams(min_alpha_pool_n(market.fee) * 0.999, 0.01)
    breakdown = fee_constructive(market, trader)
    assert breakdown.regime is Regime.NO_TRADING
    assert breakdown.total == 0.0


def test_all_protected_liquidity_kills_unprotected_components():
    breakdown = fee_constructive(market_with(p=1.0), TraderParams(0.05, 0.01))
    assert breakdown.fee_w_soph == 0.0
    assert breakdown.fee_w_retail == 0.0
    assert breakdown.total == breakdown.fee_n > 0.0


def test_sophisticated_only_flow_collects_protected_fees_only_between_bounds():
    # No retail flow and a benefit between the two participation bounds:
    # every collected fee comes from the protected pool.
    market = market_with(omega=0.0, p=0.5)
    alpha = 0.5 * (min_alpha_pool_n(0.003) + min_alpha_pool_w(0.003, 0.01))
    breakdown = fee_constructive(market, TraderParams(alpha, 0.01))
    assert breakdown.fee_w_soph == 0.0
    assert breakdown.total == pytest.approx(breakdown.fee_n, rel=1e-15)
    assert breakdown.fee_n > 0.0


def test_protected_fee_vanishes_at_the_bound():
    market = market_with(p=1.0)
    trader = TraderParams(min_alpha_pool_n(market.fee) * (1.0 + 1e-12), 0.0)
    closed = fee_closed_form(market, trader)
    assert closed.fee_n == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize(
    "regime",
    [
        Regime.NO_TRADING,
        Regime.N_ONLY_RETAIL_SAFE,
        Regime.BOTH_POOLS_NO_ATTACK,
    ],
)
def test_closed_form_matches_constructive_without_attacks(regime):
    alpha, s = REGIME_POINTS[regime]
    for p in (0.0, 0.3, 1.0):
        for omega in (0.0, 0.01, 0.7):
            market = market_with(p=p, omega=omega)
            trader = TraderParams(alpha, s)
            constructive = fee_constructive(market, trader)
            closed = fee_closed_form(market, trader)
            scale = max(abs(constructive.total), abs(closed.total), 1e-12)
            assert abs(constructive.total - closed.total) <= 1e-9 * scale


def test_closed_form_matches_constructive_in_retail_attack_regimes():
    # The collapsed retail-attack expression agrees with the constructive
    # accounting, so regimes where only the retail stream is sandwiched line
    # up as well; this is reported rather than required.
    for regime in (Regime.N_ONLY_RETAIL_ATTACKED, Regime.BOTH_POOLS_RETAIL_ATTACKED):
        alpha, s = REGIME_POINTS[regime]
        market = market_with()
        trader = TraderParams(alpha, s)
        constructive = fee_constructive(market, trader)
        closed = fee_closed_form(market, trader)
        assert closed.total == pytest.approx(constructive.total, rel=1e-9)


def test_closed_form_divergence_in_double_attack_regime_is_the_known_factor():
    # The collapsed sophisticated-attack component is kept verbatim and is
    # exactly twice the constructive value; the divergence report makes that
    # visible instead of asserting equality.
    alpha, s = REGIME_POINTS[Regime.BOTH_POOLS_BOTH_ATTACKED]
    report = closed_form_divergence(market_with(), TraderParams(alpha, s))
    assert report.regime is Regime.BOTH_POOLS_BOTH_ATTACKED
    assert report.ratio_w_soph == pytest.approx(2.0, rel=1e-9)
    assert report.ratio_w_retail == pytest.approx(1.0, rel=1e-9)


def test_published_retail_safe_variant_is_unusable():
    # The verbatim collapsed no-attack retail expression evaluates negative,
    # which cannot be a fee; the evaluator uses the derivation-pattern form
    # and surfaces the verbatim value for the report.
    report = closed_form_divergence(market_with(), TraderParams(0.05, 0.01))
    assert report.published_retail_safe < 0.0


def test_fee_total_is_affine_in_liquidity_split():
    rng = random.Random(11)
    for _ in range(40):
        market = market_with(
            p=0.0, omega=rng.uniform(0.0, 1.0), fee=rng.choice((0.0005, 0.003, 0.01))
        )
        trader = TraderParams(10.0 ** rng.uniform(-2.2, -0.5), rng.uniform(0.001, 0.08))
        f0 = total_fee(replace(market, p=0.0), trader)
        f1 = total_fee(replace(market, p=1.0), trader)
        scale = max(abs(f0), abs(f1), 1e-12)
        for i in range(21):
            p = i / 20.0
            fitted = f0 + p * (f1 - f0)
            actual = total_fee(replace(market, p=p), trader)
            assert abs(actual - fitted) <= 1e-9 * scale


def test_midpoint_is_the_corner_average():
    market = market_with()
    trader = TraderParams(0.05, 0.01)
    f0 = total_fee(replace(market, p=0.0), trader)
    f1 = total_fee(replace(market, p=1.0), trader)
    fmid = total_fee(replace(market, p=0.5), trader)
    assert fmid == pytest.approx(0.5 * (f0 + f1), rel=1e-9)


def test_retail_only_flow_without_tolerance_sees_identical_corners():
    market = market_with(omega=1.0)
    trader = TraderParams(0.05, 0.0)  # no tolerance: no attack ever
    f0 = total_fee(replace(market, p=0.0), trader)
    f1 = total_fee(replace(market, p=1.0), trader)
    assert f0 == f1


def test_fee_is_continuous_across_participation_bounds():
    market = market_with(p=0.4)
    reference = total_fee(market, TraderParams(0.05, 0.01))
    for bound in (min_alpha_pool_n(0.003), min_alpha_pool_w(0.003, 0.01)):
        below = total_fee(market, TraderParams(bound * (1.0 - 1e-9), 0.01))
        above = total_fee(market, TraderParams(bound * (1.0 + 1e-9), 0.01))
        assert abs(above - below) <= 1e-8 * max(reference, 1.0)


def test_attacked_victims_realize_exactly_the_slippage_floor():
    market = market_with()
    pool_w = market.pool_w()
    for alpha, s in (REGIME_POINTS[Regime.BOTH_POOLS_BOTH_ATTACKED], (0.1, 0.02)):
        res = resolve_market(market, TraderParams(alpha, s))
        assert res.outcome_retail is not None and res.outcome_retail.executed
        floor = (1.0 - s) * expected_output(pool_w, res.plan_retail.input_w)
        assert res.outcome_retail.victim_output == pytest.approx(floor, rel=1e-9)


def test_lp_fee_scales_with_share_and_uses_own_split():
    market = market_with(p=0.123)  # the position's split wins over the market's
    trader = TraderParams(0.05, 0.01)
    full = lp_fee(LPPosition(1.0, 0.7), market, trader)
    assert full == pytest.approx(total_fee(replace(market, p=0.7), trader), rel=1e-15)
    quarter_w = lp_fee(LPPosition(0.25, 0.0), market, trader)
    assert quarter_w == pytest.approx(0.25 * total_fee(replace(market, p=0.0), trader), rel=1e-15)


def test_identical_lp_splits_sum_to_the_total():
    market = market_with(p=0.6)
    trader = TraderParams(0.05, 0.01)
    shares = (0.5, 0.3, 0.2)
    summed = sum(lp_fee(LPPosition(share, 0.6), market, trader) for share in shares)
    assert summed == pytest.approx(total_fee(market, trader), rel=1e-12)


def test_breakdown_mixes_streams_by_flow_shares():
    market = market_with(omega=0.25)
    breakdown = fee_constructive(market, TraderParams(0.05, 0.01))
    mixed = breakdown.fee_n + 0.75 * breakdown.fee_w_soph + 0.25 * breakdown.fee_w_retail
    assert breakdown.total == pytest.approx(mixed, rel=1e-15)


def test_position_validation():
    with pytest.raises(ValueError):
        LPPosition(0.0, 0.5)
    with pytest.raises(ValueError):
        LPPosition(0.5, 1.5)
