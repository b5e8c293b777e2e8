import math
import random

import pytest

from sandwich_games.cpmm import PoolState, expected_output
from sandwich_games.oracle import bisect_root, replay_pool_sequence
from sandwich_games.sandwich import (
    AttackParams,
    attack_profit,
    decide_attack,
    max_attack_input,
    min_victim_size,
    profit_maximizing_attack,
)

POOL = PoolState(5_000_000.0, 5_000_000.0, 0.003)


def test_profit_is_zero_at_zero_attack():
    assert attack_profit(POOL, 100_000.0, 0.0) == 0.0


def test_profit_without_fee_is_nonnegative_and_matches_replay():
    pool = PoolState(2e6, 8e6, 0.0)
    for attack in (1_000.0, 50_000.0, 400_000.0):
        closed = attack_profit(pool, 120_000.0, attack)
        replay = replay_pool_sequence(pool, 120_000.0, attack).attacker_profit
        assert closed >= 0.0
        assert closed == pytest.approx(replay, rel=1e-9)


def test_profit_matches_replay_on_reference_pool():
    closed = attack_profit(POOL, 100_000.0, 50_000.0)
    replay = replay_pool_sequence(POOL, 100_000.0, 50_000.0).attacker_profit
    assert closed == pytest.approx(replay, rel=1e-9)
    assert closed > 0.0


def test_profit_matches_replay_randomized():
    rng = random.Random(90210)
    for _ in range(200):
        x = 10.0 ** rng.uniform(4, 8)
        pool = PoolState(x, 10.0 ** rng.uniform(4, 8), rng.choice((0.0005, 0.003, 0.01)))
        victim = rng.uniform(1e-4, 0.1) * x
        attack = rng.uniform(1e-4, 0.2) * x
        closed = attack_profit(pool, victim, attack)
        replay = replay_pool_sequence(pool, victim, attack).attacker_profit
        scale = max(abs(closed), abs(replay), 1e-4 * attack)
        assert abs(closed - replay) <= 1e-9 * scale


def test_min_victim_size_reference_value():
    # Independent route first: bisect the profit sign change in victim size
    # at a vanishing attack size, then compare the closed-form threshold.
    tiny = 1e-6
    crossing = bisect_root(
        lambda v: attack_profit(POOL, v, tiny), 1.0, POOL.x, 1e-4
    )
    threshold = min_victim_size(POOL, 0.0)
    assert threshold == pytest.approx(crossing, rel=1e-6)
    assert threshold == pytest.approx(15_090.4066, abs=1e-3)


def test_min_victim_size_vanishes_with_fee():
    assert min_victim_size(PoolState(5e6, 5e6, 1e-12), 0.0) < 1e-4
    assert min_victim_size(PoolState(5e6, 5e6, 0.0), 123.0) == 0.0


def test_min_victim_size_increases_with_attack_size():
    sizes = [min_victim_size(POOL, a) for a in (0.0, 1e3, 1e4, 1e5)]
    assert sizes == sorted(sizes)
    assert sizes[0] < sizes[-1]


def test_max_attack_input_zero_tolerance_means_no_room():
    assert max_attack_input(POOL, 250_000.0, 0.0) == 0.0


def test_max_attack_input_without_victim_matches_reserve_growth_form():
    # With no victim order the binding condition collapses to pure reserve
    # growth: a = x (1/sqrt(1-s) - 1) / (1-f).
    for s in (0.005, 0.01, 0.03):
        direct = max_attack_input(POOL, 0.0, s)
        formula = POOL.x * (1.0 / math.sqrt(1.0 - s) - 1.0) / (1.0 - POOL.fee)
        assert direct == pytest.approx(formula, rel=1e-12)


def test_max_attack_input_binds_victim_to_slippage_floor():
    rng = random.Random(4040)
    for _ in range(200):
        x = 10.0 ** rng.uniform(4, 8)
        pool = PoolState(x, 10.0 ** rng.uniform(4, 8), rng.choice((0.0005, 0.003, 0.01)))
        victim = rng.uniform(1e-4, 0.1) * x
        s = rng.uniform(0.001, 0.05)
        cap = max_attack_input(pool, victim, s)
        floor = (1.0 - s) * expected_output(pool, victim)
        replayed = replay_pool_sequence(pool, victim, cap).victim_output
        assert replayed == pytest.approx(floor, rel=1e-9)


def test_profit_maximizer_agrees_with_grid_scan():
    params = AttackParams(POOL, 100_000.0, 0.01)
    best_a, best_profit = profit_maximizing_attack(params)
    # Dense scan around the reported optimum confirms a local maximum and no
    # better point on a wide grid.
    for shift in (0.99, 1.01):
        assert attack_profit(POOL, params.victim_input, best_a * shift) <= best_profit
    grid_best = max(
        attack_profit(POOL, params.victim_input, a)
        for a in [i * POOL.x / 2000.0 for i in range(1, 2001)]
    )
    assert best_profit >= grid_best - 1e-9 * abs(grid_best)


def test_profit_maximizer_at_boundary_when_attacks_never_pay():
    # Victim below the zero-attack threshold: profit is negative everywhere,
    # so the maximizer sits at zero input.
    params = AttackParams(POOL, 10_000.0, 0.01)
    best_a, best_profit = profit_maximizing_attack(params, search_bound=POOL.x)
    assert best_a <= 1e-5 * POOL.x
    assert best_profit <= 0.0 or best_profit == pytest.approx(0.0, abs=1e-9)


def test_slippage_cap_sits_below_profit_optimum_on_reference_pool():
    params = AttackParams(POOL, 100_000.0, 0.01)
    cap = max_attack_input(POOL, params.victim_input, params.slippage_tolerance)
    best_a, _ = profit_maximizing_attack(params)
    assert cap < best_a


def test_decide_attack_skips_small_victims():
    outcome = decide_attack(AttackParams(POOL, 10_000.0, 0.01))
    assert not outcome.executed
    assert outcome.profit == 0.0
    assert outcome.victim_output == pytest.approx(expected_output(POOL, 10_000.0), rel=1e-15)


def test_decide_attack_skips_zero_tolerance():
    outcome = decide_attack(AttackParams(POOL, 300_000.0, 0.0))
    assert not outcome.executed


def test_decide_attack_executes_and_binds_large_victims():
    params = AttackParams(POOL, 300_000.0, 0.01)
    outcome = decide_attack(params)
    assert outcome.executed
    floor = (1.0 - 0.01) * expected_output(POOL, 300_000.0)
    assert outcome.victim_output == pytest.approx(floor, rel=1e-9)
    assert outcome.profit > 0.0
    assert outcome.profit == pytest.approx(outcome.attack_output - outcome.attack_input, rel=1e-9)


def test_executed_profit_nondecreasing_in_tolerance_on_capped_branch():
    victim = 200_000.0
    profits = []
    for s in (0.005, 0.01, 0.02, 0.03):
        params = AttackParams(POOL, victim, s)
        cap = max_attack_input(POOL, victim, s)
        best_a, _ = profit_maximizing_attack(params)
        assert cap < best_a  # still on the tolerance-limited branch
        outcome = decide_attack(params)
        assert outcome.executed
        profits.append(outcome.profit)
    assert profits == sorted(profits)


def test_attack_params_validation():
    with pytest.raises(ValueError):
        AttackParams(POOL, -1.0, 0.01)
    with pytest.raises(ValueError):
        AttackParams(POOL, 1.0, 1.0)
    with pytest.raises(ValueError):
        attack_profit(POOL, 1.0, -1.0)
    with pytest.raises(ValueError):
        max_attack_input(POOL, 1.0, -0.5)
