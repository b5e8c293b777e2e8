"""Randomized agreement checks between closed forms and the replay oracle.

Each check draws configurations from the ranges the model targets (reserves
1e4 to 1e8, fees at common tiers, victims up to a tenth of the pool) and
reports the worst relative disagreement it saw. The CLI `verify` subcommand
and the acceptance suite both run these.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cpmm import PoolState, expected_output
from .fees import fee_constructive, resolve_market
from .market import MarketConfig
from .oracle import bisect_root, replay_market, replay_pool_sequence
from .sandwich import attack_profit, max_attack_input, min_victim_size
from .traders import TraderParams

FEE_TIERS = (0.0005, 0.003, 0.01)

# Differences below ~1e-13 of the attack size are beneath float64 resolution
# for a three-swap composition, so profit comparisons use that as the
# relative-scale floor instead of chasing noise around break-even points.
_PROFIT_SCALE_FLOOR = 1e-4


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    trials: int
    max_rel_err: float
    detail: str = ""


def _rel_err(a: float, b: float, floor: float = 0.0) -> float:
    scale = max(abs(a), abs(b), floor)
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _random_pool(rng: random.Random) -> PoolState:
    x = 10.0 ** rng.uniform(4.0, 8.0)
    y = 10.0 ** rng.uniform(4.0, 8.0)
    return PoolState(x, y, rng.choice(FEE_TIERS))


def check_profit_closed_form(trials: int = 1000, seed: int = 2024) -> CheckResult:
    """Closed-form sandwich profit versus the three-swap replay."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        pool = _random_pool(rng)
        victim = rng.uniform(1e-4, 0.1) * pool.x
        s = rng.uniform(0.001, 0.05)
        cap = max_attack_input(pool, victim, s)
        attack = rng.uniform(0.0, 1.0) * cap
        if attack <= 0.0:
            continue
        closed = attack_profit(pool, victim, attack)
        replay = replay_pool_sequence(pool, victim, attack).attacker_profit
        assert replay is not None
        worst = max(worst, _rel_err(closed, replay, _PROFIT_SCALE_FLOOR * attack))
    return CheckResult("attack profit closed form vs replay", worst <= 1e-9, trials, worst)


def check_slippage_binding(trials: int = 1000, seed: int = 2025) -> CheckResult:
    """The slippage-limited front-run leaves the victim exactly at the floor,
    and zero tolerance leaves no attack room at all."""
    rng = random.Random(seed)
    worst = 0.0
    zero_ok = True
    for _ in range(trials):
        pool = _random_pool(rng)
        victim = rng.uniform(1e-4, 0.1) * pool.x
        s = rng.uniform(0.001, 0.05)
        cap = max_attack_input(pool, victim, s)
        floor = (1.0 - s) * expected_output(pool, victim)
        replayed = replay_pool_sequence(pool, victim, cap).victim_output
        worst = max(worst, _rel_err(replayed, floor))
        zero_ok = zero_ok and max_attack_input(pool, victim, 0.0) == 0.0
    passed = worst <= 1e-9 and zero_ok
    detail = "" if zero_ok else "nonzero attack room at zero tolerance"
    return CheckResult("slippage-limited attack binds victim floor", passed, trials, worst, detail)


def check_victim_threshold(trials: int = 200, seed: int = 2026) -> CheckResult:
    """Bisection zero-crossing of profit in the victim size versus the
    closed-form threshold, at a fixed small attack size."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        pool = _random_pool(rng)
        attack = rng.uniform(1e-6, 1e-3) * pool.x
        threshold = min_victim_size(pool, attack)
        crossing = bisect_root(
            lambda v: attack_profit(pool, v, attack),
            1e-9 * pool.x,
            pool.x,
            1e-9 * threshold,
        )
        worst = max(worst, _rel_err(crossing, threshold))
    return CheckResult("profit sign flips at the victim-size threshold", worst <= 1e-6, trials, worst)


def check_fee_model(trials: int = 300, seed: int = 2027) -> CheckResult:
    """Constructive fee accounting versus the leg-by-leg market replay."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        x = 10.0 ** rng.uniform(4.0, 8.0)
        y = 10.0 ** rng.uniform(4.0, 8.0)
        market = MarketConfig(
            x=x,
            y=y,
            fee=rng.choice(FEE_TIERS),
            p=rng.choice((0.0, 1.0, rng.uniform(0.0, 1.0))),
            omega=rng.uniform(0.0, 1.0),
        )
        trader = TraderParams(10.0 ** rng.uniform(-3.0, -0.5), rng.uniform(0.001, 0.1))
        breakdown = fee_constructive(market, trader)
        res = resolve_market(market, trader)
        soph_attack = (
            res.outcome_soph.attack_input
            if res.outcome_soph is not None and res.outcome_soph.executed
            else None
        )
        retail_attack = (
            res.outcome_retail.attack_input
            if res.outcome_retail is not None and res.outcome_retail.executed
            else None
        )
        replay = replay_market(
            market,
            (res.plan_soph.input_n, res.plan_soph.input_w),
            (res.plan_retail.input_n, res.plan_retail.input_w),
            soph_attack,
            retail_attack,
        )
        worst = max(worst, _rel_err(breakdown.total, replay.total_fee))
    return CheckResult("constructive fees vs market replay", worst <= 1e-9, trials, worst)


def run_all(trials: int = 1000, seed: int = 7) -> list[CheckResult]:
    """Run every agreement check, deriving per-check seeds from one seed."""
    return [
        check_profit_closed_form(trials, seed),
        check_slippage_binding(trials, seed + 1),
        check_victim_threshold(max(trials // 5, 20), seed + 2),
        check_fee_model(max(trials // 3, 30), seed + 3),
    ]
