"""Brute-force verification engine.

Replays every trade sequence swap by swap through the pool mechanics and
maximizes utilities numerically, so every closed form in this package can be
checked against an implementation that shares none of its algebra. Trade and
attack sizes are always passed in by the caller; nothing here evaluates the
closed-form sizing or fee expressions. Favors obviousness over speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .cpmm import PoolState, swap_x_for_y, swap_y_for_x
from .market import MarketConfig

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

# Arbitrage sizing conventions, see `replay_pool_sequence`.
ARB_PAPER = "paper"
ARB_EXACT = "exact"


# ---------------------------------------------------------------------------
# numeric search utilities


def golden_section_max(
    fn: Callable[[float], float], lo: float, hi: float, arg_tol: float
) -> tuple[float, float]:
    """Maximize a unimodal function on [lo, hi] to argument tolerance arg_tol."""
    if not hi >= lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    width = hi - lo
    if width <= arg_tol:
        mid = 0.5 * (lo + hi)
        return mid, fn(mid)
    steps = int(math.ceil(math.log(arg_tol / width) / math.log(_INV_PHI)))
    c = lo + _INV_PHI2 * width
    d = lo + _INV_PHI * width
    fc = fn(c)
    fd = fn(d)
    for _ in range(max(steps - 1, 0)):
        if fc > fd:
            hi = d
            d, fd = c, fc
            width *= _INV_PHI
            c = lo + _INV_PHI2 * width
            fc = fn(c)
        else:
            lo = c
            c, fc = d, fd
            width *= _INV_PHI
            d = lo + _INV_PHI * width
            fd = fn(d)
    if fc > fd:
        return c, fc
    return d, fd


def numeric_max_utility(
    fn: Callable[[float], float], lo: float, hi: float, arg_tol: float | None = None
) -> tuple[float, float]:
    """Maximize fn on [lo, hi], falling back to a dense scan if not unimodal.

    Golden-section search is trusted only when it beats a coarse scan of the
    bracket; otherwise a 10,001-point scan picks the best region and a local
    golden-section pass refines it. Raises ArithmeticError on non-finite
    utility values.
    """
    tol = arg_tol if arg_tol is not None else 1e-10 * (hi - lo)

    def checked(z: float) -> float:
        value = fn(z)
        if not math.isfinite(value):
            raise ArithmeticError(f"non-finite utility value at {z}")
        return value

    best_arg, best_val = golden_section_max(checked, lo, hi, tol)
    coarse = _scan_max(checked, lo, hi, 101)
    if best_val >= coarse[1] - 1e-12 * max(1.0, abs(coarse[1])):
        return best_arg, best_val
    # Not unimodal as far as golden-section is concerned: dense scan + refine.
    idx, dense_args, dense_vals = _scan_argmax(checked, lo, hi, 10_001)
    ref_lo = dense_args[max(idx - 1, 0)]
    ref_hi = dense_args[min(idx + 1, len(dense_args) - 1)]
    refined_arg, refined_val = golden_section_max(checked, ref_lo, ref_hi, tol)
    if refined_val >= dense_vals[idx]:
        return refined_arg, refined_val
    return dense_args[idx], dense_vals[idx]


def _scan_max(fn: Callable[[float], float], lo: float, hi: float, n: int) -> tuple[float, float]:
    idx, args, vals = _scan_argmax(fn, lo, hi, n)
    return args[idx], vals[idx]


def _scan_argmax(
    fn: Callable[[float], float], lo: float, hi: float, n: int
) -> tuple[int, list[float], list[float]]:
    step = (hi - lo) / (n - 1)
    args = [lo + i * step for i in range(n)]
    vals = [fn(z) for z in args]
    idx = max(range(n), key=vals.__getitem__)
    return idx, args, vals


def bisect_root(
    fn: Callable[[float], float], lo: float, hi: float, arg_tol: float
) -> float:
    """Find a sign change of fn on [lo, hi] by plain bisection."""
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")
    while hi - lo > arg_tol:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# trade-sequence replay


@dataclass(frozen=True)
class Leg:
    """One executed swap inside a replayed sequence."""

    tag: str  # front_run | victim | back_run | arbitrage
    direction: str  # "x->y" | "y->x"
    amount_in: float
    amount_out: float
    fee_paid: float  # input-token units


@dataclass(frozen=True)
class SequenceReplay:
    """Full record of one pool's trade sequence.

    fees_y values every leg fee in Y-tokens at the pool's starting price.
    price_residual is the relative gap between the final and initial marginal
    price; it is zero (up to rounding) under the exact arbitrage convention
    and small but nonzero under the paper-style one.
    """

    legs: tuple[Leg, ...]
    fees_y: float
    victim_output: float
    attacker_profit: float | None
    final_pool: PoolState
    price_residual: float


def replay_pool_sequence(
    pool: PoolState,
    victim_input: float,
    attack_input: float | None = None,
    arb_mode: str = ARB_PAPER,
) -> SequenceReplay:
    """Replay [front-run,] victim, [back-run,] arbitrage through one pool.

    The arbitrageur buys back the Y-tokens the sequence removed. Under
    ARB_PAPER its input equals the victim's received Y (the attacker's own Y
    already returns via the back-run); under ARB_EXACT the input is grossed
    up by 1/(1-fee) so both reserves land exactly on their starting values.
    """
    if arb_mode not in (ARB_PAPER, ARB_EXACT):
        raise ValueError(f"unknown arbitrage mode {arb_mode!r}")
    start = pool
    price = start.marginal_price
    legs: list[Leg] = []
    current = pool

    attack_y = 0.0
    if attack_input is not None and attack_input > 0.0:
        front = swap_x_for_y(current, attack_input)
        legs.append(Leg("front_run", "x->y", attack_input, front.output, front.fee_paid))
        attack_y = front.output
        current = front.pool

    victim_output = 0.0
    if victim_input > 0.0:
        victim = swap_x_for_y(current, victim_input)
        legs.append(Leg("victim", "x->y", victim_input, victim.output, victim.fee_paid))
        victim_output = victim.output
        current = victim.pool

    attacker_profit = None
    if attack_input is not None and attack_input > 0.0:
        back = swap_y_for_x(current, attack_y)
        legs.append(Leg("back_run", "y->x", attack_y, back.output, back.fee_paid))
        attacker_profit = back.output - attack_input
        current = back.pool

    if arb_mode == ARB_PAPER:
        arb_in = victim_output
    else:
        arb_in = (start.y - current.y) / (1.0 - pool.fee)
    if arb_in > 0.0:
        arb = swap_y_for_x(current, arb_in)
        legs.append(Leg("arbitrage", "y->x", arb_in, arb.output, arb.fee_paid))
        current = arb.pool

    fees_y = 0.0
    for leg in legs:
        if leg.direction == "x->y":
            fees_y += leg.fee_paid * price
        else:
            fees_y += leg.fee_paid
    residual = current.marginal_price / price - 1.0
    return SequenceReplay(
        legs=tuple(legs),
        fees_y=fees_y,
        victim_output=victim_output,
        attacker_profit=attacker_profit,
        final_pool=current,
        price_residual=residual,
    )


@dataclass(frozen=True)
class FlowReplay:
    """Replayed protected-pool and unprotected-pool sequences for one order."""

    pool_n: SequenceReplay | None
    pool_w: SequenceReplay | None

    @property
    def fees_y(self) -> float:
        total = 0.0
        if self.pool_n is not None:
            total += self.pool_n.fees_y
        if self.pool_w is not None:
            total += self.pool_w.fees_y
        return total


@dataclass(frozen=True)
class MarketReplay:
    """Both order streams replayed and mixed by their flow shares."""

    sophisticated: FlowReplay
    retail: FlowReplay
    omega: float

    @property
    def total_fee(self) -> float:
        return (1.0 - self.omega) * self.sophisticated.fees_y + self.omega * self.retail.fees_y


def replay_flow(
    market: MarketConfig,
    input_n: float,
    input_w: float,
    attack_input: float | None,
    arb_mode: str = ARB_PAPER,
) -> FlowReplay:
    """Replay one order's trades; sizes and attack input come from the caller."""
    pool_n = market.pool_n()
    pool_w = market.pool_w()
    seq_n = None
    seq_w = None
    if input_n > 0.0:
        if pool_n is None:
            raise ValueError("trade routed to the protected pool but p = 0")
        seq_n = replay_pool_sequence(pool_n, input_n, None, arb_mode)
    if input_w > 0.0 or (attack_input is not None and attack_input > 0.0):
        if pool_w is None:
            raise ValueError("trade routed to the unprotected pool but p = 1")
        seq_w = replay_pool_sequence(pool_w, input_w, attack_input, arb_mode)
    return FlowReplay(seq_n, seq_w)


def replay_market(
    market: MarketConfig,
    soph_sizes: tuple[float, float],
    retail_sizes: tuple[float, float],
    soph_attack: float | None,
    retail_attack: float | None,
    arb_mode: str = ARB_PAPER,
) -> MarketReplay:
    """Replay the sophisticated and retail order streams independently."""
    soph = replay_flow(market, soph_sizes[0], soph_sizes[1], soph_attack, arb_mode)
    retail = replay_flow(market, retail_sizes[0], retail_sizes[1], retail_attack, arb_mode)
    return MarketReplay(soph, retail, market.omega)


def max_price_residual(replays: Iterable[SequenceReplay]) -> float:
    """Largest absolute price-restoration residual across sequences."""
    worst = 0.0
    for seq in replays:
        worst = max(worst, abs(seq.price_residual))
    return worst
