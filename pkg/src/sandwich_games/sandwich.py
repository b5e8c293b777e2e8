"""Sandwich attack economics on a single unprotected pool.

Closed forms for the attacker's profit, the smallest victim worth attacking,
and the largest front-run that still lets the victim's trade clear its
slippage tolerance, plus the execution decision built on top of them. The
swap-by-swap oracle in `oracle` re-derives all of these numbers
independently; the formulas here are the fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cpmm import PoolState, expected_output, swap_x_for_y, swap_y_for_x
from .oracle import golden_section_max

# Relative backward step used to probe whether attacker profit is still
# rising at the slippage-limited input size.
_PROBE_STEP = 1e-7


@dataclass(frozen=True)
class AttackParams:
    """A victim order on the unprotected pool: size, tolerance, pool state."""

    pool: PoolState
    victim_input: float
    slippage_tolerance: float

    def __post_init__(self) -> None:
        if not self.victim_input >= 0.0:
            raise ValueError(f"victim input must be >= 0, got {self.victim_input}")
        if not 0.0 <= self.slippage_tolerance < 1.0:
            raise ValueError(
                f"slippage tolerance must lie in [0, 1), got {self.slippage_tolerance}"
            )


@dataclass(frozen=True)
class AttackOutcome:
    """What the attacker did and what the victim received.

    attack_y is the Y leg the front-run bought and the back-run later sells;
    profit is back-run output minus front-run input, in X-tokens.
    """

    executed: bool
    attack_input: float
    attack_output: float
    attack_y: float
    profit: float
    victim_output: float


def attack_profit(pool: PoolState, victim_input: float, attack_input: float) -> float:
    """Attacker's X-token profit from a front-run of `attack_input`.

    Equivalent to replaying front-run, victim trade, and back-run through the
    pool and taking back-run output minus front-run input.
    """
    if not attack_input >= 0.0:
        raise ValueError(f"attack input must be >= 0, got {attack_input}")
    if attack_input == 0.0:
        return 0.0
    x = pool.x
    c = 1.0 - pool.fee
    a = attack_input
    d = victim_input
    grown = x + c * (a + d)
    numerator = c * c * a * grown * grown
    denominator = x * x + (2.0 - pool.fee) * c * x * a + c * c * c * a * (a + d)
    return numerator / denominator - a


def min_victim_size(pool: PoolState, attack_input: float = 0.0) -> float:
    """Victim size above which a front-run of `attack_input` turns a profit.

    Strictly increasing in the attack size; the limit at zero attack size is
    the smallest trade that can be attacked profitably at all.
    """
    if not attack_input >= 0.0:
        raise ValueError(f"attack input must be >= 0, got {attack_input}")
    c = 1.0 - pool.fee
    return pool.fee * (pool.x + attack_input * c) / (c * c)


def max_attack_input(pool: PoolState, victim_input: float, slippage_tolerance: float) -> float:
    """Largest front-run input that still lets the victim's trade execute.

    Solves for the front-run that pushes the victim's realized output down to
    exactly (1 - tolerance) times the undisturbed quote. Zero tolerance
    leaves no room, so the result is 0.
    """
    s = slippage_tolerance
    if not 0.0 <= s < 1.0:
        raise ValueError(f"slippage tolerance must lie in [0, 1), got {s}")
    if not victim_input >= 0.0:
        raise ValueError(f"victim input must be >= 0, got {victim_input}")
    if s == 0.0:
        return 0.0
    x = pool.x
    c = 1.0 - pool.fee
    cd = c * victim_input
    # Grown X-reserve u = x + c*a solves u*(u + cd) = x*(x + cd)/(1 - s).
    rhs = x * (x + cd) / (1.0 - s)
    u = 0.5 * (-cd + math.sqrt(cd * cd + 4.0 * rhs))
    return max((u - x) / c, 0.0)


def profit_maximizing_attack(
    params: AttackParams, search_bound: float | None = None
) -> tuple[float, float]:
    """Unconstrained profit-maximizing front-run size and its profit.

    Golden-section search over [0, bound], doubling the bound until the
    maximum is interior. Profit tends to minus infinity for huge inputs, so
    an interior maximum always exists.
    """
    bound = search_bound if search_bound is not None else params.pool.x
    if not bound > 0.0:
        raise ValueError(f"search bound must be positive, got {search_bound}")

    def profit(a: float) -> float:
        value = attack_profit(params.pool, params.victim_input, a)
        if not math.isfinite(value):
            raise ArithmeticError(f"non-finite profit at attack size {a}")
        return value

    arg_tol = 1e-10 * params.pool.x
    for _ in range(200):
        best_a, best_profit = golden_section_max(profit, 0.0, bound, arg_tol)
        if best_a < bound * (1.0 - 1e-6):
            return best_a, best_profit
        bound *= 2.0
    raise ArithmeticError("profit maximum did not become interior while expanding the bound")


def _effective_attack_input(params: AttackParams) -> float:
    """min(slippage-limited input, unconstrained optimum), computed lazily.

    On realistic parameters the slippage cap binds long before the profit
    curve turns over, so the optimum is only searched for when a backward
    probe shows profit already falling at the cap.
    """
    a_cap = max_attack_input(params.pool, params.victim_input, params.slippage_tolerance)
    if a_cap <= 0.0:
        return 0.0
    at_cap = attack_profit(params.pool, params.victim_input, a_cap)
    just_below = attack_profit(params.pool, params.victim_input, a_cap * (1.0 - _PROBE_STEP))
    if at_cap >= just_below:
        return a_cap
    best_a, _ = golden_section_max(
        lambda a: attack_profit(params.pool, params.victim_input, a),
        0.0,
        a_cap,
        1e-10 * params.pool.x,
    )
    return min(best_a, a_cap)


def decide_attack(params: AttackParams) -> AttackOutcome:
    """Attack iff the executed sandwich would make strictly positive profit.

    The executed front-run is the slippage-limited maximal input (capped by
    the unconstrained optimum in the extreme-tolerance corner). When no
    profitable attack exists the victim trades undisturbed.
    """
    undisturbed = expected_output(params.pool, params.victim_input)
    a_in = _effective_attack_input(params)
    if a_in > 0.0 and attack_profit(params.pool, params.victim_input, a_in) > 0.0:
        front = swap_x_for_y(params.pool, a_in)
        victim = swap_x_for_y(front.pool, params.victim_input)
        back = swap_y_for_x(victim.pool, front.output)
        return AttackOutcome(
            executed=True,
            attack_input=a_in,
            attack_output=back.output,
            attack_y=front.output,
            profit=attack_profit(params.pool, params.victim_input, a_in),
            victim_output=victim.output,
        )
    return AttackOutcome(
        executed=False,
        attack_input=0.0,
        attack_output=0.0,
        attack_y=0.0,
        profit=0.0,
        victim_output=undisturbed,
    )
