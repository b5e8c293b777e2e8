"""Trader utilities and closed-form optimal trade sizes.

Two trader kinds split one order stream. Sophisticated traders assume every
unprotected-pool trade gets sandwiched and value that leg's output after the
full slippage haircut; retail traders size as if no attacks exist. Both value
Y-tokens at a private premium and X-tokens at the fair price.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .cpmm import expected_output
from .market import MarketConfig


class TraderKind(enum.Enum):
    SOPHISTICATED = "sophisticated"
    RETAIL = "retail"


@dataclass(frozen=True)
class TraderParams:
    """Relative benefit and slippage tolerance of one trader cohort."""

    alpha: float
    slippage_tolerance: float
    kind: TraderKind = TraderKind.SOPHISTICATED

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise ValueError(f"relative benefit must be > 0, got {self.alpha}")
        if not 0.0 <= self.slippage_tolerance < 1.0:
            raise ValueError(
                f"slippage tolerance must lie in [0, 1), got {self.slippage_tolerance}"
            )


@dataclass(frozen=True)
class TradePlan:
    """Nonnegative trade inputs for the protected and unprotected pools."""

    input_n: float
    input_w: float

    def __post_init__(self) -> None:
        if not (self.input_n >= 0.0 and self.input_w >= 0.0):
            raise ValueError(f"trade inputs must be >= 0, got {self}")


def min_alpha_pool_n(fee: float) -> float:
    """Smallest relative benefit at which trading the protected pool pays."""
    if not 0.0 < fee < 1.0:
        raise ValueError(f"fee must lie in (0, 1), got {fee}")
    return fee / (1.0 - fee)


def min_alpha_pool_w(fee: float, slippage_tolerance: float) -> float:
    """Smallest relative benefit at which a sophisticated trader uses the
    unprotected pool; collapses to the protected-pool bound at zero tolerance.
    """
    if not 0.0 < fee < 1.0:
        raise ValueError(f"fee must lie in (0, 1), got {fee}")
    s = slippage_tolerance
    if not 0.0 <= s < 1.0:
        raise ValueError(f"slippage tolerance must lie in [0, 1), got {s}")
    return (fee + s - s * fee) / ((1.0 - fee) * (1.0 - s))


def _opt_size(reserve_x: float, growth: float, fee: float) -> float:
    # Input that grows the X-reserve by `growth`; clipped at zero below the
    # participation threshold where growth <= 1.
    return max(0.0, reserve_x * (growth - 1.0) / (1.0 - fee))


def optimal_trade_sophisticated(params: TraderParams, market: MarketConfig) -> TradePlan:
    """Utility-maximizing inputs for a sophisticated trader in both pools."""
    f = market.fee
    s = params.slippage_tolerance
    growth_n = math.sqrt((1.0 + params.alpha) * (1.0 - f))
    growth_w = math.sqrt((1.0 + params.alpha) * (1.0 - s) * (1.0 - f))
    return TradePlan(
        input_n=_opt_size(market.p * market.x, growth_n, f),
        input_w=_opt_size((1.0 - market.p) * market.x, growth_w, f),
    )


def optimal_trade_retail(params: TraderParams, market: MarketConfig) -> TradePlan:
    """Utility-maximizing inputs for a retail trader; the unprotected-pool
    size ignores attacks entirely, so both pools use the same growth factor.
    """
    f = market.fee
    growth = math.sqrt((1.0 + params.alpha) * (1.0 - f))
    return TradePlan(
        input_n=_opt_size(market.p * market.x, growth, f),
        input_w=_opt_size((1.0 - market.p) * market.x, growth, f),
    )


def optimal_trade(params: TraderParams, market: MarketConfig) -> TradePlan:
    """Dispatch on the cohort recorded in params."""
    if params.kind is TraderKind.RETAIL:
        return optimal_trade_retail(params, market)
    return optimal_trade_sophisticated(params, market)


def _leg_utility(output: float, input_x: float, alpha: float, price: float) -> float:
    return (1.0 + alpha) * output - price * input_x


def _pool_output(pool, input_x: float, pool_name: str) -> float:
    if input_x == 0.0:
        return 0.0
    if pool is None:
        raise ValueError(f"plan trades in the {pool_name} pool, which holds no liquidity")
    return expected_output(pool, input_x)


def utility_sophisticated(plan: TradePlan, params: TraderParams, market: MarketConfig) -> float:
    """Y-denominated utility with the unprotected leg valued post-attack.

    The unprotected-pool output is taken at the slippage floor regardless of
    whether a profitable attack actually exists; that is exactly the
    assumption under which sophisticated traders size their orders.
    """
    price = market.price
    out_n = _pool_output(market.pool_n(), plan.input_n, "protected")
    out_w = _pool_output(market.pool_w(), plan.input_w, "unprotected")
    haircut = 1.0 - params.slippage_tolerance
    return _leg_utility(out_n, plan.input_n, params.alpha, price) + _leg_utility(
        haircut * out_w, plan.input_w, params.alpha, price
    )


def utility_retail(plan: TradePlan, params: TraderParams, market: MarketConfig) -> float:
    """Y-denominated expected utility that ignores attacks in both pools."""
    price = market.price
    out_n = _pool_output(market.pool_n(), plan.input_n, "protected")
    out_w = _pool_output(market.pool_w(), plan.input_w, "unprotected")
    return _leg_utility(out_n, plan.input_n, params.alpha, price) + _leg_utility(
        out_w, plan.input_w, params.alpha, price
    )


def utility(plan: TradePlan, params: TraderParams, market: MarketConfig) -> float:
    """Dispatch on the cohort recorded in params."""
    if params.kind is TraderKind.RETAIL:
        return utility_retail(plan, params, market)
    return utility_sophisticated(plan, params, market)
