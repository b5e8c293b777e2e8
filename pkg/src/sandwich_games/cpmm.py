"""Constant-product pool mechanics: swaps, marginal price, slippage budgets.

Token amounts are real-valued floats. Pools are immutable values and swaps
return fresh states, so everything here is safe to use from parallel sweeps.
The input-side fee is held outside the reserves, which keeps the reserve
product exactly constant across swaps.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PoolState:
    """Reserves of one X<->Y constant-product pool plus its input fee."""

    x: float
    y: float
    fee: float

    def __post_init__(self) -> None:
        if not (self.x > 0.0 and self.y > 0.0):
            raise ValueError(f"pool reserves must be positive, got x={self.x}, y={self.y}")
        # fee == 0 is allowed as the degenerate no-fee pool; it is handy for
        # round-trip identities even though live markets always charge f > 0.
        if not 0.0 <= self.fee < 1.0:
            raise ValueError(f"fee must lie in [0, 1), got {self.fee}")

    @property
    def marginal_price(self) -> float:
        """Instantaneous price of X in Y units."""
        return self.y / self.x

    @property
    def product(self) -> float:
        return self.x * self.y


@dataclass(frozen=True)
class SwapResult:
    """Outcome of one swap: tokens received, fee retained, next pool state."""

    output: float
    fee_paid: float  # in input-token units
    pool: PoolState


def _check_amount(amount: float, name: str) -> None:
    if not amount >= 0.0:  # also rejects NaN
        raise ValueError(f"{name} must be >= 0, got {amount}")


def swap_x_for_y(pool: PoolState, delta_x: float) -> SwapResult:
    """Sell delta_x X-tokens into the pool.

    Only (1 - fee) * delta_x enters the reserves; the output is what the
    constant product releases for that net input.
    """
    _check_amount(delta_x, "delta_x")
    if delta_x == 0.0:
        return SwapResult(0.0, 0.0, pool)
    net_in = (1.0 - pool.fee) * delta_x
    output = pool.y * net_in / (pool.x + net_in)
    new_pool = PoolState(pool.x + net_in, pool.y - output, pool.fee)
    return SwapResult(output, pool.fee * delta_x, new_pool)


def swap_y_for_x(pool: PoolState, delta_y: float) -> SwapResult:
    """Sell delta_y Y-tokens into the pool; mirror of swap_x_for_y."""
    _check_amount(delta_y, "delta_y")
    if delta_y == 0.0:
        return SwapResult(0.0, 0.0, pool)
    net_in = (1.0 - pool.fee) * delta_y
    output = pool.x * net_in / (pool.y + net_in)
    new_pool = PoolState(pool.x - output, pool.y + net_in, pool.fee)
    return SwapResult(output, pool.fee * delta_y, new_pool)


def expected_output(pool: PoolState, delta_x: float) -> float:
    """Y-tokens a seller of delta_x would get with nothing trading in between.

    This is the quote a trader sees at submission time and the baseline that
    slippage tolerances are measured against.
    """
    return swap_x_for_y(pool, delta_x).output


def min_acceptable_output(expected: float, slippage_tolerance: float) -> float:
    """Least output a trader accepts before the trade reverts."""
    if not 0.0 <= slippage_tolerance < 1.0:
        raise ValueError(f"slippage tolerance must lie in [0, 1), got {slippage_tolerance}")
    _check_amount(expected, "expected")
    return (1.0 - slippage_tolerance) * expected
