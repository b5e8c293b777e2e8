"""Two-pool market configuration.

The market splits total reserves between a protected pool (no sandwich
attacks, fraction p of liquidity) and an unprotected pool (fraction 1 - p).
Both pools quote the same marginal price y / x and charge the same fee.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cpmm import PoolState


@dataclass(frozen=True)
class MarketConfig:
    """Total reserves, fee, liquidity split and retail order-flow share.

    p is the fraction of liquidity in the protected pool (Pool_N); omega is
    the fraction of order flow coming from retail traders.
    """

    x: float
    y: float
    fee: float
    p: float
    omega: float

    def __post_init__(self) -> None:
        if not (self.x > 0.0 and self.y > 0.0):
            raise ValueError(f"total reserves must be positive, got x={self.x}, y={self.y}")
        if not 0.0 < self.fee < 1.0:
            raise ValueError(f"fee must lie in (0, 1), got {self.fee}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"liquidity fraction p must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"retail share omega must lie in [0, 1], got {self.omega}")

    @property
    def price(self) -> float:
        """Fair price of X in Y units; identical in both pools."""
        return self.y / self.x

    def pool_n(self) -> PoolState | None:
        """Protected pool, or None when it holds no liquidity (p = 0)."""
        if self.p == 0.0:
            return None
        return PoolState(self.p * self.x, self.p * self.y, self.fee)

    def pool_w(self) -> PoolState | None:
        """Unprotected pool, or None when it holds no liquidity (p = 1)."""
        if self.p == 1.0:
            return None
        return PoolState((1.0 - self.p) * self.x, (1.0 - self.p) * self.y, self.fee)
