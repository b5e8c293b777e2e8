"""Nash and epsilon-equilibrium classification of the liquidity game.

The per-order fee total is affine in the protected-pool liquidity fraction p,
so whenever its gradient is nonzero the only candidate equilibria put all
liquidity in one pool. The relative gradient delta_f = (F(1) - F(0)) /
min(F(0), F(1)) bounds how much any provider can gain by switching corners,
which is what decides epsilon-equilibria independently of where liquidity
currently sits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .fees import FeeBreakdown, LPPosition, fee_constructive, total_fee
from .market import MarketConfig
from .traders import TraderParams

# Gradients below this scale-aware floor count as zero: float equality on
# fee sums is meaningless.
_GRAD_REL_TOL = 1e-12


class Nash(enum.Enum):
    POOL_N = "PoolN"
    POOL_W = "PoolW"
    ALL = "All"


@dataclass(frozen=True)
class EquilibriumVerdict:
    """Corner fees, gradient, relative gradient, and the Nash location."""

    nash: Nash
    grad_f: float
    delta_f: float
    fee_at_p0: float
    fee_at_p1: float


def _verdict_from_corners(f0: float, f1: float) -> EquilibriumVerdict:
    grad = f1 - f0
    if abs(grad) <= _GRAD_REL_TOL * max(f0, f1, 1.0):
        return EquilibriumVerdict(Nash.ALL, grad, 0.0, f0, f1)
    f_min = min(f0, f1)
    delta = grad / f_min if f_min > 0.0 else math.copysign(math.inf, grad)
    nash = Nash.POOL_N if grad > 0.0 else Nash.POOL_W
    return EquilibriumVerdict(nash, grad, delta, f0, f1)


def classify_nash_detailed(
    market: MarketConfig, trader: TraderParams
) -> tuple[EquilibriumVerdict, FeeBreakdown, FeeBreakdown]:
    """Verdict plus the two corner fee breakdowns it was computed from."""
    bd0 = fee_constructive(replace(market, p=0.0), trader)
    bd1 = fee_constructive(replace(market, p=1.0), trader)
    return _verdict_from_corners(bd0.total, bd1.total), bd0, bd1


def classify_nash(market: MarketConfig, trader: TraderParams) -> EquilibriumVerdict:
    """Locate the Nash equilibrium from the two corner fee totals.

    The market's own p is irrelevant here; both corners are evaluated. A
    zero gradient (including the no-trading case) makes every distribution
    an equilibrium.
    """
    verdict, _, _ = classify_nash_detailed(market, trader)
    return verdict


@dataclass(frozen=True)
class EpsilonCheck:
    """Whether no provider can gain more than a factor 1 + epsilon."""

    is_equilibrium: bool
    worst_index: int | None
    worst_improvement: float


def _fee_fn_homogeneous(market: MarketConfig, trader: TraderParams):
    def at(p: float) -> float:
        return total_fee(replace(market, p=p), trader)

    return at


def _epsilon_check(fee_at, positions: Sequence[LPPosition], epsilon: float) -> EpsilonCheck:
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    total_share = sum(pos.share for pos in positions)
    if abs(total_share - 1.0) > 1e-9:
        raise ValueError(f"liquidity shares must sum to 1, got {total_share}")
    best_corner = max(fee_at(0.0), fee_at(1.0))
    worst_idx: int | None = None
    worst_improvement = 0.0
    for idx, pos in enumerate(positions):
        current = fee_at(pos.p)
        if best_corner <= 0.0:
            improvement = 0.0
        elif current <= 0.0:
            improvement = math.inf
        else:
            # The provider's share scales both sides, so it cancels. Written
            # as a difference quotient so a provider at the poor corner sees
            # bit-for-bit the same ratio delta_f reports.
            improvement = (best_corner - current) / current
        if worst_idx is None or improvement > worst_improvement:
            worst_idx, worst_improvement = idx, improvement
    return EpsilonCheck(worst_improvement <= epsilon, worst_idx, worst_improvement)


def is_epsilon_equilibrium(
    positions: Sequence[LPPosition],
    market: MarketConfig,
    trader: TraderParams,
    epsilon: float,
) -> EpsilonCheck:
    """A configuration holds iff no provider improves by more than a factor
    1 + epsilon by moving everything to the better corner. Indifference at
    exactly epsilon means staying put."""
    return _epsilon_check(_fee_fn_homogeneous(market, trader), positions, epsilon)


# ---------------------------------------------------------------------------
# heterogeneous relative benefit


@dataclass(frozen=True)
class AlphaDistribution:
    """Discrete distribution over trader relative benefit."""

    support: tuple[tuple[float, float], ...]  # (alpha, probability mass)

    def __post_init__(self) -> None:
        if not self.support:
            raise ValueError("distribution support must be nonempty")
        mass = 0.0
        for alpha, weight in self.support:
            if not alpha > 0.0:
                raise ValueError(f"support values must be > 0, got {alpha}")
            if not weight > 0.0:
                raise ValueError(f"masses must be > 0, got {weight}")
            mass += weight
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"masses must sum to 1, got {mass}")

    @classmethod
    def single(cls, alpha: float) -> "AlphaDistribution":
        return cls(((alpha, 1.0),))

    @classmethod
    def two_point(cls, mean_alpha: float, k: float) -> "AlphaDistribution":
        """Equal-mass pair at (1 -/+ 1/k) times the mean; wider for small k."""
        if not k > 1.0:
            raise ValueError(f"spread parameter k must exceed 1, got {k}")
        lo = (1.0 - 1.0 / k) * mean_alpha
        hi = (1.0 + 1.0 / k) * mean_alpha
        return cls(((lo, 0.5), (hi, 0.5)))


def expected_fee(
    market: MarketConfig, dist: AlphaDistribution, slippage_tolerance: float, p: float
) -> float:
    """Probability-weighted per-order fee total at liquidity fraction p."""
    at_p = replace(market, p=p)
    return sum(
        weight * total_fee(at_p, TraderParams(alpha, slippage_tolerance))
        for alpha, weight in dist.support
    )


def classify_nash_heterogeneous(
    market: MarketConfig, dist: AlphaDistribution, slippage_tolerance: float
) -> EquilibriumVerdict:
    """Nash location under a distribution of relative benefits."""
    f0 = expected_fee(market, dist, slippage_tolerance, 0.0)
    f1 = expected_fee(market, dist, slippage_tolerance, 1.0)
    return _verdict_from_corners(f0, f1)


def is_epsilon_equilibrium_heterogeneous(
    positions: Sequence[LPPosition],
    market: MarketConfig,
    dist: AlphaDistribution,
    slippage_tolerance: float,
    epsilon: float,
) -> EpsilonCheck:
    """Epsilon-equilibrium test with expected fees replacing point fees."""

    def at(p: float) -> float:
        return expected_fee(market, dist, slippage_tolerance, p)

    return _epsilon_check(at, positions, epsilon)
