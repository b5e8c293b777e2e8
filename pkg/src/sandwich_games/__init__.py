"""Game-theoretic model of sandwich attacks on constant-product AMM pools.

Swap mechanics, attack profitability and limits, optimal trader sizing,
liquidity-provider fee accounting, and Nash / epsilon-equilibrium
classification, with a swap-by-swap replay oracle validating every closed
form and sweep tooling for parameter grids.
"""

from .cpmm import (
    PoolState,
    SwapResult,
    expected_output,
    min_acceptable_output,
    swap_x_for_y,
    swap_y_for_x,
)
from .equilibrium import (
    AlphaDistribution,
    EpsilonCheck,
    EquilibriumVerdict,
    Nash,
    classify_nash,
    classify_nash_heterogeneous,
    expected_fee,
    is_epsilon_equilibrium,
    is_epsilon_equilibrium_heterogeneous,
)
from .fees import (
    FeeBreakdown,
    LPPosition,
    Regime,
    closed_form_divergence,
    fee_closed_form,
    fee_constructive,
    lp_fee,
    resolve_market,
    total_fee,
)
from .market import MarketConfig
from .sandwich import (
    AttackOutcome,
    AttackParams,
    attack_profit,
    decide_attack,
    max_attack_input,
    min_victim_size,
    profit_maximizing_attack,
)
from .sweep import (
    ConfigError,
    GridSpec,
    PointReport,
    SweepRecord,
    SweepSpec,
    canonical_figures,
    load_spec,
    run_point,
    run_sweep,
    write_sweep_csv,
)
from .traders import (
    TradePlan,
    TraderKind,
    TraderParams,
    min_alpha_pool_n,
    min_alpha_pool_w,
    optimal_trade,
    optimal_trade_retail,
    optimal_trade_sophisticated,
    utility,
    utility_retail,
    utility_sophisticated,
)

__all__ = [
    "AlphaDistribution",
    "AttackOutcome",
    "AttackParams",
    "ConfigError",
    "EpsilonCheck",
    "EquilibriumVerdict",
    "FeeBreakdown",
    "GridSpec",
    "LPPosition",
    "MarketConfig",
    "Nash",
    "PointReport",
    "PoolState",
    "Regime",
    "SwapResult",
    "SweepRecord",
    "SweepSpec",
    "TradePlan",
    "TraderKind",
    "TraderParams",
    "attack_profit",
    "canonical_figures",
    "classify_nash",
    "classify_nash_heterogeneous",
    "closed_form_divergence",
    "decide_attack",
    "expected_fee",
    "expected_output",
    "fee_closed_form",
    "fee_constructive",
    "is_epsilon_equilibrium",
    "is_epsilon_equilibrium_heterogeneous",
    "load_spec",
    "lp_fee",
    "max_attack_input",
    "min_acceptable_output",
    "min_alpha_pool_n",
    "min_alpha_pool_w",
    "min_victim_size",
    "optimal_trade",
    "optimal_trade_retail",
    "optimal_trade_sophisticated",
    "profit_maximizing_attack",
    "resolve_market",
    "run_point",
    "run_sweep",
    "swap_x_for_y",
    "swap_y_for_x",
    "total_fee",
    "utility",
    "utility_retail",
    "utility_sophisticated",
    "write_sweep_csv",
]

__version__ = "0.1.0"
