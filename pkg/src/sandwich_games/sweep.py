"""Parameter-grid sweeps and single-point reports.

A sweep walks a linear (alpha, slippage) grid for one or more retail-flow
shares, classifies the equilibrium at every point, and streams records in a
fixed order (omega, then alpha, then slippage), so identical specs produce
byte-identical CSV output. Grids start strictly above zero because the
participation thresholds sit near the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import IO, Iterator, Mapping, Sequence

from .equilibrium import (
    AlphaDistribution,
    EquilibriumVerdict,
    Nash,
    classify_nash_detailed,
    classify_nash_heterogeneous,
)
from .fees import (
    ClosedFormDivergence,
    FeeBreakdown,
    Regime,
    closed_form_divergence,
    fee_closed_form,
    fee_constructive,
    resolve_market,
)
from .market import MarketConfig
from .oracle import ARB_EXACT, ARB_PAPER, replay_market
from .sandwich import AttackOutcome
from .traders import TradePlan, TraderParams

CSV_HEADER = "alpha,s,omega,F0,F1,grad_f,delta_f,clamped,nash,regime,attack_soph,attack_retail"


class ConfigError(ValueError):
    """Invalid sweep configuration; the message names the offending field."""


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear grid with `steps` points from lo to hi."""

    lo: float
    hi: float
    steps: int

    def validate(self, path: str) -> None:
        if not self.lo > 0.0:
            raise ConfigError(f"{path}.min: must be > 0, got {self.lo}")
        if not self.hi >= self.lo:
            raise ConfigError(f"{path}.max: must be >= min, got {self.hi} < {self.lo}")
        if self.steps < 1:
            raise ConfigError(f"{path}.steps: must be >= 1, got {self.steps}")

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.lo]
        step = (self.hi - self.lo) / (self.steps - 1)
        return [self.lo + i * step for i in range(self.steps)]


@dataclass(frozen=True)
class SweepSpec:
    """Everything a sweep needs: market constants, grids, flow shares."""

    x: float
    y: float
    fee: float
    alpha: GridSpec
    s: GridSpec
    omegas: tuple[float, ...]
    epsilons: tuple[float, ...] = ()
    two_point_k: float | None = None

    def validate(self) -> None:
        if not self.x > 0.0:
            raise ConfigError(f"market.x: must be > 0, got {self.x}")
        if not self.y > 0.0:
            raise ConfigError(f"market.y: must be > 0, got {self.y}")
        if not 0.0 < self.fee < 1.0:
            raise ConfigError(f"market.fee: must lie in (0, 1), got {self.fee}")
        self.alpha.validate("alpha")
        self.s.validate("s")
        if self.s.hi >= 1.0:
            raise ConfigError(f"s.max: must be < 1, got {self.s.hi}")
        if not self.omegas:
            raise ConfigError("omega: at least one value required")
        for value in self.omegas:
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"omega: values must lie in [0, 1], got {value}")
        for value in self.epsilons:
            if value < 0.0:
                raise ConfigError(f"epsilon: values must be >= 0, got {value}")
        if self.two_point_k is not None and not self.two_point_k > 1.0:
            raise ConfigError(f"distribution.k: must exceed 1, got {self.two_point_k}")


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: corner fees, gradient diagnostics, and labels.

    Regime and attack flags describe the all-unprotected corner (p = 0),
    where the attack mechanics actually run; for two-point sweeps they are
    evaluated at the mean relative benefit.
    """

    alpha: float
    s: float
    omega: float
    f0: float
    f1: float
    grad_f: float
    delta_f: float
    clamped: bool
    nash: Nash
    regime: Regime
    attack_soph: bool
    attack_retail: bool


def _record_for_point(
    alpha: float, s: float, omega: float, spec: SweepSpec
) -> SweepRecord:
    market = MarketConfig(spec.x, spec.y, spec.fee, p=0.0, omega=omega)
    trader = TraderParams(alpha, s)
    if spec.two_point_k is None:
        verdict, bd0, _ = classify_nash_detailed(market, trader)
        regime = bd0.regime
    else:
        dist = AlphaDistribution.two_point(alpha, spec.two_point_k)
        verdict = classify_nash_heterogeneous(market, dist, s)
        regime = fee_constructive(market, trader).regime
    return SweepRecord(
        alpha=alpha,
        s=s,
        omega=omega,
        f0=verdict.fee_at_p0,
        f1=verdict.fee_at_p1,
        grad_f=verdict.grad_f,
        delta_f=verdict.delta_f,
        clamped=math.isinf(verdict.delta_f),
        nash=verdict.nash,
        regime=regime,
        attack_soph=regime.sophisticated_attacked,
        attack_retail=regime.retail_attacked,
    )


def run_sweep(spec: SweepSpec) -> Iterator[SweepRecord]:
    """Yield one record per (omega, alpha, s) grid point, in that nesting."""
    spec.validate()
    alphas = spec.alpha.values()
    slippages = spec.s.values()
    for omega in spec.omegas:
        for alpha in alphas:
            for s in slippages:
                yield _record_for_point(alpha, s, omega, spec)


def _fmt(value: float) -> str:
    # repr round-trips doubles and uses '.' with no grouping; infinities
    # become the bare "inf"/"-inf" sentinels the schema calls for.
    return repr(value)


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def record_to_csv_row(record: SweepRecord) -> str:
    return ",".join(
        (
            _fmt(record.alpha),
            _fmt(record.s),
            _fmt(record.omega),
            _fmt(record.f0),
            _fmt(record.f1),
            _fmt(record.grad_f),
            _fmt(record.delta_f),
            _fmt_bool(record.clamped),
            record.nash.value,
            record.regime.value,
            _fmt_bool(record.attack_soph),
            _fmt_bool(record.attack_retail),
        )
    )


def write_sweep_csv(records: Iterator[SweepRecord] | Sequence[SweepRecord], out: IO[str]) -> int:
    """Write the schema header plus one row per record; returns the count."""
    out.write(CSV_HEADER + "\n")
    count = 0
    for record in records:
        out.write(record_to_csv_row(record) + "\n")
        count += 1
    return count


# ---------------------------------------------------------------------------
# single-point report


@dataclass(frozen=True)
class EpsilonVerdict:
    """One epsilon level: can any initial distribution be disturbed, and can
    a provider parked at this market's p gain more than 1 + epsilon."""

    epsilon: float
    holds_for_all_distributions: bool
    holds_at_market_p: bool
    improvement_at_market_p: float


@dataclass(frozen=True)
class PointReport:
    """Everything the model says about a single parameter point."""

    market: MarketConfig
    trader: TraderParams
    plan_soph: TradePlan
    plan_retail: TradePlan
    outcome_soph: AttackOutcome | None
    outcome_retail: AttackOutcome | None
    constructive: FeeBreakdown
    closed_form: FeeBreakdown
    divergence: ClosedFormDivergence
    replay_total: float
    replay_matches_constructive: bool
    closed_form_matches_constructive: bool
    paper_arb_price_residual: float
    exact_arb_price_residual: float
    verdict: EquilibriumVerdict
    epsilon_verdicts: tuple[EpsilonVerdict, ...] = field(default_factory=tuple)


def _flow_residual(replay) -> float:
    worst = 0.0
    for flow in (replay.sophisticated, replay.retail):
        for seq in (flow.pool_n, flow.pool_w):
            if seq is not None:
                worst = max(worst, abs(seq.price_residual))
    return worst


def run_point(
    market: MarketConfig, trader: TraderParams, epsilons: Sequence[float] = ()
) -> PointReport:
    """Evaluate one point along every route: constructive fees, collapsed
    forms, the replay oracle, and the equilibrium verdict."""
    res = resolve_market(market, trader)
    constructive = fee_constructive(market, trader)
    closed = fee_closed_form(market, trader)
    divergence = closed_form_divergence(market, trader)
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
    sizes_soph = (res.plan_soph.input_n, res.plan_soph.input_w)
    sizes_retail = (res.plan_retail.input_n, res.plan_retail.input_w)
    replay_paper = replay_market(market, sizes_soph, sizes_retail, soph_attack, retail_attack)
    replay_exact = replay_market(
        market, sizes_soph, sizes_retail, soph_attack, retail_attack, arb_mode=ARB_EXACT
    )
    scale = max(abs(constructive.total), abs(replay_paper.total_fee), 1e-12)
    replay_ok = abs(constructive.total - replay_paper.total_fee) <= 1e-9 * scale
    cf_scale = max(abs(constructive.total), abs(closed.total), 1e-12)
    closed_ok = abs(constructive.total - closed.total) <= 1e-9 * cf_scale

    verdict, _, _ = classify_nash_detailed(market, trader)
    eps_verdicts = []
    for eps in epsilons:
        universal = abs(verdict.delta_f) <= eps
        f_here = constructive.total
        best = max(verdict.fee_at_p0, verdict.fee_at_p1)
        if best <= 0.0:
            improvement = 0.0
        elif f_here <= 0.0:
            improvement = math.inf
        else:
            improvement = (best - f_here) / f_here
        eps_verdicts.append(EpsilonVerdict(eps, universal, improvement <= eps, improvement))
    return PointReport(
        market=market,
        trader=trader,
        plan_soph=res.plan_soph,
        plan_retail=res.plan_retail,
        outcome_soph=res.outcome_soph,
        outcome_retail=res.outcome_retail,
        constructive=constructive,
        closed_form=closed,
        divergence=divergence,
        replay_total=replay_paper.total_fee,
        replay_matches_constructive=replay_ok,
        closed_form_matches_constructive=closed_ok,
        paper_arb_price_residual=_flow_residual(replay_paper),
        exact_arb_price_residual=_flow_residual(replay_exact),
        verdict=verdict,
        epsilon_verdicts=tuple(eps_verdicts),
    )


# ---------------------------------------------------------------------------
# configuration loading


def _get_number(section: Mapping, key: str, path: str) -> float:
    if key not in section:
        raise ConfigError(f"{path}: missing required field")
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _get_grid(config: Mapping, name: str) -> GridSpec:
    section = config.get(name)
    if not isinstance(section, Mapping):
        raise ConfigError(f"{name}: missing grid section")
    grid = GridSpec(
        lo=_get_number(section, "min", f"{name}.min"),
        hi=_get_number(section, "max", f"{name}.max"),
        steps=int(_get_number(section, "steps", f"{name}.steps")),
    )
    grid.validate(name)
    return grid


def _get_list(config: Mapping, key: str, default: tuple[float, ...]) -> tuple[float, ...]:
    if key not in config:
        return default
    raw = config[key]
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return (float(raw),)
    if isinstance(raw, (list, tuple)):
        values = []
        for item in raw:
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise ConfigError(f"{key}: expected numbers, got {item!r}")
            values.append(float(item))
        return tuple(values)
    raise ConfigError(f"{key}: expected a number or list of numbers, got {raw!r}")


def spec_from_mapping(config: Mapping) -> SweepSpec:
    """Build and validate a SweepSpec from parsed configuration data."""
    market = config.get("market")
    if not isinstance(market, Mapping):
        raise ConfigError("market: missing section")
    two_point_k = None
    if "distribution" in config:
        dist = config["distribution"]
        if not isinstance(dist, Mapping):
            raise ConfigError("distribution: expected a section")
        two_point_k = _get_number(dist, "k", "distribution.k")
    spec = SweepSpec(
        x=_get_number(market, "x", "market.x"),
        y=_get_number(market, "y", "market.y"),
        fee=_get_number(market, "fee", "market.fee"),
        alpha=_get_grid(config, "alpha"),
        s=_get_grid(config, "s"),
        omegas=_get_list(config, "omega", ()),
        epsilons=_get_list(config, "epsilon", ()),
        two_point_k=two_point_k,
    )
    spec.validate()
    return spec


def load_spec(path: str) -> SweepSpec:
    """Read a TOML sweep configuration from disk."""
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib  # type: ignore[no-redef]
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc
    return spec_from_mapping(data)


# ---------------------------------------------------------------------------
# canonical figure sweeps


def canonical_figures(alpha_steps: int = 200, s_steps: int = 100) -> dict[str, SweepSpec]:
    """The four canonical sweeps. Grid ranges follow the usual presentation
    of this model (alpha up to 0.2, slippage up to 0.1, both starting just
    above zero); exact axis bounds are estimates and configurable.

    fig2a/fig2b carry both the equilibrium labels and the relative gradient,
    so the gradient-focused renderings reuse the same files.
    """
    def grids(two_point_k: float | None, omega: float, a_steps: int, sl_steps: int) -> SweepSpec:
        hi_a, hi_s = 0.2, 0.1
        return SweepSpec(
            x=5_000_000.0,
            y=5_000_000.0,
            fee=0.003,
            alpha=GridSpec(hi_a / a_steps, hi_a, a_steps),
            s=GridSpec(hi_s / sl_steps, hi_s, sl_steps),
            omegas=(omega,),
            two_point_k=two_point_k,
        )

    het_alpha = max(alpha_steps // 2, 10)
    het_s = max(s_steps // 2, 10)
    return {
        "fig2a": grids(None, 0.01, alpha_steps, s_steps),
        "fig2b": grids(None, 0.1, alpha_steps, s_steps),
        "appendix_k10": grids(10.0, 0.01, het_alpha, het_s),
        "appendix_k3": grids(3.0, 0.01, het_alpha, het_s),
    }
