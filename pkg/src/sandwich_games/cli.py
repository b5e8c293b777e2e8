"""Command-line front end.

Subcommands: `point` for a single-parameter evaluation, `sweep` for grid
CSVs, `verify` for the randomized oracle-agreement suite, and `figures` for
the four canonical sweep CSVs. Exit codes: 0 success, 1 configuration error,
2 numeric or verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import math
import os
import sys
from typing import Sequence

from . import verify as verify_mod
from .market import MarketConfig
from .sweep import (
    ConfigError,
    GridSpec,
    PointReport,
    SweepSpec,
    canonical_figures,
    load_spec,
    run_point,
    run_sweep,
    write_sweep_csv,
)
from .traders import TraderParams

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    # Flag mistakes are configuration errors, not numeric ones.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _jsonable(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(value).items()}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _print_point_report(report: PointReport) -> None:
    m, t = report.market, report.trader
    print(f"market: x={m.x:g} y={m.y:g} fee={m.fee:g} p={m.p:g} omega={m.omega:g}")
    print(f"trader: alpha={t.alpha:g} slippage={t.slippage_tolerance:g}")
    print(f"regime: {report.constructive.regime.value}")
    print(
        "trades: sophisticated "
        f"n={report.plan_soph.input_n:.6g} w={report.plan_soph.input_w:.6g} | "
        f"retail n={report.plan_retail.input_n:.6g} w={report.plan_retail.input_w:.6g}"
    )
    for label, outcome in (("sophisticated", report.outcome_soph), ("retail", report.outcome_retail)):
        if outcome is None:
            print(f"attack on {label} flow: no unprotected-pool trade")
        elif outcome.executed:
            print(
                f"attack on {label} flow: executed, input={outcome.attack_input:.6g} "
                f"profit={outcome.profit:.6g} victim_output={outcome.victim_output:.6g}"
            )
        else:
            print(f"attack on {label} flow: not profitable")
    c = report.constructive
    print(
        f"fees (constructive): total={c.total:.10g} n={c.fee_n:.10g} "
        f"w_soph={c.fee_w_soph:.10g} w_retail={c.fee_w_retail:.10g}"
    )
    print(
        f"fees (closed form) : total={report.closed_form.total:.10g} "
        f"agreement={'ok' if report.closed_form_matches_constructive else 'DIVERGES'} "
        f"(w_soph ratio={report.divergence.ratio_w_soph:.6g}, "
        f"w_retail ratio={report.divergence.ratio_w_retail:.6g})"
    )
    print(
        f"fees (oracle replay): total={report.replay_total:.10g} "
        f"agreement={'ok' if report.replay_matches_constructive else 'DIVERGES'}"
    )
    print(
        f"price restoration residual: paper-arb={report.paper_arb_price_residual:.3e} "
        f"exact-arb={report.exact_arb_price_residual:.3e}"
    )
    v = report.verdict
    print(
        f"equilibrium: nash={v.nash.value} F(0)={v.fee_at_p0:.10g} F(1)={v.fee_at_p1:.10g} "
        f"grad={v.grad_f:.10g} delta_f={v.delta_f:.10g}"
    )
    for ev in report.epsilon_verdicts:
        print(
            f"epsilon={ev.epsilon:g}: all-distributions "
            f"{'hold' if ev.holds_for_all_distributions else 'can be disturbed'}; "
            f"provider at p={m.p:g} "
            f"{'stays' if ev.holds_at_market_p else 'moves'} "
            f"(improvement {ev.improvement_at_market_p:.6g})"
        )


def _cmd_point(args: argparse.Namespace) -> int:
    market = MarketConfig(x=args.x, y=args.y, fee=args.fee, p=args.p, omega=args.omega)
    trader = TraderParams(args.alpha, args.s)
    report = run_point(market, trader, tuple(args.epsilon))
    if args.json:
        print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    else:
        _print_point_report(report)
    if not (report.replay_matches_constructive):
        print("error: oracle replay disagrees with constructive fees", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _spec_from_args(args: argparse.Namespace) -> SweepSpec:
    if args.config:
        spec = load_spec(args.config)
    else:
        spec = SweepSpec(
            x=5_000_000.0,
            y=5_000_000.0,
            fee=0.003,
            alpha=GridSpec(0.001, 0.2, 200),
            s=GridSpec(0.001, 0.1, 100),
            omegas=(0.01,),
        )
    # Flags override file values field by field.
    updates = {}
    for attr, flag in (("x", "x"), ("y", "y"), ("fee", "fee")):
        value = getattr(args, flag)
        if value is not None:
            updates[attr] = value
    if args.omega:
        updates["omegas"] = tuple(args.omega)
    if args.two_point_k is not None:
        updates["two_point_k"] = args.two_point_k
    alpha = spec.alpha
    if args.alpha_min is not None or args.alpha_max is not None or args.alpha_steps is not None:
        alpha = GridSpec(
            args.alpha_min if args.alpha_min is not None else alpha.lo,
            args.alpha_max if args.alpha_max is not None else alpha.hi,
            args.alpha_steps if args.alpha_steps is not None else alpha.steps,
        )
        updates["alpha"] = alpha
    s = spec.s
    if args.s_min is not None or args.s_max is not None or args.s_steps is not None:
        s = GridSpec(
            args.s_min if args.s_min is not None else s.lo,
            args.s_max if args.s_max is not None else s.hi,
            args.s_steps if args.s_steps is not None else s.steps,
        )
        updates["s"] = s
    if updates:
        spec = dataclasses.replace(spec, **updates)
    spec.validate()
    return spec


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            count = write_sweep_csv(run_sweep(spec), fh)
        print(f"wrote {count} records to {args.out}", file=sys.stderr)
    else:
        write_sweep_csv(run_sweep(spec), sys.stdout)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    results = verify_mod.run_all(args.trials, args.seed)
    if args.json:
        print(json.dumps([_jsonable(r) for r in results], indent=2, sort_keys=True))
    else:
        for result in results:
            status = "PASS" if result.passed else "FAIL"
            extra = f" ({result.detail})" if result.detail else ""
            print(
                f"{status} {result.name}: worst relative error "
                f"{result.max_rel_err:.3e} over {result.trials} trials{extra}"
            )
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


def _cmd_figures(args: argparse.Namespace) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for name, spec in canonical_figures(args.alpha_steps, args.s_steps).items():
        path = os.path.join(args.out_dir, f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            count = write_sweep_csv(run_sweep(spec), fh)
        print(f"wrote {count} records to {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sandwich-games", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="evaluate a single parameter point")
    point.add_argument("--x", type=float, default=5_000_000.0, help="total X reserves")
    point.add_argument("--y", type=float, default=5_000_000.0, help="total Y reserves")
    point.add_argument("--fee", type=float, default=0.003, help="pool fee fraction")
    point.add_argument("--p", type=float, default=0.5, help="protected-pool liquidity fraction")
    point.add_argument("--omega", type=float, default=0.01, help="retail order-flow share")
    point.add_argument("--alpha", type=float, required=True, help="trader relative benefit")
    point.add_argument("--s", type=float, required=True, help="trader slippage tolerance")
    point.add_argument(
        "--epsilon", type=float, action="append", default=[], help="epsilon level (repeatable)"
    )
    point.add_argument("--json", action="store_true", help="emit the report as JSON")
    point.set_defaults(func=_cmd_point)

    sweep = sub.add_parser("sweep", help="run a grid sweep and emit CSV")
    sweep.add_argument("--config", help="TOML sweep configuration file")
    sweep.add_argument("--out", help="output CSV path (default: stdout)")
    sweep.add_argument("--x", type=float, default=None)
    sweep.add_argument("--y", type=float, default=None)
    sweep.add_argument("--fee", type=float, default=None)
    sweep.add_argument("--omega", type=float, action="append", default=[])
    sweep.add_argument("--alpha-min", type=float, default=None)
    sweep.add_argument("--alpha-max", type=float, default=None)
    sweep.add_argument("--alpha-steps", type=int, default=None)
    sweep.add_argument("--s-min", type=float, default=None)
    sweep.add_argument("--s-max", type=float, default=None)
    sweep.add_argument("--s-steps", type=int, default=None)
    sweep.add_argument(
        "--two-point-k", type=float, default=None, help="two-point spread around the grid alpha"
    )
    sweep.set_defaults(func=_cmd_sweep)

    verify = sub.add_parser("verify", help="randomized closed-form vs oracle agreement suite")
    verify.add_argument("--trials", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=7)
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=_cmd_verify)

    figures = sub.add_parser("figures", help="emit the four canonical sweep CSVs")
    figures.add_argument("--out-dir", default="figures")
    figures.add_argument("--alpha-steps", type=int, default=200)
    figures.add_argument("--s-steps", type=int, default=100)
    figures.set_defaults(func=_cmd_figures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
