import io
import math

import pytest

from sandwich_games.equilibrium import Nash, classify_nash
from sandwich_games.market import MarketConfig
from sandwich_games.sweep import (
    CSV_HEADER,
    ConfigError,
    GridSpec,
    SweepSpec,
    canonical_figures,
    load_spec,
    run_point,
    run_sweep,
    spec_from_mapping,
    write_sweep_csv,
)
from sandwich_games.traders import TraderParams, min_alpha_pool_n, min_alpha_pool_w


def small_spec(**overrides):
    base = dict(
        x=5e6,
        y=5e6,
        fee=0.003,
        alpha=GridSpec(0.01, 0.2, 8),
        s=GridSpec(0.005, 0.1, 5),
        omegas=(0.01,),
    )
    base.update(overrides)
    return SweepSpec(**base)


class TestGrid:
    def test_single_step_grid_is_the_low_endpoint(self):
        assert GridSpec(0.25, 0.9, 1).values() == [0.25]

    def test_grid_includes_both_endpoints(self):
        values = GridSpec(0.1, 0.5, 5).values()
        assert values[0] == 0.1 and values[-1] == 0.5
        assert len(values) == 5

    def test_grid_validation_names_the_field(self):
        with pytest.raises(ConfigError, match="alpha.min"):
            GridSpec(0.0, 1.0, 3).validate("alpha")
        with pytest.raises(ConfigError, match="s.max"):
            GridSpec(0.5, 0.1, 3).validate("s")
        with pytest.raises(ConfigError, match="alpha.steps"):
            GridSpec(0.1, 0.5, 0).validate("alpha")


class TestSweep:
    def test_single_cell_matches_direct_classification(self):
        spec = small_spec(alpha=GridSpec(0.05, 0.05, 1), s=GridSpec(0.01, 0.01, 1))
        (record,) = list(run_sweep(spec))
        verdict = classify_nash(
            MarketConfig(5e6, 5e6, 0.003, p=0.0, omega=0.01), TraderParams(0.05, 0.01)
        )
        assert record.nash is verdict.nash
        assert record.f0 == verdict.fee_at_p0
        assert record.f1 == verdict.fee_at_p1
        assert record.grad_f == verdict.grad_f

    def test_record_count_is_the_grid_product(self):
        spec = small_spec(omegas=(0.01, 0.1))
        records = list(run_sweep(spec))
        assert len(records) == 8 * 5 * 2

    def test_rows_follow_omega_alpha_s_nesting(self):
        spec = small_spec(alpha=GridSpec(0.05, 0.1, 2), s=GridSpec(0.01, 0.02, 2), omegas=(0.0, 1.0))
        keys = [(r.omega, r.alpha, r.s) for r in run_sweep(spec)]
        assert keys == sorted(keys)

    def test_pure_sophisticated_flow_lands_in_the_protected_pool(self):
        spec = small_spec(omegas=(0.0,))
        for record in run_sweep(spec):
            if max(record.f0, record.f1) > 0.0:
                assert record.nash is Nash.POOL_N

    def test_labels_agree_with_gradient_signs(self):
        for record in run_sweep(small_spec(omegas=(0.05,))):
            if record.nash is Nash.ALL:
                assert record.grad_f == pytest.approx(0.0, abs=1e-9)
            else:
                assert (record.nash is Nash.POOL_N) == (record.grad_f > 0.0)
                assert math.copysign(1.0, record.delta_f) == math.copysign(1.0, record.grad_f)

    def test_identical_specs_produce_identical_bytes(self):
        spec = small_spec()
        first, second = io.StringIO(), io.StringIO()
        write_sweep_csv(run_sweep(spec), first)
        write_sweep_csv(run_sweep(spec), second)
        assert first.getvalue() == second.getvalue()

    def test_csv_schema_and_infinity_sentinel(self):
        # Pure sophisticated flow between the participation bounds collects
        # nothing at the unprotected corner: the relative gradient is infinite
        # and flagged as clamped.
        alpha = 0.5 * (min_alpha_pool_n(0.003) + min_alpha_pool_w(0.003, 0.01))
        spec = small_spec(
            alpha=GridSpec(alpha, alpha, 1), s=GridSpec(0.01, 0.01, 1), omegas=(0.0,)
        )
        out = io.StringIO()
        count = write_sweep_csv(run_sweep(spec), out)
        lines = out.getvalue().strip().splitlines()
        assert count == 1
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert len(fields) == len(CSV_HEADER.split(","))
        assert fields[6] == "inf"
        assert fields[7] == "true"
        assert fields[8] == "PoolN"

    def test_two_point_sweep_uses_the_heterogeneous_verdict(self):
        spec = small_spec(
            alpha=GridSpec(0.05, 0.05, 1), s=GridSpec(0.01, 0.01, 1), two_point_k=3.0
        )
        (record,) = list(run_sweep(spec))
        from sandwich_games.equilibrium import AlphaDistribution, classify_nash_heterogeneous

        verdict = classify_nash_heterogeneous(
            MarketConfig(5e6, 5e6, 0.003, p=0.0, omega=0.01),
            AlphaDistribution.two_point(0.05, 3.0),
            0.01,
        )
        assert record.f0 == verdict.fee_at_p0
        assert record.nash is verdict.nash


class TestPointReport:
    def test_corner_fees_match_the_sweep_at_the_same_coordinate(self):
        spec = small_spec(alpha=GridSpec(0.05, 0.05, 1), s=GridSpec(0.01, 0.01, 1))
        (record,) = list(run_sweep(spec))
        report = run_point(
            MarketConfig(5e6, 5e6, 0.003, p=0.5, omega=0.01), TraderParams(0.05, 0.01)
        )
        assert report.verdict.fee_at_p0 == record.f0
        assert report.verdict.fee_at_p1 == record.f1

    def test_oracle_agreement_is_reported(self):
        report = run_point(
            MarketConfig(5e6, 5e6, 0.003, p=0.5, omega=0.01), TraderParams(0.05, 0.01)
        )
        assert report.replay_matches_constructive
        assert report.exact_arb_price_residual <= 1e-12
        assert report.paper_arb_price_residual > 0.0

    def test_no_trading_point_reports_zeros(self):
        report = run_point(
            MarketConfig(5e6, 5e6, 0.003, p=0.5, omega=0.01), TraderParams(0.002, 0.01)
        )
        assert report.constructive.total == 0.0
        assert report.replay_total == 0.0
        assert report.plan_soph.input_n == 0.0
        assert report.verdict.nash is Nash.ALL

    def test_epsilon_verdicts_follow_the_relative_gradient(self):
        market = MarketConfig(5e6, 5e6, 0.003, p=0.0, omega=0.0)
        report = run_point(market, TraderParams(0.05, 0.01), epsilons=(1e-5, 0.5))
        tight, loose = report.epsilon_verdicts
        assert not tight.holds_for_all_distributions
        assert loose.holds_for_all_distributions
        # This provider sits at the poor corner, so the tight epsilon moves it.
        assert not tight.holds_at_market_p
        assert loose.holds_at_market_p


class TestConfig:
    def test_mapping_roundtrip(self):
        spec = spec_from_mapping(
            {
                "market": {"x": 5e6, "y": 5e6, "fee": 0.003},
                "alpha": {"min": 0.01, "max": 0.2, "steps": 10},
                "s": {"min": 0.005, "max": 0.1, "steps": 4},
                "omega": [0.01, 0.1],
                "epsilon": 0.02,
                "distribution": {"k": 10},
            }
        )
        assert spec.omegas == (0.01, 0.1)
        assert spec.epsilons == (0.02,)
        assert spec.two_point_k == 10.0
        assert spec.alpha.steps == 10

    def test_errors_carry_field_paths(self):
        good = {
            "market": {"x": 5e6, "y": 5e6, "fee": 0.003},
            "alpha": {"min": 0.01, "max": 0.2, "steps": 10},
            "s": {"min": 0.005, "max": 0.1, "steps": 4},
            "omega": 0.01,
        }
        with pytest.raises(ConfigError, match="market.fee"):
            bad = {**good, "market": {"x": 5e6, "y": 5e6, "fee": 2.0}}
            spec_from_mapping(bad)
        with pytest.raises(ConfigError, match="alpha"):
            bad = {**good, "alpha": {"min": 0.01, "max": 0.2}}
            spec_from_mapping(bad)
        with pytest.raises(ConfigError, match="omega"):
            bad = {**good, "omega": [0.5, 1.5]}
            spec_from_mapping(bad)
        with pytest.raises(ConfigError, match="market"):
            spec_from_mapping({"alpha": good["alpha"], "s": good["s"]})

    def test_load_spec_from_toml(self, tmp_path):
        path = tmp_path / "sweep.toml"
        path.write_text(
            "\n".join(
                (
                    "omega = [0.01]",
                    "[market]",
                    "x = 5e6",
                    "y = 5e6",
                    "fee = 0.003",
                    "[alpha]",
                    "min = 0.01",
                    "max = 0.2",
                    "steps = 6",
                    "[s]",
                    "min = 0.005",
                    "max = 0.1",
                    "steps = 3",
                )
            )
        )
        spec = load_spec(str(path))
        assert spec.alpha.steps == 6
        assert spec.omegas == (0.01,)

    def test_missing_file_is_a_config_error(self):
        with pytest.raises(ConfigError):
            load_spec("/nonexistent/sweep.toml")


def test_canonical_figures_cover_the_four_sweeps():
    figures = canonical_figures(alpha_steps=20, s_steps=10)
    assert set(figures) == {"fig2a", "fig2b", "appendix_k10", "appendix_k3"}
    assert figures["fig2a"].omegas == (0.01,)
    assert figures["fig2b"].omegas == (0.1,)
    assert figures["appendix_k10"].two_point_k == 10.0
    assert figures["appendix_k3"].two_point_k == 3.0
    for spec in figures.values():
        spec.validate()
