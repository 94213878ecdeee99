"""Command-line front end tests: artifact writing, overrides,
determinism, and the printed rate/validation reports."""

import json
import math

import numpy as np
import pytest

from ddls.cli import build_parser, main
from ddls.codec import codebook_from_json
from ddls.core import ChargeCode
from ddls.simkit import ScenarioConfig, save_scenario


def tiny_config(**overrides):
    base = dict(
        seed=7,
        interval_s=900.0,
        horizon_epochs=10,
        codebook=(ChargeCode(1, (2.0,)), ChargeCode(2, (1.0, 1.0))),
        arrival_rates_per_hour=4.0,
        zic_kw=4.0,
        price_up=1.0,
        price_dn=1.0,
        delay_prices=0.05,
        lookahead=4,
        deadline_epochs=4,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def write_config(tmp_path, name="scenario.json", **overrides):
    path = tmp_path / name
    save_scenario(tiny_config(**overrides), path)
    return path


def parsed_stdout(capsys) -> dict:
    pairs = {}
    for line in capsys.readouterr().out.splitlines():
        parts = line.split()
        if len(parts) == 2:
            pairs[parts[0]] = parts[1]
    return pairs


class TestParsing:
    def test_help_documents_every_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["run", "--help"])
        assert err.value.code == 0
        out = capsys.readouterr().out
        for flag in ("--config", "--out", "--seed", "--strategy",
                     "--schedulers", "--lookahead"):
            assert flag in out

    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args([])
        assert err.value.code != 0

    def test_config_flag_required(self):
        with pytest.raises(SystemExit) as err:
            main(["run"])
        assert err.value.code != 0


class TestRun:
    def test_writes_artifacts_and_reports(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out = tmp_path / "out"
        rc = main(["run", "--config", str(config), "--out", str(out)])
        assert rc == 0
        for name in ("metrics.csv", "trajectory.csv", "feedback.csv"):
            assert (out / name).exists()
        report = parsed_stdout(capsys)
        assert report["strategy"] == "ddls"
        assert float(report["total_cost"]) >= 0.0
        assert int(report["served"]) > 0

    def test_missing_config_file_fails_with_diagnostic(self, tmp_path, capsys):
        rc = main(["run", "--config", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_json_fails_with_diagnostic(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        rc = main(["run", "--config", str(path), "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "not valid JSON" in capsys.readouterr().err

    def test_same_seed_gives_byte_identical_csvs(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out1 = tmp_path / "first"
        out2 = tmp_path / "second"
        assert main(["run", "--config", str(config), "--out", str(out1)]) == 0
        assert main(["run", "--config", str(config), "--out", str(out2)]) == 0
        for name in ("metrics.csv", "trajectory.csv", "feedback.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_seed_override_changes_the_draw(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        assert main(["run", "--config", str(config), "--out", str(out1),
                     "--seed", "1"]) == 0
        assert main(["run", "--config", str(config), "--out", str(out2),
                     "--seed", "2"]) == 0
        assert (out1 / "metrics.csv").read_text() != (out2 / "metrics.csv").read_text()

    def test_strategy_override(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out = tmp_path / "out"
        rc = main(["run", "--config", str(config), "--out", str(out),
                   "--strategy", "uncontrolled"])
        assert rc == 0
        first_row = (out / "metrics.csv").read_text().splitlines()[1]
        assert first_row.startswith("uncontrolled,")


class TestCompare:
    def test_writes_summary_for_all_strategies(self, tmp_path, capsys):
        config = write_config(tmp_path, n_schedulers=2)
        out = tmp_path / "out"
        rc = main(["compare", "--config", str(config), "--out", str(out)])
        assert rc == 0
        lines = (out / "summary.csv").read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].startswith("strategy,total_cost,cost_savings_vs_uncontrolled")
        assert (out / "metrics.csv").exists()
        assert "strategy" in capsys.readouterr().out

    def test_strategy_subset(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out = tmp_path / "out"
        rc = main(["compare", "--config", str(config), "--out", str(out),
                   "--strategies", "uncontrolled,ddls"])
        assert rc == 0
        lines = (out / "summary.csv").read_text().splitlines()
        assert len(lines) == 3
        uncontrolled = lines[1].split(",")
        assert uncontrolled[0] == "uncontrolled"
        assert float(uncontrolled[2]) == 0.0

    def test_unknown_strategy_rejected(self, tmp_path, capsys):
        config = write_config(tmp_path)
        rc = main(["compare", "--config", str(config), "--out", str(tmp_path / "o"),
                   "--strategies", "magic"])
        assert rc == 1
        assert "unknown strategies" in capsys.readouterr().err


class TestCodebook:
    def test_exports_json_and_prints_table(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out = tmp_path / "out"
        rc = main(["codebook", "--config", str(config), "--out", str(out)])
        assert rc == 0
        quantizer = codebook_from_json(out / "codebook.json")
        assert quantizer.n_codes == 2
        assert "id rate_kw duration_epochs" in capsys.readouterr().out


class TestRates:
    def test_reproduces_hand_computed_budget(self, tmp_path, capsys):
        # 32 codes at 1.5 arrivals/hour each and 15-minute epochs give 12
        # expected arrivals per interval; with a 16-slot arrival window the
        # per-home rate is 12 * log2(16 * 32) / 900 = 0.12 bit/s.
        codebook = tuple(ChargeCode(i, (1.0,)) for i in range(1, 33))
        config = write_config(
            tmp_path,
            codebook=codebook,
            arrival_rates_per_hour=1.5,
            delay_prices=0.05,
            deadline_epochs=4,
            lookahead=4,
        )
        rc = main(["rates", "--config", str(config), "--out", str(tmp_path / "o"),
                   "--window", "16"])
        assert rc == 0
        report = parsed_stdout(capsys)
        assert float(report["arrivals_per_interval"]) == pytest.approx(12.0)
        assert float(report["uplink_hems_bit_per_s"]) == pytest.approx(0.12, rel=1e-6)
        expected_cems = 16.0 * math.log2(2.0 * math.pi * math.e * 12.0)
        assert float(report["uplink_cems_bits_per_interval"]) == pytest.approx(
            expected_cems, rel=1e-6)
        assert float(report["feedback_bit_per_s"]) >= 0.0

    def test_single_code_window_one_needs_no_bits(self, tmp_path, capsys):
        config = write_config(
            tmp_path,
            codebook=(ChargeCode(1, (1.0,)),),
            deadline_epochs=4,
        )
        rc = main(["rates", "--config", str(config), "--out", str(tmp_path / "o"),
                   "--window", "1"])
        assert rc == 0
        assert float(parsed_stdout(capsys)["uplink_hems_bit_per_s"]) == 0.0

    def test_rate_is_linear_in_arrival_intensity(self, tmp_path, capsys):
        low = write_config(tmp_path, "low.json", arrival_rates_per_hour=2.0)
        high = write_config(tmp_path, "high.json", arrival_rates_per_hour=4.0)
        assert main(["rates", "--config", str(low), "--out", str(tmp_path / "o")]) == 0
        low_rate = float(parsed_stdout(capsys)["uplink_hems_bit_per_s"])
        assert main(["rates", "--config", str(high), "--out", str(tmp_path / "o")]) == 0
        high_rate = float(parsed_stdout(capsys)["uplink_hems_bit_per_s"])
        assert high_rate == pytest.approx(2.0 * low_rate, rel=1e-6)


class TestValidate:
    def test_valid_config_prints_ok(self, tmp_path, capsys):
        config = write_config(tmp_path)
        rc = main(["validate", "--config", str(config), "--out", str(tmp_path / "o")])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_short_deadline_reported(self, tmp_path, capsys):
        raw = tiny_config().to_dict()
        raw["deadline_epochs"] = 1
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(raw))
        rc = main(["validate", "--config", str(path), "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "deadline" in capsys.readouterr().err

    def test_negative_price_reported(self, tmp_path, capsys):
        raw = tiny_config().to_dict()
        raw["price_up"] = -1.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(raw))
        rc = main(["validate", "--config", str(path), "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "price" in capsys.readouterr().err

    def test_override_is_validated_too(self, tmp_path, capsys):
        config = write_config(tmp_path)
        rc = main(["validate", "--config", str(config), "--out", str(tmp_path / "o"),
                   "--lookahead", "1"])
        assert rc == 1
        assert "lookahead" in capsys.readouterr().err
