import csv
import io
import json
import math

import pytest

from phasebell.cli import main

# Frozen closed-form values (direct evaluation; see test_correlations).
E_HF_HALF_ZETA_T0_T2 = 0.221257163499216
PI_CLOSED_HALF_ZETA = 1.558932783583142
SPIN_CLOSED_HALF_ZETA = 2.513981430628296


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows, f"no rows in output: {text!r}"
    return rows


class TestScanCorrelator:
    def test_vacuum_grid_all_zero(self, capsys):
        code, out = run_cli(
            capsys, "scan-correlator", "--hamiltonian", "h0", "--zeta", "0",
            "--theta-grid", "0:2:3", "--samples", "20000",
        )
        rows = parse_csv(out)
        assert code == 0
        assert len(rows) == 3
        for row in rows:
            assert float(row["e_closed"]) == 0.0
            assert row["ok"] == "true"

    def test_free_family_frozen_value(self, capsys):
        code, out = run_cli(
            capsys, "scan-correlator", "--hamiltonian", "hf", "--zeta", "0.5",
            "--theta-grid", "0:2:3", "--samples", "20000",
        )
        rows = parse_csv(out)
        assert code == 0
        assert len(rows) == 9
        target = [r for r in rows if r["t1"] == "0" and r["t2"] == "2"]
        assert float(target[0]["e_closed"]) == pytest.approx(
            E_HF_HALF_ZETA_T0_T2, abs=1e-11
        )

    def test_epr_limit_mixed_probability_column(self, capsys):
        code, out = run_cli(
            capsys, "scan-correlator", "--hamiltonian", "h0",
            "--tau", str(1.0 - 1e-12), "--theta-grid", "0.3:0.3:1",
            "--samples", "20000",
        )
        rows = parse_csv(out)
        assert code == 0
        assert float(rows[0]["p_pm"]) == pytest.approx(
            0.3 / (2.0 * math.pi), abs=1e-5
        )

    def test_flip_sign_convention_fails_loudly(self, capsys):
        code, out = run_cli(
            capsys, "scan-correlator", "--hamiltonian", "h0", "--zeta", "0.5",
            "--theta-grid", "0:0:1", "--samples", "20000",
            "--flip-sign-convention",
        )
        rows = parse_csv(out)
        assert code == 1
        assert float(rows[0]["e_orthant"]) == pytest.approx(
            -float(rows[0]["e_closed"]), abs=1e-9
        )


class TestChshScan:
    def test_single_zeta_columns(self, capsys):
        code, out = run_cli(capsys, "chsh-scan", "--zeta", "0.5")
        rows = parse_csv(out)
        assert code == 0
        row = rows[0]
        assert float(row["pi_closed"]) == pytest.approx(PI_CLOSED_HALF_ZETA, abs=1e-9)
        assert float(row["spin_closed"]) == pytest.approx(
            SPIN_CLOSED_HALF_ZETA, abs=1e-9
        )
        assert float(row["h0_optimum"]) <= 2.0 + 1e-9
        assert float(row["hf_optimum"]) <= 2.0 + 1e-9

    def test_vacuum_no_violation(self, capsys):
        code, out = run_cli(capsys, "chsh-scan", "--zeta", "0")
        rows = parse_csv(out)
        assert code == 0
        for key in ("h0_optimum", "hf_optimum", "spin_fock", "pi_fock"):
            assert float(rows[0][key]) <= 2.0 + 1e-9

    def test_untrusted_truncation_is_ungated(self, capsys):
        # a large squeeze with a small basis reports but does not gate
        code, out = run_cli(capsys, "chsh-scan", "--zeta", "2.9", "--fock-n", "64")
        rows = parse_csv(out)
        assert code == 0
        assert rows[0]["gated"] == "false"


class TestClassify:
    def test_catalog_table(self, capsys):
        code, out = run_cli(capsys, "classify")
        rows = parse_csv(out)
        assert code == 0
        verdicts = {row["kind"]: row["proper"] for row in rows}
        assert verdicts == {
            "sign-linear": "true",
            "func-linear": "true",
            "parity-z": "false",
            "parity-y-singular": "false",
            "quadratic-ho": "false",
        }
        parity_row = [r for r in rows if r["kind"] == "parity-z"][0]
        assert "delta" in parity_row["reason"]


class TestNegativity:
    def test_witness_found(self, capsys):
        code, out = run_cli(
            capsys, "negativity", "--zeta", "0.5",
            "--theta-grid", f"0:{math.pi / 4}:2", "--grid-points", "13",
        )
        rows = parse_csv(out)
        assert code == 0
        assert rows[0]["negative"] == "false"
        assert float(rows[0]["min_value"]) >= 0.0
        assert rows[1]["negative"] == "true"
        assert float(rows[1]["min_value"]) < 0.0

    def test_no_negativity_branch(self, capsys):
        code, out = run_cli(
            capsys, "negativity", "--zeta", "0.5", "--theta-grid", "0:0:1",
            "--grid-points", "9",
        )
        assert code == 1

    def test_pure_gaussian_again_at_right_angle(self, capsys):
        code, _ = run_cli(
            capsys, "negativity", "--zeta", "0.5",
            "--theta-grid", f"{math.pi / 2}:{math.pi / 2}:1", "--grid-points", "9",
        )
        assert code == 1


class TestFockVerify:
    def test_default_grid_gates_pass(self, capsys):
        code, out = run_cli(capsys, "fock-verify", "--theta-grid", "0:1:3")
        rows = parse_csv(out)
        assert code == 0
        for row in rows:
            assert row["ok"] == "true"
            assert float(row["f_error"]) <= 1e-8


class TestOutputFormats:
    def test_json_round_trip(self, capsys):
        code, out = run_cli(capsys, "classify", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert isinstance(rows, list) and rows[0]["kind"] == "sign-linear"
        assert isinstance(rows[0]["proper"], bool)

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "table.csv"
        code, out = run_cli(capsys, "classify", "--out", str(path))
        assert code == 0
        assert out == ""
        raw = path.read_bytes()
        assert raw.startswith(b"kind,")
        assert b"\r\n" in raw

    def test_byte_stability(self, capsys):
        _, first = run_cli(
            capsys, "scan-correlator", "--zeta", "0.3", "--theta-grid", "0:1:2",
            "--samples", "20000", "--seed", "11",
        )
        _, second = run_cli(
            capsys, "scan-correlator", "--zeta", "0.3", "--theta-grid", "0:1:2",
            "--samples", "20000", "--seed", "11",
        )
        assert first == second

    def test_twelve_significant_digits(self, capsys):
        _, out = run_cli(capsys, "chsh-scan", "--zeta", "0.5")
        row = parse_csv(out)[0]
        assert row["pi_closed"] == "1.55893278358"


class TestConfigPrecedence:
    def test_file_supplies_defaults_and_flags_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("zeta = 0.5\nsamples = 20000\n# comment\nformat = json\n")
        code, out = run_cli(
            capsys, "scan-correlator", "--config", str(cfg),
            "--theta-grid", "0:0:1", "--zeta", "0",
        )
        rows = json.loads(out)
        assert code == 0
        assert rows[0]["zeta"] == 0.0  # flag wins over file
        assert rows[0]["e_closed"] == 0.0


class TestUsageErrors:
    def test_both_squeeze_flags(self, capsys):
        code, _ = run_cli(capsys, "scan-correlator", "--zeta", "1", "--tau", "0.5")
        assert code == 2

    def test_bad_grid(self, capsys):
        code, _ = run_cli(capsys, "scan-correlator", "--theta-grid", "nope")
        assert code == 2

    def test_too_few_samples(self, capsys):
        code, _ = run_cli(capsys, "scan-correlator", "--samples", "10")
        assert code == 2

    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["no-such-command"])
        assert err.value.code == 2


class TestReproduceAll:
    def test_small_budget_suite_passes(self, capsys):
        code, out = run_cli(
            capsys, "reproduce-all", "--samples", "100000", "--format", "json",
        )
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith(("[PASS]", "[FAIL]"))]
        assert len(lines) == 12
        assert all(l.startswith("[PASS]") for l in lines)
