"""Tests for the command-line client."""

import json
import os
import subprocess
import sys

import pytest

from scalecap.cli import NumericFailure, _assert_finite, _fnum, _gnum, main
from scalecap.laws import amdahl_capacity, geometric_capacity

TPS_CSV = "p,throughput\n1,100\n2,180\n3,244\n"

FAST_SIM = [
    "--completions", "2000", "--warmup", "200", "--batches", "10",
]


@pytest.fixture
def tps_file(tmp_path):
    f = tmp_path / "tps.csv"
    f.write_text(TPS_CSV, encoding="utf-8")
    return str(f)


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFormatters:
    def test_gnum(self):
        assert _gnum(None) == "-"
        assert _gnum(True) == "True"
        assert _gnum(7) == "7"
        assert _gnum(0.123456789) == "0.123457"
        assert _gnum(4.0) == "4"

    def test_fnum(self):
        assert _fnum(None) == ""
        assert _fnum(False) == "False"
        assert _fnum(7) == "7"
        assert _fnum(2.5) == "2.5"
        assert float(_fnum(1.0 / 3.0)) == 1.0 / 3.0

    def test_assert_finite(self):
        _assert_finite({"a": [1.0, 2], "b": {"c": 0.5, "flag": True}})
        with pytest.raises(NumericFailure):
            _assert_finite({"a": [float("inf")]})
        with pytest.raises(NumericFailure):
            _assert_finite([{"x": float("nan")}])


class TestCurves:
    def test_default_csv(self, capsys):
        code, out, _ = run_cli(["curves", "--sigma", "0.5", "--p-max", "3"], capsys)
        assert code == 0
        assert out == (
            "# amdahl: sigma=0.5\n"
            "p,c_amdahl\n"
            "1,1.0\n"
            "2,1.3333333333333333\n"
            "3,1.5\n"
        )

    def test_matching_adds_mpf_column(self, capsys):
        code, out, _ = run_cli(
            ["curves", "--sigma", "0.25", "--matching", "asymptotic",
             "--p-max", "4"], capsys
        )
        assert code == 0
        lines = out.splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "p,c_amdahl,c_mpf"
        last = lines[-1].split(",")
        assert last[0] == "4"
        assert float(last[1]) == amdahl_capacity(0.25, 4)
        assert float(last[2]) == geometric_capacity(0.75, 4)

    def test_table_format(self, capsys):
        code, out, _ = run_cli(
            ["curves", "--sigma", "0.5", "--p-max", "2", "--table"], capsys
        )
        assert code == 0
        assert "c_amdahl" in out
        assert "1.33333" in out

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            ["curves", "--phi", "0.9", "--p-max", "2", "--json"], capsys
        )
        assert code == 0
        body = json.loads(out)
        assert body["columns"] == ["p", "c_mpf"]
        assert body["rows"][1] == [2, 1.9]

    def test_out_of_range_sigma(self, capsys):
        code, _, err = run_cli(["curves", "--sigma", "2"], capsys)
        assert code == 2
        assert err.startswith("error:")
        assert "sigma" in err

    def test_exclusive_format_flags(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["curves", "--sigma", "0.5", "--csv", "--json"])
        assert exc.value.code == 2


class TestFit:
    def test_table_ranking(self, tps_file, capsys):
        code, out, _ = run_cli(["fit", tps_file], capsys)
        assert code == 0
        assert out.splitlines()[0] == "rank 1: usl"
        assert "rank 2: mpf" in out
        assert "rank 3: amdahl" in out

    def test_single_model_json(self, tps_file, capsys):
        code, out, _ = run_cli(
            ["fit", tps_file, "--model", "amdahl", "--json"], capsys
        )
        assert code == 0
        body = json.loads(out)
        assert body["model"] == "amdahl"
        assert set(body) == {
            "model", "params", "sse", "r2", "asymptote", "points",
            "clamped", "baseline_x1", "predictions",
        }
        assert body["params"]["sigma"] == pytest.approx(313.0 / 2745.0, rel=1e-12)
        assert body["baseline_x1"] == 100.0

    def test_extrapolation_in_table(self, tps_file, capsys):
        code, out, _ = run_cli(
            ["fit", tps_file, "--extrapolate", "8", "32"], capsys
        )
        assert code == 0
        assert "divergence at p=32" in out

    def test_csv_format(self, tps_file, capsys):
        code, out, _ = run_cli(["fit", tps_file, "--csv"], capsys)
        assert code == 0
        lines = out.splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "model,p,measured,fitted"
        assert any(l.startswith("usl,1,") for l in lines)

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run_cli(["fit", str(tmp_path / "absent.csv")], capsys)
        assert code == 2
        assert err.startswith("error:")

    def test_bad_header(self, tmp_path, capsys):
        f = tmp_path / "bad.csv"
        f.write_text("procs,tps\n1,100\n", encoding="utf-8")
        code, _, err = run_cli(["fit", str(f)], capsys)
        assert code == 2
        assert "expected header" in err

    def test_underdetermined_single_model(self, tmp_path, capsys):
        f = tmp_path / "one.csv"
        f.write_text("p,throughput\n1,100\n", encoding="utf-8")
        code, _, err = run_cli(["fit", str(f), "--model", "amdahl"], capsys)
        assert code == 2
        assert "underdetermined" in err

    def test_numeric_failure_exit_code(self, tmp_path, capsys):
        # normalizing by a denormal baseline overflows the capacities
        f = tmp_path / "overflow.csv"
        f.write_text(
            "p,throughput\n1,1e-308\n2,1e10\n3,2e10\n", encoding="utf-8"
        )
        code, _, err = run_cli(["fit", str(f)], capsys)
        assert code == 3
        assert "numeric failure" in err


class TestRepairman:
    def test_sync_column_equals_capacity_law(self, capsys):
        code, out, _ = run_cli(
            ["repairman", "--d", "1", "--z", "1", "--p-max", "8"], capsys
        )
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        header = lines[0].split(",")
        i_sync = header.index("c_sync")
        i_amdahl = header.index("c_amdahl")
        for line in lines[1:]:
            fields = line.split(",")
            # bit-identical, so the repr strings match too
            assert fields[i_sync] == fields[i_amdahl]

    def test_exact_mode_columns(self, capsys):
        code, out, _ = run_cli(
            ["repairman", "--d", "0.5", "--z", "2", "--p-max", "2",
             "--mode", "exact"], capsys
        )
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines[0] == "p,x_exact,r_exact,q_exact,u_bus,u_proc"

    def test_rejects_bad_demand(self, capsys):
        code, _, err = run_cli(["repairman", "--d", "0", "--z", "1"], capsys)
        assert code == 2
        assert "d" in err


class TestCoxian:
    def test_default_csv(self, capsys):
        code, out, _ = run_cli(
            ["coxian", "--mu", "1", "--phi", "0.5", "--rho", "0.75",
             "--p-max", "3"], capsys
        )
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines[0] == "p,mean_s,scv,u,r"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[0] == "1"
        assert float(first[1]) == 1.0
        assert float(first[2]) == 1.0

    def test_rejects_full_load(self, capsys):
        code, _, err = run_cli(
            ["coxian", "--mu", "1", "--phi", "0.5", "--rho", "1"], capsys
        )
        assert code == 2
        assert "rho" in err


class TestSimulate:
    def test_repairman_csv(self, capsys):
        code, out, _ = run_cli(
            ["simulate", "repairman", "--p", "2", "--d", "1", "--z", "1",
             "--seed", "5", *FAST_SIM, "--csv"], capsys
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# scenario: repairman (throughput)"
        assert lines[1] == "seed,mean,half_width,samples,analytic,verdict"
        row = lines[2].split(",")
        assert row[0] == "5"
        assert row[3] == "2000"
        assert float(row[4]) == pytest.approx(0.8, rel=1e-12)
        assert row[5] in ("PASS", "FAIL")

    def test_repeat_derives_seeds(self, capsys):
        code, out, _ = run_cli(
            ["simulate", "mg1", "--rate", "0.3", "--mu", "1", "--phi", "0",
             "--stages", "1", "--seed", "11", "--repeat", "3",
             *FAST_SIM, "--csv"], capsys
        )
        assert code == 0
        rows = [l.split(",") for l in out.splitlines()[2:]]
        assert [r[0] for r in rows] == ["11", "12", "13"]
        assert len({r[1] for r in rows}) == 3

    def test_default_seed(self, capsys, monkeypatch):
        monkeypatch.delenv("SCALECAP_SEED", raising=False)
        code, out, _ = run_cli(
            ["simulate", "mg1", "--rate", "0.3", "--mu", "1", "--phi", "0",
             "--stages", "1", *FAST_SIM, "--csv"], capsys
        )
        assert code == 0
        assert out.splitlines()[2].split(",")[0] == "42"

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SCALECAP_SEED", "99")
        code, out, _ = run_cli(
            ["simulate", "mg1", "--rate", "0.3", "--mu", "1", "--phi", "0",
             "--stages", "1", *FAST_SIM, "--csv"], capsys
        )
        assert code == 0
        assert out.splitlines()[2].split(",")[0] == "99"

    def test_flag_overrides_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SCALECAP_SEED", "99")
        code, out, _ = run_cli(
            ["simulate", "mg1", "--rate", "0.3", "--mu", "1", "--phi", "0",
             "--stages", "1", "--seed", "7", *FAST_SIM, "--csv"], capsys
        )
        assert code == 0
        assert out.splitlines()[2].split(",")[0] == "7"

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SCALECAP_SEED", "not-a-number")
        code, _, err = run_cli(
            ["simulate", "mg1", "--rate", "0.3", "--mu", "1", "--phi", "0",
             "--stages", "1", *FAST_SIM], capsys
        )
        assert code == 2
        assert "SCALECAP_SEED" in err

    def test_unstable_exit(self, capsys):
        code, _, err = run_cli(
            ["simulate", "mg1", "--rate", "2", "--mu", "1", "--phi", "0",
             "--stages", "1", *FAST_SIM], capsys
        )
        assert code == 2
        assert "unstable" in err

    def test_byte_determinism(self, capsys):
        argv = ["simulate", "repairman", "--p", "2", "--d", "1", "--z", "1",
                "--seed", "3", *FAST_SIM, "--csv"]
        code1, out1, _ = run_cli(argv, capsys)
        code2, out2, _ = run_cli(argv, capsys)
        assert code1 == code2 == 0
        assert out1 == out2


class TestMatch:
    def test_table(self, capsys):
        code, out, _ = run_cli(
            ["match", "--sigma", "0.25", "--mode", "leading"], capsys
        )
        assert code == 0
        assert "phi = 0.6" in out
        assert "capacity at p=2: amdahl 1.6, mpf 1.6" in out

    def test_csv(self, capsys):
        code, out, _ = run_cli(
            ["match", "--sigma", "0.25", "--mode", "asymptotic", "--csv"], capsys
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == (
            "mode,sigma,phi,amdahl_asymptote,mpf_asymptote,amdahl_c2,mpf_c2"
        )
        row = lines[1].split(",")
        assert row[0] == "asymptotic"
        assert float(row[2]) == 0.75
        assert float(row[3]) == 4.0

    def test_unbounded_fields_empty_in_csv(self, capsys):
        code, out, _ = run_cli(
            ["match", "--sigma", "0", "--mode", "leading", "--csv"], capsys
        )
        assert code == 0
        row = out.splitlines()[1].split(",")
        assert row[3] == ""   # no Amdahl ceiling at sigma = 0
        assert row[4] == ""

    def test_asymptotic_rejects_boundary(self, capsys):
        code, _, err = run_cli(
            ["match", "--sigma", "0", "--mode", "asymptotic"], capsys
        )
        assert code == 2
        assert "0 < sigma < 1" in err


class TestRoundTrip:
    def test_curves_output_refits(self, tmp_path, capsys):
        # tabulate an MPF curve, relabel the value column as throughput,
        # and recover phi from the fit
        code, out, _ = run_cli(
            ["curves", "--phi", "0.85", "--p-max", "8", "--csv"], capsys
        )
        assert code == 0
        text = out.replace("p,c_mpf", "p,throughput")
        f = tmp_path / "curve.csv"
        f.write_text(text, encoding="utf-8")
        code, out, _ = run_cli(
            ["fit", str(f), "--model", "mpf", "--json"], capsys
        )
        assert code == 0
        body = json.loads(out)
        assert abs(body["params"]["phi"] - 0.85) <= 1e-6


class TestTopLevel:
    def test_help(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        assert "scalecap" in capsys.readouterr().out

    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_server_connection_refused(self, capsys):
        code, _, err = run_cli(
            ["--server", "http://127.0.0.1:9", "match", "--sigma", "0.5",
             "--mode", "leading"], capsys
        )
        assert code == 2
        assert "failed" in err


class TestSubprocess:
    CMD = [sys.executable, "-m", "scalecap"]

    def test_module_invocation(self):
        out = subprocess.run(
            self.CMD + ["curves", "--sigma", "0.5", "--p-max", "3"],
            capture_output=True, text=True, check=True,
        )
        assert out.stdout == (
            "# amdahl: sigma=0.5\n"
            "p,c_amdahl\n"
            "1,1.0\n"
            "2,1.3333333333333333\n"
            "3,1.5\n"
        )

    def test_env_seed_subprocess(self):
        env = {**os.environ, "SCALECAP_SEED": "99"}
        out = subprocess.run(
            self.CMD + ["simulate", "mg1", "--rate", "0.3", "--mu", "1",
                        "--phi", "0", "--stages", "1", *FAST_SIM, "--csv"],
            capture_output=True, text=True, check=True, env=env,
        )
        assert out.stdout.splitlines()[2].split(",")[0] == "99"

    def test_byte_determinism_across_processes(self):
        argv = self.CMD + ["simulate", "repairman", "--p", "2", "--d", "1",
                           "--z", "1", "--seed", "3", *FAST_SIM, "--csv"]
        a = subprocess.run(argv, capture_output=True, check=True)
        b = subprocess.run(argv, capture_output=True, check=True)
        assert a.stdout == b.stdout
