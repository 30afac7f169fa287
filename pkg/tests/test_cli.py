import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ptrobin import Grid, GridFunction, MetricConfig, apply_closed, grid_function_to_dict
from ptrobin.cli import main

from .oracles import bisection_roots

D = math.pi


def run_cli(*argv) -> int:
    return main(list(argv))


def write_function_file(tmp_path, n=64, seed=11, name="f.json"):
    rng = np.random.default_rng(seed)
    grid = Grid(D, n)
    f = GridFunction(grid, rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
    path = tmp_path / name
    path.write_text(json.dumps(grid_function_to_dict(f)))
    return f, path


def parse_csv(text: str):
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestSpectrumCommand:
    def test_neumann_levels_with_rounded_interval(self, tmp_path, capsys):
        code = run_cli(
            "spectrum", "--alpha", "0", "--d", "3.14159265358979", "--jmax", "3"
        )
        assert code == 0
        header, rows = parse_csv(capsys.readouterr().out)
        assert header == ["j", "re_k2", "im_k2", "residual"]
        levels = [float(r[1]) for r in rows]
        assert levels == pytest.approx([0.0, 1.0, 4.0, 9.0], abs=1e-10)

    def test_pi_literal_gives_exact_integer_levels(self, capsys):
        code = run_cli("spectrum", "--alpha", "0", "--d", "pi", "--jmax", "2")
        assert code == 0
        _, rows = parse_csv(capsys.readouterr().out)
        assert float(rows[1][1]) == 1.0
        assert float(rows[2][1]) == 4.0

    def test_shifted_ground_level(self, capsys):
        code = run_cli("spectrum", "--alpha", "0.5", "--d", "pi", "--jmax", "2")
        assert code == 0
        _, rows = parse_csv(capsys.readouterr().out)
        assert float(rows[0][1]) == pytest.approx(0.25, rel=1e-14)

    def test_real_robin_roots_match_oracle(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = run_cli(
            "spectrum", "--alpha", "0", "--beta", "1", "--d", "pi", "--kmax", "6", "--out", str(out)
        )
        assert code == 0
        _, rows = parse_csv(out.read_text())

        def f(k):
            return (k * k - 1.0) * math.sin(k * D) - 2.0 * k * math.cos(k * D)

        oracle = bisection_roots(f, 1e-9, 6.0)
        got = sorted(float(r[1]) for r in rows)
        assert np.allclose(got, [k * k for k in oracle], atol=1e-9)

    def test_json_format(self, capsys):
        code = run_cli("spectrum", "--alpha", "0.5", "--d", "pi", "--jmax", "1", "--format", "json")
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["mode"] == "closed-form"


class TestMetricApplyCommand:
    def test_identity_at_zero_coupling(self, tmp_path):
        f, path = write_function_file(tmp_path)
        out = tmp_path / "image.json"
        code = run_cli("metric", "apply", "--alpha", "0", "--in", str(path), "--out", str(out))
        assert code == 0
        image = json.loads(out.read_text())
        got = np.array([complex(re, im) for re, im in image["values"]])
        assert np.max(np.abs(got - f.values)) < 1e-12

    def test_output_matches_library_to_full_precision(self, tmp_path):
        f, path = write_function_file(tmp_path)
        out = tmp_path / "image.json"
        code = run_cli("metric", "apply", "--alpha", "0.5", "--in", str(path), "--out", str(out))
        assert code == 0
        image = json.loads(out.read_text())
        got = np.array([complex(re, im) for re, im in image["values"]])
        expected = apply_closed(f, MetricConfig(alpha=0.5, d=D))
        assert np.array_equal(got, expected.values)

    def test_zero_input_gives_zero_output(self, tmp_path):
        grid = Grid(D, 16)
        path = tmp_path / "zero.json"
        path.write_text(json.dumps(grid_function_to_dict(GridFunction.constant(grid, 0.0))))
        out = tmp_path / "imz.json"
        code = run_cli("metric", "apply", "--alpha", "0.5", "--in", str(path), "--out", str(out))
        assert code == 0
        image = json.loads(out.read_text())
        assert all(re == 0.0 and im == 0.0 for re, im in image["values"])

    def test_interval_mismatch_exits_2(self, tmp_path, capsys):
        _, path = write_function_file(tmp_path)
        code = run_cli("metric", "apply", "--alpha", "0.5", "--d", "1.0", "--in", str(path))
        assert code == 2

    def test_degenerate_series_exits_3(self, tmp_path):
        _, path = write_function_file(tmp_path)
        code = run_cli(
            "metric", "apply", "--alpha", "1.0", "--method", "series", "--in", str(path)
        )
        assert code == 3

    def test_missing_input_exits_2(self, tmp_path):
        code = run_cli("metric", "apply", "--alpha", "0.5", "--in", str(tmp_path / "nope.json"))
        assert code == 2


class TestVerifyCommand:
    def test_small_suite_exit_zero(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(
            "verify",
            "--alpha", "0.5", "--d", "pi", "--n", "512", "--jmax", "8",
            "--suite", "forms", "--seed", "5", "--format", "json", "--out", str(out),
        )
        assert code == 0
        body = json.loads(out.read_text())
        assert body["summary"]["all_passed"] is True

    def test_degenerate_alpha_informational_exit_zero(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(
            "verify",
            "--alpha", "1", "--d", "pi", "--n", "512", "--jmax", "8",
            "--suite", "forms", "--format", "json", "--out", str(out),
        )
        assert code == 0

    def test_text_table_output(self, capsys):
        code = run_cli("verify", "--d", "pi", "--n", "512", "--jmax", "8", "--suite", "forms")
        assert code == 0
        out = capsys.readouterr().out
        assert "passed" in out and "status" in out

    def test_deterministic_reports_modulo_timestamp(self, tmp_path):
        reports = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = run_cli(
                "verify",
                "--d", "pi", "--n", "512", "--jmax", "8", "--seed", "42",
                "--suite", "expansions", "--format", "json", "--out", str(out),
            )
            assert code == 0
            body = json.loads(out.read_text())
            body.pop("generated_at")
            body.pop("elapsed_seconds")
            reports.append(body)
        assert reports[0] == reports[1]


class TestSweepCommand:
    def test_zero_beta_alpha_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            "sweep", "--alpha-range", "0:0.9:4", "--d", "pi", "--jmax", "2", "--out", str(out)
        )
        assert code == 0
        header, rows = parse_csv(out.read_text())
        assert header == ["param", "j", "re_k2", "im_k2", "residual"]
        ground = [float(r[2]) for r in rows if r[1] == "0"]
        params = sorted({float(r[0]) for r in rows})
        assert ground == pytest.approx([v**2 for v in params])
        excited = {float(r[2]) for r in rows if r[1] == "1"}
        assert max(excited) - min(excited) < 1e-12

    def test_crossing_at_degenerate_coupling(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            "sweep", "--alpha-range", "0.8:1.2:5", "--d", "pi", "--jmax", "1", "--out", str(out)
        )
        assert code == 0
        _, rows = parse_csv(out.read_text())
        at_one = [float(r[2]) for r in rows if abs(float(r[0]) - 1.0) < 1e-12]
        assert at_one[0] == pytest.approx(at_one[1], rel=1e-13)

    def test_conjugate_pairs_in_output(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            "sweep", "--beta", "-1", "--alpha-range", "0.5:1.5:3", "--d", "pi",
            "--kmax", "4", "--out", str(out),
        )
        assert code == 0
        _, rows = parse_csv(out.read_text())
        complex_rows = [r for r in rows if abs(float(r[3])) > 1e-6]
        assert complex_rows
        for r in complex_rows:
            partners = [
                q
                for q in rows
                if q[0] == r[0]
                and abs(float(q[2]) - float(r[2])) < 1e-9
                and abs(float(q[3]) + float(r[3])) < 1e-9
            ]
            assert partners

    def test_plot_data_blocks(self, capsys):
        code = run_cli("sweep", "--alpha-range", "0:0.5:2", "--d", "pi", "--jmax", "1", "--plot-data")
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("# param j re_k2 im_k2 residual")
        assert "\n\n" in out  # block separator between parameter values

    def test_malformed_range_exits_2(self):
        assert run_cli("sweep", "--alpha-range", "0:1", "--d", "pi") == 2
        assert run_cli("sweep", "--alpha-range", "0:1:1", "--d", "pi") == 2

    def test_missing_range_exits_2(self):
        assert run_cli("sweep", "--d", "pi") == 2

    def test_both_ranges_exits_2(self):
        assert run_cli("sweep", "--alpha-range", "0:1:2", "--beta-range", "0:1:2") == 2

    def test_pi_literal_in_range_endpoint(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            "sweep", "--alpha-range", "0:pi:2", "--d", "pi", "--jmax", "0", "--out", str(out)
        )
        assert code == 0
        _, rows = parse_csv(out.read_text())
        assert float(rows[-1][0]) == math.pi


class TestExitCodeContractViaSubprocess:
    def test_usage_error_is_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ptrobin.cli", "verify", "--suite", "nosuchsuite"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2

    def test_missing_command_is_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ptrobin.cli"], capture_output=True, text=True
        )
        assert proc.returncode == 2

    def test_spectrum_success_is_0(self):
        proc = subprocess.run(
            [
                sys.executable, "-m", "ptrobin.cli",
                "spectrum", "--alpha", "0.5", "--d", "pi", "--jmax", "1",
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("j,re_k2,im_k2,residual")

    def test_degenerate_series_is_3(self, tmp_path):
        grid = Grid(D, 8)
        path = tmp_path / "f.json"
        path.write_text(json.dumps(grid_function_to_dict(GridFunction.constant(grid, 1.0))))
        proc = subprocess.run(
            [
                sys.executable, "-m", "ptrobin.cli",
                "metric", "apply", "--alpha", "1", "--method", "series", "--in", str(path),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 3
