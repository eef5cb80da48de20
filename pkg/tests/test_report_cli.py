import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dyadic_cesaro import cli
from dyadic_cesaro import experiments as ex
from dyadic_cesaro.phi import SHIPPED, PhiSchedule
from dyadic_cesaro.report import ExperimentReport, emit, ratios_consistent, read_csv_rows, to_csv, to_json

SMALL = {
    "kernels": ["--resolution", "2,4"],
    "l1norms": ["--resolution", "6"],
    "lemma3": ["--resolution", "3,4"],
    "theorem1a": ["--resolution", "3", "--seeds", "3"],
    "counterexample": ["--nk", "1,2"],
    "strongsum": ["--resolution", "3", "--nmax", "64", "--seeds", "3"],
}


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestReport:
    def test_empty_rows_json(self):
        r = ExperimentReport("x", {"alpha": 0.5}, ("n",))
        d = json.loads(to_json(r))
        assert d == {"experiment": "x", "parameters": {"alpha": 0.5}, "rows": [], "summary": {}, "verdict": "fail"}

    def test_unknown_column(self):
        r = ExperimentReport("x", {}, ("n", "value"))
        with pytest.raises(KeyError):
            r.add(n=1, other=2)

    def test_ratio_consistency_check(self):
        r = ExperimentReport("x", {}, ("value", "bound", "ratio"))
        r.add(value=1.0, bound=3.0, ratio=1.0 / 3.0)
        assert ratios_consistent(r)
        r.add(value=1.0, bound=3.0, ratio=0.3333)
        assert not ratios_consistent(r)

    def test_csv_round_trip(self):
        r = ExperimentReport("x", {"alpha": 0.25}, ("n", "value", "flag", "label"))
        rows = [dict(n=1, value=0.1 + 0.2, flag=True, label="kl"), dict(n=2, value=None, flag=False, label="k")]
        for row in rows:
            r.add(**row)
        r.summary = {"c": 1.5}
        r.verdict = True
        text = to_csv(r)
        assert read_csv_rows(text) == rows
        assert text.splitlines()[-1] == "# verdict=pass"
        assert "# c=1.5" in text

    def test_non_finite_values_survive_json(self):
        r = ExperimentReport("x", {}, ("v",))
        r.add(v=math.inf)
        assert json.loads(to_json(r))["rows"] == [{"v": "inf"}]

    def test_numpy_values_serialize(self):
        r = ExperimentReport("x", {"ns": np.arange(3)}, ("v",))
        r.add(v=np.float64(0.5))
        r.summary = {"ok": np.bool_(True), "k": np.int64(4)}
        d = json.loads(to_json(r))
        assert d["parameters"]["ns"] == [0, 1, 2] and d["summary"] == {"ok": True, "k": 4}

    def test_emit_unknown_format(self):
        with pytest.raises(ValueError):
            emit(ExperimentReport("x", {}, ()), "xml")


class TestPhi:
    @pytest.mark.parametrize("text", list(SHIPPED) + ["log-power:0.5", "table:1,2,2,5"])
    def test_round_trip(self, text):
        assert str(PhiSchedule.parse(text)) == str(PhiSchedule.parse(str(PhiSchedule.parse(text))))

    @pytest.mark.parametrize("text", ["", "log-power", "log-power:-1", "table:", "table:2,1", "table:0.5", "cubic"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            PhiSchedule.parse(text)

    @pytest.mark.parametrize("text", SHIPPED)
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_shipped_schedules(self, text, alpha):
        phi = PhiSchedule.parse(text)
        n = np.arange(1, 1 << 16)
        v = phi(n, alpha)
        assert (v >= 1).all() and (np.diff(v) >= -1e-12).all()
        assert phi.admissible_exponent(alpha)
        probes = np.array([2.0 ** (2 * k + 1) for k in range(1, 12)])
        assert (np.diff(phi.growth_ratio(probes, alpha)) > 0).all()

    def test_table_holds_last_value(self):
        phi = PhiSchedule.parse("table:1,2,4")
        assert phi(np.array([1, 2, 3, 4, 100]), 0.5).tolist() == [1, 2, 4, 4, 4]

    def test_inadmissible_power(self):
        assert not PhiSchedule.parse("log-power:2").admissible_exponent(0.5)


class TestExperiments:
    def test_kernels_small(self):
        r = ex.run_kernels(0.5, [2])
        assert r.verdict
        assert r.summary["fejer_K2_values"] == ["3/2", "1/2"]
        assert r.summary["closed_form_mismatches"] == 0
        assert ratios_consistent(r)

    def test_kernels_reference(self):
        r = ex.run_kernels(0.5, [8], 256)
        assert r.verdict and r.summary["closed_form_mismatches"] == 0

    def test_l1_alpha_one(self):
        r = ex.run_l1norms(1.0, 8)
        norms = {row["n"]: row["l1_norm"] for row in r.rows}
        assert all(norms[1 << j] <= 1 for j in range(9))

    def test_l1_first_row(self):
        r = ex.run_l1norms(0.5, 6)
        assert r.rows[0]["n"] == 1
        assert r.rows[0]["l1_norm"] == pytest.approx(1 / 1.5, rel=1e-14)

    def test_coset_integral_classes(self):
        r = ex.run_lemma3(0.5, [4])
        assert r.summary["classes_per_M"] == {"4": 10}
        assert len(r.rows) == 10
        assert all(math.isfinite(row["ratio"]) for row in r.rows)
        assert ratios_consistent(r)

    def test_atom_estimates_zero_atom(self):
        st = ex.theorem1a_atom_stats(0.5, np.zeros(1 << 6), 4, 64, 6)
        assert st == {"prefix_max": 0.0, "c_pair": 0.0, "c_single": 0.0, "integral": 0.0}

    def test_atom_estimates_prefix_vanishes(self):
        r = ex.run_theorem1a(0.5, [4], n_max=64, seeds=10)
        assert r.summary["prefix_vanishes"]
        assert all(row["prefix_max"] < 1e-11 for row in r.rows)

    def test_strongsum_zero_atom(self):
        assert not ex.strong_sums(0.5, np.zeros(1 << 7), 7, 128).any()

    @pytest.mark.parametrize("nk", [1, 2, 3])
    def test_counterexample_exact_checks(self, nk):
        checks = ex.counterexample_checks(nk)
        assert checks["partial_sum_violations"] == 0 and checks["shift_identity_violations"] == 0

    def test_counterexample_rows(self):
        r = ex.run_counterexample(0.5, [1, 2, 3])
        assert r.verdict
        assert ratios_consistent(r)
        assert r.summary["statistic_strictly_increasing"]

    def test_out_of_range_parameters(self):
        with pytest.raises(ValueError):
            ex.run_kernels(1.5, [4])
        with pytest.raises(ValueError):
            ex.run_kernels(0.5, [4], n_max=17)
        with pytest.raises(ValueError):
            ex.run_theorem1a(0.5, [4], n_max=16, seeds=1)


class TestCli:
    @pytest.mark.parametrize("command", sorted(SMALL))
    def test_json_output(self, command, capsys):
        code, out, _ = run_cli([command] + SMALL[command], capsys)
        d = json.loads(out)
        assert d["experiment"] == command
        assert code == (0 if d["verdict"] == "pass" else 2)
        assert set(d) == {"experiment", "parameters", "rows", "summary", "verdict"}

    @pytest.mark.parametrize("command", sorted(SMALL))
    def test_deterministic(self, command, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            cli.main([command] + SMALL[command] + ["--format", "csv", "--out", str(path)])
        capsys.readouterr()
        assert paths[0].read_bytes() == paths[1].read_bytes()

    @pytest.mark.parametrize("command", sorted(SMALL))
    def test_csv_round_trip(self, command, tmp_path, capsys):
        jpath, cpath = tmp_path / "r.json", tmp_path / "r.csv"
        cli.main([command] + SMALL[command] + ["--out", str(jpath)])
        cli.main([command] + SMALL[command] + ["--format", "csv", "--out", str(cpath)])
        capsys.readouterr()
        rows = json.loads(jpath.read_text())["rows"]
        assert read_csv_rows(cpath.read_text()) == rows

    def test_failing_verdict_exits_2(self, capsys):
        code, out, _ = run_cli(["l1norms", "--resolution", "6", "--tail-ratio", "0.5"], capsys)
        assert code == 2
        assert json.loads(out)["verdict"] == "fail"

    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["kernels", "--resolution", "3", "--nmax", "9"],
        ["kernels", "--alpha", "0"],
        ["kernels", "--alpha", "abc"],
        ["kernels", "--resolution", "x,y"],
        ["kernels", "--resolution", "30"],
        ["counterexample", "--phi", "cubic"],
        ["l1norms", "--format", "xml"],
    ])
    def test_usage_errors_exit_1(self, argv, capsys):
        code, _, err = run_cli(argv, capsys)
        assert code == 1
        assert err.startswith("dyadic-cesaro: ")

    def test_unwritable_path(self, tmp_path, capsys):
        code, _, err = run_cli(["kernels", "--resolution", "2", "--out", str(tmp_path / "no" / "r.json")], capsys)
        assert code == 1 and "cannot write" in err

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "dyadic_cesaro", "kernels", "--resolution", "2",
                               "--format", "csv"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.startswith("check,")
        assert proc.stdout.rstrip().endswith("# verdict=pass")

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--help"])
        assert exc.value.code == 0
        assert "strongsum" in capsys.readouterr().out
