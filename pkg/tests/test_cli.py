"""Command line behavior: exit codes, outputs, byte-level reproducibility."""

import subprocess
import sys

import pytest

from taskage.experiments.cli import main

FAST_CONFIG = """\
[sweep]
lambda = [0.09]
n_c = [2, 4, 12]
snr_db = [5.0]
pairs = [["MNIST", "CNN"]]
horizon = 4000
[compare]
lambda_grid = [0.09, 0.17]
horizon = 8000
[validate]
cells = 2
horizon = 15000
replications = 2
"""


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(FAST_CONFIG)
    return str(path)


def run_verb(tmp_path, fast_config, verb, sub, *extra):
    out = tmp_path / sub
    code = main([verb, "--config", fast_config, "--out", str(out), *extra])
    return code, out


class TestExitCodes:
    def test_no_verb_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_unknown_verb_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
        capsys.readouterr()

    def test_missing_config_exits_2(self, tmp_path, capsys):
        code = main(["sweep-nc", "--config", str(tmp_path / "nope.toml"),
                     "--out", str(tmp_path)])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_config_value_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("[compare]\nutilization_cap = 2.0\n")
        code = main(["compare-dynamic", "--config", str(bad),
                     "--out", str(tmp_path)])
        assert code == 2
        assert "utilization_cap" in capsys.readouterr().err

    def test_bad_jobs_exits_2(self, tmp_path, fast_config, capsys):
        code = main(["sweep-nc", "--config", fast_config,
                     "--out", str(tmp_path), "--jobs", "0"])
        assert code == 2
        capsys.readouterr()


class TestSweepVerbs:
    def test_sweep_nc_writes_csv(self, tmp_path, fast_config, capsys):
        code, out = run_verb(tmp_path, fast_config, "sweep-nc", "a")
        assert code == 0
        text = (out / "sweep_nc.csv").read_text()
        assert text.startswith("dataset,model,snr_db,lam,n_c,p_c,status")
        assert len(text.splitlines()) == 1 + 3
        assert "unstable" in text
        assert "wrote 3 rows (1 unstable)" in capsys.readouterr().out

    def test_sweep_lambda_uses_other_grid_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "exp.toml"
        cfg.write_text('[sweep]\nlambda = [0.05, 0.11]\nhorizon = 3000\n'
                       'pairs = [["MNIST", "FNN"]]\nsnr_db = [3.0]\n')
        code, out = run_verb(tmp_path, str(cfg), "sweep-lambda", "a")
        assert code == 0
        lines = (out / "sweep_lambda.csv").read_text().splitlines()
        # two rates at the single default n_c = 5
        assert len(lines) == 1 + 2
        capsys.readouterr()

    def test_rerun_is_byte_identical(self, tmp_path, fast_config, capsys):
        _, out1 = run_verb(tmp_path, fast_config, "sweep-nc", "a")
        _, out2 = run_verb(tmp_path, fast_config, "sweep-nc", "b")
        assert (out1 / "sweep_nc.csv").read_bytes() == \
            (out2 / "sweep_nc.csv").read_bytes()
        capsys.readouterr()

    def test_seed_override_changes_output(self, tmp_path, fast_config,
                                          capsys):
        _, out1 = run_verb(tmp_path, fast_config, "sweep-nc", "a")
        _, out2 = run_verb(tmp_path, fast_config, "sweep-nc", "b",
                           "--seed", "1")
        assert (out1 / "sweep_nc.csv").read_bytes() != \
            (out2 / "sweep_nc.csv").read_bytes()
        capsys.readouterr()

    def test_jobs_do_not_change_bytes(self, tmp_path, fast_config, capsys):
        _, out1 = run_verb(tmp_path, fast_config, "sweep-nc", "a")
        _, out2 = run_verb(tmp_path, fast_config, "sweep-nc", "b",
                           "--jobs", "2")
        assert (out1 / "sweep_nc.csv").read_bytes() == \
            (out2 / "sweep_nc.csv").read_bytes()
        capsys.readouterr()

    def test_plot_data_flag_writes_dat(self, tmp_path, fast_config, capsys):
        _, out = run_verb(tmp_path, fast_config, "sweep-nc", "a",
                          "--plot-data")
        dat = (out / "sweep_nc.dat").read_text()
        assert dat.startswith("# dataset model snr_db")
        capsys.readouterr()


class TestCompareVerb:
    def test_writes_cells_and_summary(self, tmp_path, fast_config, capsys):
        code, out = run_verb(tmp_path, fast_config, "compare-dynamic", "a")
        assert code == 0
        cells = (out / "compare_dynamic_cells.csv").read_text().splitlines()
        summary = (out / "compare_dynamic.csv").read_text().splitlines()
        # 1 configured pair x 1 SNR x 2 rates
        assert len(cells) == 1 + 2
        assert len(summary) == 1 + 1
        stdout = capsys.readouterr().out
        assert "MNIST/CNN" in stdout and "reduction" in stdout

    def test_rerun_is_byte_identical(self, tmp_path, fast_config, capsys):
        _, out1 = run_verb(tmp_path, fast_config, "compare-dynamic", "a")
        _, out2 = run_verb(tmp_path, fast_config, "compare-dynamic", "b")
        for name in ("compare_dynamic.csv", "compare_dynamic_cells.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        capsys.readouterr()


class TestValidateVerb:
    def test_clean_run_exits_0(self, tmp_path, fast_config, capsys):
        code, out = run_verb(tmp_path, fast_config, "validate", "a")
        assert code == 0
        report = (out / "validate_report.csv").read_text().splitlines()
        assert report[0] == "check,lam,n_c,p_c,metric,sim,ref,se,z,status"
        assert len(report) == 1 + 1 + 2 * 3
        assert "checks passed" in capsys.readouterr().out

    def test_injected_fault_exits_1(self, tmp_path, capsys):
        cfg = tmp_path / "exp.toml"
        cfg.write_text(FAST_CONFIG + "service_bias = 0.25\n")
        code, out = run_verb(tmp_path, str(cfg), "validate", "a")
        assert code == 1
        stdout = capsys.readouterr().out
        assert "FAIL" in stdout
        assert "FAIL" in (out / "validate_report.csv").read_text()


class TestFitCurvesVerb:
    def test_writes_fits(self, tmp_path, fast_config, capsys):
        code, out = run_verb(tmp_path, fast_config, "fit-curves", "a")
        assert code == 0
        lines = (out / "curve_fits.csv").read_text().splitlines()
        assert lines[0] == ("dataset,model,snr_db,p_max,alpha,n0,"
                            "rms_residual,degenerate,n_c_star")
        assert len(lines) == 1 + 9
        capsys.readouterr()


class TestBenchVerb:
    def test_reports_both_backends(self, tmp_path, capsys):
        code = main(["bench", "--out", str(tmp_path), "--events", "30000",
                     "--repeats", "1"])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "active backend:" in stdout
        assert "speedup" in stdout
        assert "events/s" in stdout


class TestModuleEntryPoint:
    def test_python_dash_m_invocation(self, tmp_path, fast_config):
        out = tmp_path / "m"
        proc = subprocess.run(
            [sys.executable, "-m", "taskage", "sweep-nc", "--config",
             fast_config, "--out", str(out)],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
        assert (out / "sweep_nc.csv").exists()
        assert "sweep-nc: wrote" in proc.stdout
