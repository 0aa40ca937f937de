import json
import subprocess
import sys

import pytest

from oacqam.cli import (
    DATA_COLUMNS,
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    main,
    read_table,
)


def test_optimize_report(tmp_path, capsys):
    out = tmp_path / "opt.json"
    assert main(["optimize", "--k", "100", "--q", "4", "--power", "1", "--snr-db", "10", "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    for key in ("t_star", "d1_star", "d2_star", "g_residual", "kkt_residual", "mse_opt", "mse_eq"):
        assert key in text
    rep = json.loads(out.read_text())
    assert rep["d2_star"] > rep["d1_star"]
    assert rep["mse_opt"] <= rep["mse_eq"]
    assert rep["gamma"] == pytest.approx(0.1)


def test_optimize_gamma_flag(capsys):
    assert main(["optimize", "--k", "10", "--q", "8", "--gamma", "0.5"]) == EXIT_OK
    assert "gamma" in capsys.readouterr().out


def test_degenerate_q_rejected(capsys):
    assert main(["optimize", "--k", "10", "--q", "1", "--snr-db", "10"]) == EXIT_DOMAIN
    assert "domain error" in capsys.readouterr().err


def test_missing_flag_is_usage_error(tmp_path):
    out = tmp_path / "x.dat"
    assert main(["sweep", "--k", "10", "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()
    assert main(["optimize", "--k", "10", "--q", "4"]) == EXIT_USAGE
    assert main(["optimize", "--k", "10", "--q", "4", "--gamma", "1", "--snr-db", "3"]) == EXIT_USAGE


def test_mse_command(capsys):
    assert main(["mse", "--k", "10", "--q", "4", "--gamma", "0.1", "--trials", "20000", "--mode", "uniform-grid"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert any(l.startswith("optimized") and "mc=" in l for l in lines)
    assert main(["mse", "--k", "10", "--q", "4", "--gamma", "0.1", "--d1", "0.3", "--d2", "0.5"]) == EXIT_OK
    assert "given" in capsys.readouterr().out
    assert main(["mse", "--k", "10", "--q", "4", "--gamma", "0.1", "--d1", "0.3"]) == EXIT_DOMAIN


def _sweep(path, *extra):
    return main(["sweep", "--k", "10", "--q", "4", "--trials", "3000", "--seed", "5", "--out", str(path), *extra])


def test_sweep_writes_table_and_manifest(tmp_path):
    out = tmp_path / "s.dat"
    assert _sweep(out) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0].split() == list(DATA_COLUMNS)
    assert len(body) == 22
    recs = read_table(out)
    assert [r.xi_db for r in recs] == [float(i) for i in range(21)]
    man = json.loads((tmp_path / "s.dat.manifest.json").read_text())
    assert man["inputs"]["seed"] == 5 and man["inputs"]["trials"] == 3000
    assert "timestamp" in man and "version" in man


def test_sweep_degenerate_grid(tmp_path):
    out = tmp_path / "one.dat"
    assert _sweep(out, "--snr-start", "4", "--snr-stop", "6", "--snr-step", "10") == EXIT_OK
    assert [r.xi_db for r in read_table(out)] == [4.0]


def test_sweep_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.dat", tmp_path / "b.dat"
    assert _sweep(a, "--snr-step", "5") == EXIT_OK
    assert _sweep(b, "--snr-step", "5", "--workers", "4") == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_sweep_unwritable_path(tmp_path):
    assert _sweep(tmp_path / "missing" / "dir" / "s.dat") == EXIT_IO


def test_read_table_accepts_commas(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("# note\nxi_dB,mse_opt,mse_eq,se_opt,se_eq\n0,1,2,0.1,0.2\n", encoding="utf-8")
    (r,) = read_table(p)
    assert (r.xi_db, r.mse_opt, r.mse_eq) == (0.0, 1.0, 2.0)


def test_validate_quick_and_fault(capsys):
    assert main(["validate", "--quick"]) == EXIT_OK
    assert "all checks passed" in capsys.readouterr().out
    assert main(["validate", "--quick", "--inject-fault", "alpha"]) == EXIT_VALIDATION
    out = capsys.readouterr().out
    assert "[FAIL] closed_form_vs_mc" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oacqam", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "oacqam" in res.stdout
