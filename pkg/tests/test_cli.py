import json

import numpy as np
import pytest

from rydsim import cli
from rydsim.spectra import ScanGrid, local_extrema

AT_CONFIG = {
    "atom": {"gamma2_MHz": 1.0},
    "drive": {"omega_p_MHz": 0.5, "omega_c_MHz": 8.0, "omega_m_MHz": 3.0},
    "scan": {"delta_min_MHz": -6.0, "delta_max_MHz": 6.0, "points": 2401},
}


def write_config(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(tmp_path, sub, cfg, *extra, name="out"):
    out = str(tmp_path / name)
    code = cli.main([sub, "--config", write_config(tmp_path, cfg, name + ".json"),
                     "--out", out, "--quiet", *extra])
    return code, out + ".csv"


def read_rows(path):
    body = [ln for ln in open(path).read().splitlines() if not ln.startswith("#")]
    return np.array([[float(x) for x in ln.split(",")] for ln in body[1:]])


def test_eit_scan_dips(tmp_path):
    code, path = run(tmp_path, "eit-scan", AT_CONFIG)
    assert code == 0
    lines = open(path).read().splitlines()
    assert lines[0] == "# rydsim-csv/1"
    assert "delta_MHz,re_coherence,im_coherence,absorption" in lines
    data = read_rows(path)
    grid = ScanGrid(-6.0, 6.0, 2401)
    assert np.allclose(data[:, 0], grid.values(), atol=1e-12)
    dips = data[local_extrema(data[:, 3], 0.05, kind="min"), 0]
    for target in (-1.5, 1.5):
        assert np.min(np.abs(dips - target)) <= grid.step


def test_byte_identical_and_round_trip(tmp_path):
    _, a = run(tmp_path, "eit-scan", AT_CONFIG, "--points", "301", name="a")
    _, b = run(tmp_path, "eit-scan", AT_CONFIG, "--points", "301", "--threads", "2", name="b")
    assert open(a, "rb").read() == open(b, "rb").read()
    echoed = cli.read_csv_config(a)
    assert echoed["scan"]["points"] == 301
    _, c = run(tmp_path, "eit-scan", echoed, name="c")
    assert open(a, "rb").read() == open(c, "rb").read()


def test_missing_key_exit_2(tmp_path, capsys):
    code, path = run(tmp_path, "eit-scan", {"atom": {"gamma3_MHz": 0.1}})
    assert code == 2
    assert "gamma2_MHz" in capsys.readouterr().err
    assert not (tmp_path / "out.csv").exists()


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = {"atom": {"gamma2_MHz": 1.0, "gamma5_MHz": 1.0}}
    assert run(tmp_path, "eit-scan", cfg)[0] == 2
    assert "gamma5_MHz" in capsys.readouterr().err
    assert run(tmp_path, "eit-scan", {**AT_CONFIG, "plot": {}})[0] == 2


def test_invalid_values_rejected(tmp_path):
    assert run(tmp_path, "eit-scan", {"atom": {"gamma2_MHz": -1.0}})[0] == 2
    assert run(tmp_path, "eit-scan", {"atom": {"gamma2_MHz": "fast"}})[0] == 2
    assert run(tmp_path, "eit-scan", AT_CONFIG, "--points", "2")[0] == 2


def test_json_error_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"atom": {\n  "gamma2_MHz": 1.0,\n}}')
    assert cli.main(["eit-scan", "--config", str(path), "--quiet"]) == 2
    assert "line 3" in capsys.readouterr().err


def test_numerical_error_exit_3(tmp_path, capsys):
    # undamped, decoupled Rydberg levels leave the steady state undetermined
    cfg = {"atom": {"gamma2_MHz": 1.0}, "drive": {"omega_p_MHz": 0.5}}
    code, path = run(tmp_path, "fluorescence", cfg)
    assert code == 3
    err = capsys.readouterr().err
    assert "fluorescence" in err and "gamma2_MHz" in err
    assert list(tmp_path.glob("*.csv")) == []
    assert list(tmp_path.glob(".rydsim-*")) == []


def test_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RYDSIM_THREADS", "bogus")
    assert run(tmp_path, "eit-scan", AT_CONFIG)[0] == 2
    monkeypatch.setenv("RYDSIM_THREADS", "0")
    assert cli._threads(None) >= 1
    assert cli._threads("3") == 3


def test_selftest():
    assert cli.main(["selftest", "--quiet"]) == 0


@pytest.mark.parametrize("sub,columns", [
    ("liouvillian-spectrum", "k,re_lambda_MHz,im_lambda_MHz"),
    ("timescale", "swept_param_value,tau_us"),
    ("fluorescence", "omega_MHz,S"),
    ("fluorescence-t", "omega_MHz,S"),
])
def test_other_subcommands(tmp_path, sub, columns):
    cfg = {"atom": {"gamma2_MHz": 1.0, "gamma3_MHz": 0.2, "gamma4_MHz": 0.2},
           "drive": {"omega_p_MHz": 1.0, "omega_c_MHz": 2.0, "omega_m_MHz": 0.5},
           "timescale": {"points": 5}, "fluorescence": {"points": 101, "time_us": 1.0}}
    code, path = run(tmp_path, sub, cfg)
    assert code == 0
    text = open(path).read()
    assert columns in text.splitlines()
    if sub.startswith("fluorescence"):
        assert "# coherent_weight:" in text


def test_estimate_mw(tmp_path):
    code, path = run(tmp_path, "estimate-mw", AT_CONFIG)
    assert code == 0
    lines = open(path).read().splitlines()
    assert lines[-2] == "mode,splitting_MHz,omega_m_hat_MHz,correction_applied"
    row = lines[-1].split(",")
    assert row[0] == "eit_dips" and row[3] == "false"
    assert float(row[2]) == pytest.approx(3.0, rel=0.02)


def test_doppler_scan_cold_matches_eit(tmp_path):
    cfg = {**AT_CONFIG, "scan": {**AT_CONFIG["scan"], "points": 201},
           "doppler": {"T_K": 0.0}}
    _, eit = run(tmp_path, "eit-scan", cfg, name="eit")
    _, dop = run(tmp_path, "doppler-scan", cfg, name="dop")
    assert np.allclose(read_rows(eit), read_rows(dop), rtol=1e-9, atol=1e-15)
