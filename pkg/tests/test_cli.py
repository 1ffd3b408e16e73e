import csv
import io
import math

import numpy as np
import pytest

from franson_swap import cli
from franson_swap.cli import ConfigError, parse_config, parse_quantity, read_config_text

FAST = ["--grid-points", "4096"]


def rows(path):
    return list(csv.DictReader(io.StringIO(path.read_text(encoding="utf-8"))))


def test_parse_quantity():
    assert parse_quantity("5tau", 0.5) == 2.5
    assert parse_quantity("2pi", 1.0) == pytest.approx(2 * math.pi)
    assert parse_quantity("-pi", 1.0) == pytest.approx(-math.pi)
    assert parse_quantity("1e-3", 1.0) == 1e-3
    with pytest.raises(ValueError):
        parse_quantity("five", 1.0)


def test_minimal_config_defaults(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("scenario = franson\n")
    cfg = parse_config(str(p))
    assert (cfg.scan, cfg.steps, cfg.start) == ("alpha", 64, 0.0)
    assert cfg.stop == pytest.approx(2 * math.pi)
    assert cfg.omega == 40.0 and cfg.t_long - cfg.t_short == 30.0
    assert len(cfg.scan_values()) == 64
    assert cfg.scan_values()[-1] < 2 * math.pi


def test_swap_defaults_to_matched_clicks():
    cfg = parse_config(None, {"scenario": "swap", "t_long": "45"})
    assert cfg.delta_small_t == 40.0
    assert cfg.scan == "phase_diff"


def test_unknown_key(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("scenario = franson\nalpha_deg = 30\n")
    with pytest.raises(ConfigError, match="alpha_deg"):
        parse_config(str(p))


def test_config_syntax_errors():
    with pytest.raises(ConfigError, match="<config>:2:"):
        read_config_text("scenario = franson\nalpha 3\n")
    with pytest.raises(ConfigError):
        read_config_text("alpha = 1\nalpha = 2\n")


def test_flags_override_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("scenario = franson\nalpha = 0  # radians\n")
    assert parse_config(str(p), {"alpha": "3.14"}).alpha == 3.14


def test_round_trip(tmp_path):
    cfg = parse_config(None, {"scenario": "mismatch", "bandwidth": "2", "steps": "5",
                              "formats": "csv,json"})
    p = tmp_path / "again.cfg"
    p.write_text(cfg.to_text())
    assert parse_config(str(p)) == cfg


def test_regime_error_message(capsys):
    assert cli.main(["franson", "--t-long", "10"]) == 2
    assert "Δt=5τ violates Δt ≥ 10τ for scenario franson" in capsys.readouterr().err


def test_seedless_rejected(capsys):
    assert cli.main(["franson", "--seedless"]) == 2
    assert "seedless" in capsys.readouterr().err


def test_franson_csv(tmp_path):
    assert cli.main(["franson", "--out-dir", str(tmp_path), "--format", "csv,json", *FAST]) == 0
    data = rows(tmp_path / "franson.csv")
    assert list(data[0]) == list(cli.CSV_COLUMNS)
    assert len(data) == 64
    alpha = np.array([float(r["swept_value"]) for r in data])
    p00 = np.array([float(r["P_00_sim"]) for r in data])
    assert np.abs(p00 - (1 + np.cos(2 * 40.0 * 30.0 + alpha)) / 8).max() < 1e-6
    assert all(abs(float(r["total"]) - 1) < 1e-4 for r in data)
    assert (tmp_path / "franson.json").exists()
    assert (tmp_path / "franson.cfg").exists()


def test_swap_writes_two_antiphase_files(tmp_path):
    assert cli.main(["swap", "--out-dir", str(tmp_path), "--steps", "16", *FAST]) == 0
    same = rows(tmp_path / "swap_same.csv")
    diff = rows(tmp_path / "swap_different.csv")
    s = np.array([float(r["P_00_sim"]) for r in same])
    d = np.array([float(r["P_00_sim"]) for r in diff])
    assert np.abs(s + d - 0.125).max() < 1e-4
    assert s[0] > 0.12 and d[0] < 0.005


def test_hom_dip(tmp_path):
    assert cli.main(["hom", "--out-dir", str(tmp_path), *FAST]) == 0
    data = rows(tmp_path / "hom.csv")
    x = np.array([float(r["swept_value"]) for r in data])
    cross = np.array([float(r["P_01_sim"]) + float(r["P_10_sim"]) for r in data])
    assert abs(cross[np.argmin(np.abs(x))]) < 1e-9
    assert cross[0] == pytest.approx(0.5, abs=1e-3)


def test_svg_output(tmp_path):
    assert cli.main(["franson", "--out-dir", str(tmp_path), "--format", "svg", "--steps", "8", *FAST]) == 0
    assert (tmp_path / "franson.svg").read_text().lstrip().startswith("<?xml")


def test_byte_identical(tmp_path):
    out = []
    for k in range(2):
        d = tmp_path / str(k)
        assert cli.main(["mismatch", "--out-dir", str(d), "--steps", "5", *FAST]) == 0
        out.append((d / "mismatch.csv").read_bytes())
    assert out[0] == out[1]


def test_oracle_check_command(capsys):
    assert cli.main(["oracle-check"]) == 0
    assert capsys.readouterr().out.count("PASS") == 4
