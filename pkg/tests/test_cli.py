import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gravdist import load_preset
from gravdist.cli import main
from gravdist.config import Command, UsageError, parse_config, parse_number, read_config_file
from gravdist.io import read_trajectory_csv
from gravdist.model import first_integral_array

from conftest import level_spread


# --- parse_config ---------------------------------------------------------------

def test_preset_simulate_config():
    cfg = parse_config(["simulate", "--preset", "phase1", "--t-end", "100", "--out", "run.csv"])
    assert cfg.command is Command.SIMULATE
    assert cfg.params == load_preset("Phase1").params
    assert tuple(cfg.initial) == (0.3, 0.25)
    assert cfg.t_end == 100.0 and cfg.out == "run.csv"
    assert cfg.integrator.dt == 1e-3 and cfg.integrator.sample_every == 100


def test_explicit_parameters():
    cfg = parse_config("simulate --g 0.04 --mu 1.1 --tau 0.5 --rho 1 --y0 1 --d0 0.449204 "
                       "--t-end 15".split())
    assert cfg.params.as_tuple() == (0.04, 1.1, 0.5, 1.0)
    assert tuple(cfg.initial) == (1.0, 0.449204)


def test_negative_parameters_parse():
    cfg = parse_config("equilibria --g -0.04 --mu -0.15 --tau 0.5 --rho 1".split())
    assert cfg.params.as_tuple() == (-0.04, -0.15, 0.5, 1.0)


def test_flag_overrides_config_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# recession run\npreset = recession\ndt = 0.001\nt_end = 15\n")
    cfg = parse_config(["simulate", "--config", str(conf), "--dt", "0.01"])
    assert cfg.integrator.dt == 0.01
    assert cfg.t_end == 15.0
    assert cfg.params == load_preset("Recession").params


def test_flag_overrides_preset_value():
    cfg = parse_config("simulate --preset phase1 --mu 0.5 --t-end 1".split())
    assert cfg.params.mu == 0.5 and cfg.params.g == 0.04


def test_env_default_dt(monkeypatch):
    monkeypatch.setenv("GRAVDIST_DEFAULT_DT", "0.01")
    assert parse_config("simulate --preset phase1 --t-end 1".split()).integrator.dt == 0.01


@pytest.mark.parametrize("text", ["1,5", "inf", "nan", "0x10", "1_000", "", "1.2.3", "e5"])
def test_malformed_numbers(text):
    with pytest.raises(UsageError):
        parse_number(text)


@pytest.mark.parametrize("text, value", [("1", 1.0), ("-0.04", -0.04), ("1e-3", 1e-3),
                                         (".5", 0.5), ("+2.", 2.0), ("3E+2", 300.0)])
def test_numbers(text, value):
    assert parse_number(text) == value


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("gamma = 1\n")
    with pytest.raises(UsageError, match="gamma"):
        read_config_file(bad)
    bad.write_text("dt 0.1\n")
    with pytest.raises(UsageError):
        read_config_file(bad)
    bad.write_text("dt = 1,5\n")
    with pytest.raises(UsageError, match="1,5"):
        read_config_file(bad)


@pytest.mark.parametrize("argv, token", [
    (["simulate", "--g", "0.04"], "--mu"),
    (["simulate", "--preset", "phase1"], "--t-end"),
    (["simulate", "--preset", "nope", "--t-end", "1"], "nope"),
    (["fly"], "fly"),
    ([], "command"),
    (["simulate", "--preset", "phase1", "--t-end", "abc"], "abc"),
])
def test_usage_errors(argv, token):
    with pytest.raises(UsageError, match=token):
        parse_config(argv)


# --- main -----------------------------------------------------------------------

def test_simulate_end_to_end(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["simulate", "--preset", "recession", "--t-end", "15", "--out", str(out)]) == 0
    t, Y, d = read_trajectory_csv(out)
    assert t[0] == 0.0 and t[-1] == pytest.approx(15.0)
    assert level_spread(first_integral_array(Y, d, load_preset("Recession").params)) <= 0.02


def test_simulate_json_and_svg(tmp_path):
    out, svg = tmp_path / "run.json", tmp_path / "run.svg"
    assert main(["simulate", "--preset", "phase3", "--t-end", "5", "--out", str(out),
                 "--svg", str(svg), "--plot-mode", "time"]) == 0
    rows = json.loads(out.read_text())
    assert set(rows[0]) == {"t", "Y", "d"} and len(rows) == 51
    ET.fromstring(svg.read_text())


def test_portrait(tmp_path):
    out, svg = tmp_path / "field.csv", tmp_path / "field.svg"
    assert main(["portrait", "--preset", "phase3", "--n", "3", "--out", str(out),
                 "--svg", str(svg), "--t-end", "60"]) == 0
    assert len(out.read_text().splitlines()) == 10
    ET.fromstring(svg.read_text())


def test_equilibria_text_and_json(capsys):
    assert main(["equilibria", "--preset", "SaddleAppendix"]) == 0
    assert "NonConsistent" in capsys.readouterr().out
    assert main(["equilibria", "--preset", "phase1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime"] == "Cyclical"
    assert data["fixed_points"][1]["kind"] == "Center"


def test_schedule_command(tmp_path, capsys):
    out, svg = tmp_path / "s.csv", tmp_path / "s.svg"
    assert main(["schedule", "--out", str(out), "--svg", str(svg)]) == 0
    t, _, _ = read_trajectory_csv(out)
    assert np.all(np.diff(t) > 0) and t[-1] == pytest.approx(305.0)
    assert svg.read_text().count("phase-marker") == 3
    err = capsys.readouterr().err
    assert err.count("period") == 3


def test_sir_rho(capsys):
    assert main(["sir-rho", "--a", "0.3", "--b", "0.1", "--phi", "10"]) == 0
    assert "rho = 2\n" in capsys.readouterr().out
    assert main(["sir-rho", "--a", "0.1", "--b", "0.3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["negative"] is True and data["rho"] == pytest.approx(-0.2)


def test_preset_list(capsys):
    assert main(["preset-list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    assert all("Figure" in line for line in lines)
    assert main(["preset-list", "--format", "json"]) == 0
    assert [r["name"] for r in json.loads(capsys.readouterr().out)] == [
        "Recession", "Recovery", "Phase1", "Phase2", "Phase3", "SaddleAppendix"]


@pytest.mark.parametrize("argv, code", [
    (["simulate", "--preset", "phase1"], 2),
    (["simulate", "--preset", "phase1", "--t-end", "1", "--dt", "1,0"], 2),
    (["unknown"], 2),
    (["simulate", "--preset", "recovery", "--t-end", "500"], 1),
    (["simulate", "--preset", "phase1", "--t-end", "1", "--out", "/nonexistent/dir/x.csv"], 1),
    (["simulate", "--preset", "phase1", "--y0", "-1", "--t-end", "1"], 1),
    (["sir-rho", "--a", "-1", "--b", "0.1"], 1),
])
def test_error_paths_exit_nonzero_with_one_line(capsys, argv, code):
    assert main(argv) == code
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("gravdist:")


def test_console_script_subprocess(tmp_path):
    out = tmp_path / "run.csv"
    proc = subprocess.run([sys.executable, "-m", "gravdist.cli", "simulate", "--preset",
                           "recession", "--t-end", "15", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("t,Y,d\n")
