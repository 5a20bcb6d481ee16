import json
import subprocess
import sys

import pytest

from blockroute.cli import main, resolve_config
from blockroute.experiments import ExperimentConfig, run_regime, run_simulate

SMALL = ["--n", "400", "--d-prime", "30", "--d-c", "3", "--n-l", "8"]


def run_cli(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


def test_simulate_csv_is_byte_identical(tmp_path):
    a = run_cli(tmp_path, "a.csv", "simulate", *SMALL, "--trials", "1", "--seed", "42")
    b = run_cli(tmp_path, "b.csv", "simulate", *SMALL, "--trials", "1", "--seed", "42")
    assert a[0] == 0 and a == b
    lines = a[1].decode().splitlines()
    assert lines[0] == "# blockroute.trial/1"
    assert "wall_time_ms" not in lines[1]


def test_parallelism_does_not_change_output(tmp_path):
    a = run_cli(tmp_path, "a.csv", "simulate", *SMALL, "--trials", "3", "--parallelism", "1")
    b = run_cli(tmp_path, "b.csv", "simulate", *SMALL, "--trials", "3", "--parallelism", "3")
    assert a == b


def test_adding_trials_keeps_earlier_records():
    base = ExperimentConfig(n_vertices=400, d_prime=30, d_c=3, n_l=8, trials=2, parallelism=1)
    short, _ = run_simulate(base)
    longer, _ = run_simulate(ExperimentConfig(**{**base.__dict__, "trials": 4}))
    strip = lambda r: {k: v for k, v in r.__dict__.items() if k != "wall_time_ms"}
    assert [strip(r) for r in short] == [strip(r) for r in longer[:2]]


def test_json_has_same_records_as_csv(tmp_path):
    _, raw = run_cli(tmp_path, "a.json", "simulate", *SMALL, "--trials", "2", "--format", "json", "--parallelism", "1")
    doc = json.loads(raw)
    assert doc["schema"] == "blockroute.trial/1"
    assert [r["seed"] for r in doc["records"]] == [0, 1]
    assert "alpha" in doc["aggregate"]


def test_timing_flag_adds_column(tmp_path):
    _, raw = run_cli(tmp_path, "t.csv", "simulate", *SMALL, "--trials", "1", "--timing")
    assert "wall_time_ms" in raw.decode().splitlines()[1]


def test_config_file_with_flag_override(tmp_path):
    cfg_path = tmp_path / "exp.yaml"
    cfg_path.write_text("d_c: 5\nn_l: 16\ntrials: 4\nseed: 9\n")
    cfg = resolve_config(["simulate", "--config", str(cfg_path), "--trials", "2"])
    assert (cfg.d_c, cfg.n_l, cfg.trials, cfg.base_seed) == (5, 16, 2, 9)


@pytest.mark.parametrize(
    "args,code",
    [
        (["simulate", "--trials", "0"], 2),
        (["simulate", "--config", "/nonexistent.yaml"], 2),
        (["simulate", "--n", "101", "--d-prime", "3"], 2),
        (["simulate", "--n", "100", "--d-prime", "6", "--n-l", "10", "--d-c", "3", "--guard", "3", "--trials", "1"], 3),
        (["simulate", "--n", "200", "--d-prime", "2", "--n-l", "4", "--d-c", "2", "--trials", "1"], 4),
    ],
)
def test_exit_codes(args, code, capsys):
    assert main(args) == code
    assert "blockroute:" in capsys.readouterr().err


def test_regime_table():
    rows = run_regime()
    assert [(r["d_c"], r["min_d"], r["d_prime"]) for r in rows] == [(3, 7, 14), (5, 10, 20), (7, 12, 24), (9, 15, 30)]


def test_ft_budget_and_decompose_modes(tmp_path):
    code, raw = run_cli(tmp_path, "f.csv", "ft-budget", "--d-c", "7", "--n-l", "100", "--p-phys", "1e-4")
    text = raw.decode()
    assert code == 0 and "p_l_total,0.49\n" in text and "FLAG" in text
    code, raw = run_cli(tmp_path, "d.csv", "decompose", *SMALL, "--trials", "3")
    assert code == 0 and len(raw.decode().splitlines()) == 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "blockroute", "regime"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[2] == "3,7,14,15,30"


def test_sweep_mode(tmp_path):
    code, raw = run_cli(tmp_path, "s.csv", "sweep", "--n", "400", "--d-prime-list", "30,60", "--d-c", "3", "--n-l", "8", "--trials", "1")
    lines = raw.decode().splitlines()
    assert code == 0 and lines[0] == "# blockroute.sweep/1"
    assert [l.split(",")[0] for l in lines[2:]] == ["30", "60"]
