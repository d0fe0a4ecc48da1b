"""CLI config handling, exit codes, artifact writing, and determinism."""
import dataclasses
import hashlib
import json
import subprocess
import sys

import pytest

from kerrcat import cli
from kerrcat.errors import ConfigInvalid
from kerrcat.experiments import REGISTRY, run_experiment


def write_cfg(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# ------------------------------------------------------------- config loading

def test_load_config_defaults(tmp_path):
    cfg = cli.load_config(write_cfg(tmp_path, "experiment: filter-sweep\n"))
    assert cfg == {"experiment": "filter-sweep", "seed": 0, "rate_scale": 1.0,
                   "output_dir": "runs/filter-sweep", "parameters": {}}


def test_load_config_full(tmp_path):
    text = ("experiment: wigner\nseed: 11\nrate_scale: 2\n"
            "output_dir: out/wig\nparameters:\n  n_grid: 21\n  extent: 3.0\n")
    cfg = cli.load_config(write_cfg(tmp_path, text))
    assert cfg["seed"] == 11
    assert cfg["rate_scale"] == 2.0
    assert cfg["output_dir"] == "out/wig"
    assert cfg["parameters"] == {"n_grid": 21, "extent": 3.0}


@pytest.mark.parametrize("text,fragment", [
    ("- just\n- a list\n", "mapping"),
    ("experiment: filter-sweep\nbogus: 1\n", "unknown top-level"),
    ("seed: 1\n", "must name an experiment"),
    ("experiment: warp-drive\n", "unknown experiment"),
    ("experiment: wigner\nseed: -1\n", "seed"),
    ("experiment: wigner\nseed: true\n", "seed"),
    ("experiment: wigner\nseed: x\n", "seed"),
    ("experiment: wigner\nrate_scale: 0.5\n", "rate_scale"),
    ("experiment: wigner\nrate_scale: fast\n", "rate_scale"),
    ("experiment: wigner\nparameters: [1, 2]\n", "parameters"),
    ("experiment: wigner\nparameters:\n  bogus_knob: 1\n", "unknown parameter"),
    ("experiment: lifetime-cat\nparameters:\n  alpha_sq_list: 4\n", "a list"),
    ("experiment: wigner\nparameters:\n  extent: [1, 2]\n", "a scalar"),
    ("experiment: wigner\noutput_dir: ''\n", "output_dir"),
])
def test_load_config_rejections(tmp_path, text, fragment):
    with pytest.raises(ConfigInvalid, match=fragment):
        cli.load_config(write_cfg(tmp_path, text))


def test_load_config_missing_and_unparsable(tmp_path):
    with pytest.raises(ConfigInvalid, match="not found"):
        cli.load_config(str(tmp_path / "nope.yaml"))
    with pytest.raises(ConfigInvalid, match="valid YAML"):
        cli.load_config(write_cfg(tmp_path, "a: [unclosed\n"))


# ---------------------------------------------------------------- diagnostics

def test_diagnostics_low_dim_and_rate_scale(tmp_path):
    cfg = cli.load_config(write_cfg(
        tmp_path, "experiment: spectrum\nrate_scale: 50\n"
                  "parameters:\n  dim: 5\n"))
    notes = cli.diagnostics(cfg)
    assert any("below the recommended cutoff" in n for n in notes)
    assert any("rate_scale=50" in n for n in notes)


def test_diagnostics_strong_zeno_drive(tmp_path):
    cfg = cli.load_config(write_cfg(
        tmp_path, "experiment: rabi-phase\nparameters:\n  omega_z_MHz: 3.0\n"))
    assert any("manifold gap" in n for n in cli.diagnostics(cfg))
    quiet = cli.load_config(write_cfg(tmp_path, "experiment: rabi-phase\n",
                                      name="quiet.yaml"))
    assert cli.diagnostics(quiet) == []


# ------------------------------------------------------------------ main/exit

def test_main_exit_codes(tmp_path, capsys):
    bad = write_cfg(tmp_path, "experiment: warp-drive\n")
    assert cli.main(["run", "--config", bad]) == 2
    assert "config error" in capsys.readouterr().err
    ok = write_cfg(tmp_path, "experiment: filter-sweep\n", name="ok.yaml")
    assert cli.main(["validate", "--config", ok]) == 0
    out = capsys.readouterr().out
    assert "config OK" in out and "f_notch_GHz" in out


def test_main_run_writes_artifacts(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "experiment: filter-sweep\n")
    outdir = tmp_path / "art"
    assert cli.main(["run", "--config", cfg, "--out", str(outdir)]) == 0
    stdout = capsys.readouterr().out
    assert "wrote" in stdout and "stopband" in stdout
    record = json.loads((outdir / "record.json").read_text())
    assert record["experiment"] == "filter-sweep"
    names = {f["name"] for f in record["files"]}
    assert names == {"filter_sweep.csv", "design.json"}
    for entry in record["files"]:
        digest = hashlib.sha256((outdir / entry["name"]).read_bytes()).hexdigest()
        assert digest == entry["sha256"]


def test_main_run_seed_and_rate_scale_override(tmp_path):
    cfg = write_cfg(tmp_path, "experiment: readout-qnd\nseed: 1\n"
                              "parameters:\n  shots_csv: 50\n"
                              "  shot_pairs: 200\n")
    out = tmp_path / "r"
    assert cli.main(["run", "--config", cfg, "--seed", "9",
                     "--rate-scale", "2", "--out", str(out)]) == 0
    record = json.loads((out / "record.json").read_text())
    assert record["seed"] == 9
    assert record["rate_scale"] == 2.0
    assert cli.main(["run", "--config", cfg, "--seed", "-3",
                     "--out", str(out)]) == 2
    assert cli.main(["run", "--config", cfg, "--rate-scale", "0.2",
                     "--out", str(out)]) == 2


def test_main_run_invalid_parameter_value_is_config_error(tmp_path):
    # structurally valid config whose value fails experiment validation
    cfg = write_cfg(tmp_path, "experiment: wigner\nparameters:\n"
                              "  state: squeezed\n  n_grid: 5\n")
    assert cli.main(["run", "--config", cfg, "--out",
                     str(tmp_path / "w")]) == 2


def test_main_runtime_failure_quarantines(tmp_path, capsys, monkeypatch):
    cfg = write_cfg(tmp_path, "experiment: wigner\nparameters:\n  n_grid: 9\n")
    outdir = tmp_path / "q"

    real = REGISTRY["wigner"]

    def exploding(ctx):
        real.runner(ctx)
        raise RuntimeError("synthetic failure after writing")

    monkeypatch.setitem(REGISTRY, "wigner",
                        dataclasses.replace(real, runner=exploding))
    assert cli.main(["run", "--config", cfg, "--out", str(outdir)]) == 3
    assert "synthetic failure" in capsys.readouterr().err
    assert (outdir / "failed" / "wigner.csv").is_file()
    assert not (outdir / "record.json").exists()


def test_list_experiments(capsys):
    assert cli.main(["list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in REGISTRY:
        assert name in out
    assert len(out.strip().splitlines()) == len(REGISTRY)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kerrcat", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "kerrcat" in proc.stdout


# --------------------------------------------------------------- determinism

def test_rerun_is_byte_identical(tmp_path):
    params = {"n_grid": 15, "extent": 2.5, "state": "even_cat"}
    rec1 = run_experiment("wigner", params, 3, 1.0, tmp_path / "a")
    rec2 = run_experiment("wigner", params, 3, 1.0, tmp_path / "b")
    assert [f["sha256"] for f in rec1["files"]] == \
        [f["sha256"] for f in rec2["files"]]
    for entry in rec1["files"]:
        b1 = (tmp_path / "a" / entry["name"]).read_bytes()
        b2 = (tmp_path / "b" / entry["name"]).read_bytes()
        assert b1 == b2
    r1 = {k: v for k, v in rec1.items() if k != "wall_time_s"}
    r2 = {k: v for k, v in rec2.items() if k != "wall_time_s"}
    assert r1 == r2


def test_seed_changes_shot_artifacts(tmp_path):
    params = {"shots_csv": 40, "shot_pairs": 100}
    rec1 = run_experiment("readout-qnd", params, 1, 1.0, tmp_path / "s1")
    rec2 = run_experiment("readout-qnd", params, 2, 1.0, tmp_path / "s2")
    h1 = next(f["sha256"] for f in rec1["files"] if f["name"] == "shots.csv")
    h2 = next(f["sha256"] for f in rec2["files"] if f["name"] == "shots.csv")
    assert h1 != h2
