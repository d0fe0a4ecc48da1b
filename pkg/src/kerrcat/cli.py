"""Command-line interface.

Subcommands:
  run              execute one experiment from a YAML config
  validate         parse and sanity-check a config without running it
  list-experiments show the experiment registry

Exit codes: 0 success, 2 invalid config, 3 experiment failure.

Config schema (YAML)::

    experiment: lifetime-coherent     # required, one of list-experiments
    seed: 1                           # optional, default 0
    rate_scale: 100.0                 # optional, default 1.0, must be >= 1
    output_dir: runs/lc               # optional, default runs/<experiment>
    parameters:                       # optional, experiment-specific
      alpha_sq_list: [1, 2, 4, 8]

Parameter keys carry their unit in the suffix (K_MHz, f_notch_GHz, T1_us,
kappa_full_per_us, T_half_mK); frequencies are converted internally to
angular rad/us. Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import yaml

from . import __version__
from .errors import ConfigInvalid, ExperimentFailed
from .experiments import REGISTRY, run_experiment
from .fock import default_truncation
from .units import MHZ

TOP_LEVEL_KEYS = {"experiment", "seed", "rate_scale", "output_dir", "parameters"}


def load_config(path: str) -> dict:
    """Read and structurally validate a YAML config; returns the resolved
    run description {experiment, seed, rate_scale, output_dir, parameters}."""
    p = Path(path)
    if not p.is_file():
        raise ConfigInvalid(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(p.read_text())
    except yaml.YAMLError as e:
        raise ConfigInvalid(f"config is not valid YAML: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigInvalid("config must be a YAML mapping")
    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown top-level keys: {sorted(unknown)}")
    if "experiment" not in raw:
        raise ConfigInvalid("config must name an experiment")
    name = raw["experiment"]
    if name not in REGISTRY:
        raise ConfigInvalid(f"unknown experiment {name!r}; "
                            f"known: {sorted(REGISTRY)}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigInvalid("seed must be a non-negative integer")
    rate_scale = raw.get("rate_scale", 1.0)
    if isinstance(rate_scale, bool) or not isinstance(rate_scale, (int, float)):
        raise ConfigInvalid("rate_scale must be a number")
    rate_scale = float(rate_scale)
    if not rate_scale >= 1.0:
        raise ConfigInvalid("rate_scale must be >= 1")
    params = raw.get("parameters", {}) or {}
    if not isinstance(params, dict):
        raise ConfigInvalid("parameters must be a mapping")
    defaults = REGISTRY[name].defaults
    unknown = set(params) - set(defaults)
    if unknown:
        raise ConfigInvalid(f"unknown parameter keys for {name}: "
                            f"{sorted(unknown)}")
    for key, value in params.items():
        want_list = isinstance(defaults[key], list)
        if want_list != isinstance(value, list):
            kind = "a list" if want_list else "a scalar"
            raise ConfigInvalid(f"parameter {key} must be {kind}")
    outdir = raw.get("output_dir", f"runs/{name}")
    if not isinstance(outdir, str) or not outdir:
        raise ConfigInvalid("output_dir must be a non-empty string")
    return {"experiment": name, "seed": seed, "rate_scale": rate_scale,
            "output_dir": outdir, "parameters": dict(params)}


def diagnostics(cfg: dict) -> list[str]:
    """Human-readable validation notes for a resolved config."""
    name = cfg["experiment"]
    p = dict(REGISTRY[name].defaults)
    p.update(cfg["parameters"])
    out = []
    if "alpha_sq" in p and "dim" in p and int(p.get("dim") or 0) > 0:
        need = default_truncation(math.sqrt(float(p["alpha_sq"]))).dim
        if int(p["dim"]) < need:
            out.append(f"warning: dim={int(p['dim'])} is below the "
                       f"recommended cutoff {need} for alpha_sq="
                       f"{p['alpha_sq']}; amplitudes may leak off the grid")
    if name == "rabi-phase":
        k = MHZ * float(p["K_MHz"])
        gap = 4.0 * k * float(p["alpha_sq"])
        omega_z = MHZ * float(p["omega_z_MHz"])
        if omega_z > 0.1 * gap:
            out.append("warning: omega_z exceeds 10% of the estimated "
                       "manifold gap 4*K*alpha_sq; expect leakage out of "
                       "the cat manifold")
    if cfg["rate_scale"] > 1.0:
        out.append(f"note: rate_scale={cfg['rate_scale']:g} multiplies every "
                   "bath rate; reported lifetimes shrink by the same factor "
                   "and must be rescaled before comparison with hardware")
    return out


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigInvalid("seed must be a non-negative integer")
        cfg["seed"] = args.seed
    if args.rate_scale is not None:
        if not args.rate_scale >= 1.0:
            raise ConfigInvalid("rate_scale must be >= 1")
        cfg["rate_scale"] = args.rate_scale
    if args.out is not None:
        cfg["output_dir"] = args.out
    record = run_experiment(cfg["experiment"], cfg["parameters"], cfg["seed"],
                            cfg["rate_scale"], Path(cfg["output_dir"]))
    print(f"{cfg['experiment']}: wrote {len(record['files'])} files "
          f"to {cfg['output_dir']} in {record['wall_time_s']}s")
    for key, value in sorted(record["summaries"].items()):
        print(f"  {key}: {value}")
    return 0


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    resolved = dict(REGISTRY[cfg["experiment"]].defaults)
    resolved.update(cfg["parameters"])
    print(f"config OK: experiment={cfg['experiment']} seed={cfg['seed']} "
          f"rate_scale={cfg['rate_scale']:g} output_dir={cfg['output_dir']}")
    for key in sorted(resolved):
        print(f"  {key}: {resolved[key]}")
    for line in diagnostics(cfg):
        print(line)
    return 0


def cmd_list(_args) -> int:
    width = max(len(n) for n in REGISTRY)
    for name in sorted(REGISTRY):
        print(f"{name:<{width}}  {REGISTRY[name].description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrcat",
        description="Kerr-cat qubit simulations: spectra, gates, lifetimes, "
                    "readout, and filter design.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one experiment from a config")
    run.add_argument("--config", required=True, help="YAML config file")
    run.add_argument("--seed", type=int, default=None,
                     help="override the config seed")
    run.add_argument("--rate-scale", type=float, default=None,
                     dest="rate_scale",
                     help="override the config rate_scale (>= 1)")
    run.add_argument("--out", default=None, help="override output_dir")
    run.set_defaults(fn=cmd_run)

    val = sub.add_parser("validate", help="check a config without running")
    val.add_argument("--config", required=True, help="YAML config file")
    val.set_defaults(fn=cmd_validate)

    lst = sub.add_parser("list-experiments", help="show available experiments")
    lst.set_defaults(fn=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigInvalid as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ExperimentFailed as e:
        print(f"run failed: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
