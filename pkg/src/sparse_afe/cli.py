"""Command-line front end: parse a config, run the harness, write CSV/plots.

Exit codes: 0 success, 2 user or config error, 3 output I/O failure,
4 completed but one or more algorithms diverged.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np

from .algorithms import LMS, LMMN, NLMS, ZALMS
from .harness import ExperimentConfig, ExperimentResult, run_experiment, table_presets
from .metrics import to_db

__all__ = [
    "ConfigError",
    "parse_config",
    "serialize_config",
    "emit_csv",
    "emit_plot",
    "main",
    "entrypoint",
]

_NUMBER_FORMAT = "#.9g"

_TOP_LEVEL_KEYS = {
    "channel_length",
    "sparsity_m",
    "snr_db",
    "iterations",
    "trials",
    "master_seed",
    "scenario",
    "change_at",
    "algorithms",
}

_ALGO_TYPES = {
    "lms": (LMS, "LMS", ("mu",)),
    "zalms": (ZALMS, "ZA-LMS", ("mu", "rho")),
    "nlms": (NLMS, "NLMS", ("mu", "eps")),
    "lmmn": (LMMN, "LMMN", ("mu", "alpha0", "gamma", "beta", "delta", "variable")),
}

_REQUIRED_PARAMS = {
    "lms": ("mu",),
    "zalms": ("mu", "rho"),
    "nlms": ("mu",),
    "lmmn": ("mu", "alpha0"),
}


class ConfigError(ValueError):
    """A malformed or invalid experiment configuration."""


def _expect(value, kinds, path, kind_name):
    if isinstance(value, bool) and bool not in kinds:
        raise ConfigError(f"{path}: expected {kind_name}, got a boolean")
    if not isinstance(value, kinds):
        raise ConfigError(f"{path}: expected {kind_name}, got {type(value).__name__}")
    return value


def _block_to_spec(block, index):
    path = f"algorithms[{index}]"
    _expect(block, (dict,), path, "an object")
    kind = block.get("type")
    if kind is None:
        raise ConfigError(f"{path}.type is required")
    if kind not in _ALGO_TYPES:
        raise ConfigError(
            f"{path}.type: unknown algorithm {kind!r}; expected one of {sorted(_ALGO_TYPES)}"
        )
    cls, default_label, allowed = _ALGO_TYPES[kind]
    for key in block:
        if key not in allowed and key not in ("type", "label"):
            raise ConfigError(f"{path}.{key}: unknown key for algorithm type {kind!r}")
    for key in _REQUIRED_PARAMS[kind]:
        if key not in block:
            raise ConfigError(f"{path}.{key} is required for algorithm type {kind!r}")
    kwargs = {}
    for key in allowed:
        if key not in block:
            continue
        if key == "variable":
            kwargs[key] = _expect(block[key], (bool,), f"{path}.{key}", "a boolean")
        else:
            kwargs[key] = float(_expect(block[key], (int, float), f"{path}.{key}", "a number"))
    label = block.get("label", default_label)
    _expect(label, (str,), f"{path}.label", "a string")
    try:
        return str(label), cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _spec_to_block(label, spec) -> dict:
    if isinstance(spec, LMS):
        block = {"type": "lms", "mu": spec.mu}
    elif isinstance(spec, ZALMS):
        block = {"type": "zalms", "mu": spec.mu, "rho": spec.rho}
    elif isinstance(spec, NLMS):
        block = {"type": "nlms", "mu": spec.mu, "eps": spec.eps}
    elif isinstance(spec, LMMN):
        block = {
            "type": "lmmn",
            "mu": spec.mu,
            "alpha0": spec.alpha0,
            "gamma": spec.gamma,
            "beta": spec.beta,
            "delta": spec.delta,
            "variable": spec.variable,
        }
    else:
        raise TypeError(f"unknown algorithm spec: {spec!r}")
    return {"label": label, **block}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment config; unknown keys are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    for key in doc:
        if key not in _TOP_LEVEL_KEYS:
            raise ConfigError(f"unknown key: {key}")
    if "sparsity_m" not in doc:
        raise ConfigError("sparsity_m is required")
    kwargs = {}
    for key in ("channel_length", "sparsity_m", "iterations", "trials", "master_seed", "change_at"):
        if key in doc:
            kwargs[key] = _expect(doc[key], (int,), key, "an integer")
    if "snr_db" in doc:
        kwargs["snr_db"] = float(_expect(doc["snr_db"], (int, float), "snr_db", "a number"))
    if "scenario" in doc:
        kwargs["scenario"] = _expect(doc["scenario"], (str,), "scenario", "a string")
    if "algorithms" in doc:
        blocks = _expect(doc["algorithms"], (list,), "algorithms", "a list")
        if not blocks:
            raise ConfigError("algorithms: must list at least one algorithm")
        kwargs["roster"] = tuple(_block_to_spec(b, i) for i, b in enumerate(blocks))
    try:
        return ExperimentConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(config: ExperimentConfig) -> str:
    """Render a config (with all defaults resolved) back to its JSON document."""
    doc = {
        "channel_length": config.channel_length,
        "sparsity_m": config.sparsity_m,
        "snr_db": config.snr_db,
        "iterations": config.iterations,
        "trials": config.trials,
        "master_seed": config.master_seed,
        "scenario": config.scenario,
        "algorithms": [_spec_to_block(label, spec) for label, spec in config.roster],
    }
    if config.change_at is not None:
        doc["change_at"] = config.change_at
    return json.dumps(doc, indent=2)


def _format(value: float) -> str:
    return format(float(value), _NUMBER_FORMAT)


def emit_csv(result: ExperimentResult, path, linear: bool = False) -> tuple:
    """Write the learning curves and a sidecar summary file.

    The curves file has one row per iteration with one column per algorithm in
    roster order (dB by default); a diverged algorithm's column is all nan. The
    sidecar ``<stem>_summary.csv`` holds per-algorithm summary statistics.
    Output is byte-deterministic: fixed 9-significant-digit formatting, LF line
    endings, UTF-8.
    """
    path = Path(path)
    suffix = "_msd" if linear else "_msd_db"
    n = result.config.iterations
    columns = []
    for algo in result.results:
        if algo.curve is None:
            columns.append(np.full(n, np.nan))
        else:
            columns.append(algo.curve.msd if linear else to_db(algo.curve.msd))
    header = "iteration," + ",".join(f"{algo.label}{suffix}" for algo in result.results)
    lines = [header]
    for k in range(n):
        lines.append(f"{k}," + ",".join(_format(col[k]) for col in columns))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    summary_path = path.with_name(path.stem + "_summary.csv")
    lines = ["label,steady_state_db,convergence_iteration,trials,diverged_trials"]
    for algo in result.results:
        lines.append(
            f"{algo.label},{_format(algo.steady_state_db)},"
            f"{algo.convergence_iteration},{algo.trials},{algo.diverged_trials}"
        )
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path, summary_path


def _curve_figure(series, title):
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "sparse-afe"
    fig, ax = plt.subplots(figsize=(8, 5))
    for label, values in series:
        ax.plot(values, label=label, linewidth=1.2)
    ax.set_xlabel("Iteration")
    ax.set_ylabel("MSD (dB)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def emit_plot(result: ExperimentResult, path) -> Path:
    """Render the ensemble learning curves to a self-contained SVG figure."""
    series = [
        (algo.label, to_db(algo.curve.msd)) for algo in result.results if algo.curve is not None
    ]
    if not series:
        raise ValueError("empty result: no learning curves to plot")
    cfg = result.config
    title = (
        f"{cfg.scenario} scenario, {cfg.channel_length} taps, m={cfg.sparsity_m}, "
        f"SNR {cfg.snr_db:g} dB, {cfg.trials} trials"
    )
    fig = _curve_figure(series, title)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    _close_figure(fig)
    return path


def _close_figure(fig):
    import matplotlib.pyplot as plt

    plt.close(fig)


def _cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    config = parse_config(text)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    result = run_experiment(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves_path, summary_path = emit_csv(result, out_dir / "curves.csv", linear=args.linear)
    written = [curves_path, summary_path]
    if not args.no_plot and any(algo.curve is not None for algo in result.results):
        written.append(emit_plot(result, out_dir / "learning_curves.svg"))
    for algo in result.results:
        if algo.diagnostic:
            print(f"warning: {algo.diagnostic} ({algo.diverged_trials} diverged)", file=sys.stderr)
    print(f"{'algorithm':<12} {'steady dB':>10} {'converged@':>10} {'diverged':>8}")
    for algo in result.results:
        print(
            f"{algo.label:<12} {algo.steady_state_db:>10.2f} "
            f"{algo.convergence_iteration:>10d} {algo.diverged_trials:>8d}"
        )
    for p in written:
        print(f"wrote {p}")
    return 4 if result.any_diverged else 0


def _cmd_presets(args) -> int:
    roster = table_presets(args.sparsity)
    doc = {
        "sparsity_m": args.sparsity,
        "algorithms": [_spec_to_block(label, spec) for label, spec in roster],
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_plot(args) -> int:
    try:
        with open(args.csv, "r", encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read curves file: {exc}") from exc
    if len(header) < 2 or header[0] != "iteration" or data.shape[0] < 1:
        raise ConfigError("curves file does not look like an emitted learning-curve CSV")
    series = []
    for j, name in enumerate(header[1:], start=1):
        label = name
        for suffix in ("_msd_db", "_msd"):
            if label.endswith(suffix):
                label = label[: -len(suffix)]
                break
        series.append((label, data[:, j]))
    fig = _curve_figure(series, Path(args.csv).stem)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg", metadata={"Date": None})
    _close_figure(fig)
    print(f"wrote {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-afe",
        description="Ensemble learning-curve benchmarks for sparse-channel adaptive filters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True, help="path to the experiment config")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None, help="override master_seed")
    run.add_argument("--trials", type=int, default=None, help="override trial count")
    run.add_argument("--no-plot", action="store_true", help="skip the SVG figure")
    run.add_argument(
        "--linear", action="store_true", help="write linear MSD columns instead of dB"
    )

    presets = sub.add_parser("presets", help="print a bundled algorithm roster as JSON")
    presets.add_argument("--sparsity", type=int, required=True, choices=(1, 4))

    plot = sub.add_parser("plot", help="render an emitted curves CSV to SVG")
    plot.add_argument("--csv", required=True, help="curves CSV written by `run`")
    plot.add_argument("--out", required=True, help="output SVG path")
    return parser


def main(argv: Optional[list] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "presets":
            return _cmd_presets(args)
        return _cmd_plot(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
