"""Command line interface.

Subcommands: simulate, scene, sweep, report, montecarlo. Settings resolve
as CLI flag, then config file, then the MEMSENSE_SEED variable (seed only),
then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .architecture import ArchitectureKind, ArrayGeometry
from .circuit import CircuitConfig
from .experiment import (
    ExperimentConfig,
    format_cost_table,
    format_sweep_csv,
    report_costs,
    run_experiment,
    run_montecarlo,
    transfer_sweep,
    write_json,
    write_sweep_csv,
)
from .pgm import save_frame
from .pipeline import DEFAULT_THRESHOLD_V
from .scene import SyntheticSceneSpec, generate_scene

SEED_ENV_VAR = "MEMSENSE_SEED"

_FILTER_WINDOWS = {"none": None, "median3": 3, "median5": 5}

# keys accepted in a config file; each one is also a CLI flag that wins
_CONFIG_KEYS = (
    "arch",
    "rows",
    "cols",
    "variation",
    "seed",
    "threshold",
    "delay",
    "filter",
    "workers",
    "out",
)


def parse_config_file(path) -> dict[str, str]:
    """Read flat `key = value` settings with # comments."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc.strerror or exc}")
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        entries[key] = value
    return entries


def _cast_int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"config key {key!r} expects an integer, got {text!r}") from None


def _cast_float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"config key {key!r} expects a number, got {text!r}") from None


def _cast_str(text: str, key: str) -> str:
    return text


def _env_seed() -> int | None:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _common_settings(args) -> dict:
    file_values = (
        parse_config_file(args.config) if getattr(args, "config", None) else {}
    )

    def pick(key, cast, default):
        value = getattr(args, key, None)
        if value is not None:
            return value
        if key in file_values:
            return cast(file_values[key], key)
        return default

    seed = pick("seed", _cast_int, None)
    if seed is None:
        seed = _env_seed()
    if seed is None:
        seed = 0

    raw_filter = pick("filter", _cast_str, None)
    if raw_filter is not None and raw_filter not in _FILTER_WINDOWS:
        raise ValueError(
            f"filter must be one of {', '.join(_FILTER_WINDOWS)}, got {raw_filter!r}"
        )

    raw_arch = pick("arch", _cast_str, None)
    if raw_arch is None:
        arch = ArchitectureKind.PIXEL_PARALLEL
    else:
        try:
            arch = ArchitectureKind(raw_arch)
        except ValueError:
            raise ValueError(
                f"arch must be 'parallel' or 'column', got {raw_arch!r}"
            ) from None

    return {
        "arch": arch,
        "arch_given": raw_arch is not None,
        "rows": pick("rows", _cast_int, 64),
        "cols": pick("cols", _cast_int, 64),
        "variation": pick("variation", _cast_float, 0.0),
        "seed": seed,
        "threshold": pick("threshold", _cast_float, DEFAULT_THRESHOLD_V),
        "delay": pick("delay", _cast_int, 1),
        "raw_filter": raw_filter,
        "filter_window": _FILTER_WINDOWS[raw_filter] if raw_filter else None,
        "workers": pick("workers", _cast_int, 1),
        "out": pick("out", _cast_str, None),
    }


def _cmd_simulate(args) -> int:
    s = _common_settings(args)
    if s["out"] is None:
        raise ValueError("simulate needs an output directory (--out)")
    inputs = tuple(args.input or ())
    scene = None
    if not inputs:
        scene = SyntheticSceneSpec(geometry=ArrayGeometry(s["rows"], s["cols"]))
    config = ExperimentConfig(
        arch=s["arch"],
        variation=s["variation"],
        seed=s["seed"],
        threshold=s["threshold"],
        delay=s["delay"],
        filter_window=s["filter_window"],
        inputs=inputs,
        scene=scene,
        out_dir=s["out"],
        workers=s["workers"],
    )
    summary = run_experiment(config)
    print(f"wrote {Path(s['out']) / 'summary.json'}")
    aggregate = summary["aggregate"]
    if aggregate is not None:
        print(
            f"mean IoU {aggregate['iou_mean']:.4f} "
            f"(min {aggregate['iou_min']:.4f}, max {aggregate['iou_max']:.4f})"
        )
    else:
        print("no ground truth available; detection metrics skipped")
    return 0


def _cmd_scene(args) -> int:
    s = _common_settings(args)
    if s["out"] is None:
        raise ValueError("scene needs an output directory (--out)")
    spec = SyntheticSceneSpec(
        geometry=ArrayGeometry(s["rows"], s["cols"]),
        object_rows=args.object_rows,
        object_cols=args.object_cols,
        start_row=args.start_row,
        start_col=args.start_col,
        velocity_rows=args.velocity_rows,
        velocity_cols=args.velocity_cols,
        frame_count=args.frames,
        foreground=args.foreground,
        background=args.background,
    )
    frames, ground_truth = generate_scene(spec, delay=s["delay"])
    out = Path(s["out"])
    out.mkdir(parents=True, exist_ok=True)
    for t, frame in enumerate(frames):
        save_frame(frame, out / f"frame_{t:03d}.pgm", "raw")
    for k, gt in enumerate(ground_truth):
        save_frame(gt, out / f"gt_{s['delay'] + k:03d}.pgm", "mask")
    print(
        f"wrote {len(frames)} frames and {len(ground_truth)} "
        f"ground-truth masks to {out}"
    )
    return 0


def _cmd_sweep(args) -> int:
    s = _common_settings(args)
    if args.points < 2:
        raise ValueError(f"sweep needs at least 2 points, got {args.points}")
    rows = transfer_sweep(
        CircuitConfig(), v_r=args.v_r, v_ins=np.linspace(0.0, 1.0, args.points)
    )
    if s["out"] is None:
        sys.stdout.write(format_sweep_csv(rows))
        return 0
    out = Path(s["out"])
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, out / "sweep.csv")

    from . import plots

    plots.sweep_figure(rows, out / "sweep.png")
    print(f"wrote {out / 'sweep.csv'} and {out / 'sweep.png'}")
    return 0


def _cmd_report(args) -> int:
    s = _common_settings(args)
    geometry = ArrayGeometry(s["rows"], s["cols"])
    if s["arch_given"]:
        kinds = [s["arch"]]
    else:
        kinds = [ArchitectureKind.PIXEL_PARALLEL, ArchitectureKind.COLUMN_SEQUENTIAL]
    reports = [report_costs(kind, geometry) for kind in kinds]
    document = {"schema_version": "1", "reports": reports}
    print(format_cost_table(reports))
    print(json.dumps(document, indent=2, sort_keys=True))
    if s["out"] is not None:
        out = Path(s["out"])
        out.mkdir(parents=True, exist_ok=True)
        write_json(document, out / "costs.json")

        from . import plots

        plots.cost_figure(reports, out / "costs.png")
        print(f"wrote {out / 'costs.json'} and {out / 'costs.png'}")
    return 0


def _cmd_montecarlo(args) -> int:
    s = _common_settings(args)
    variations = [float(tok) for tok in args.variations.split(",") if tok.strip()]
    if not variations:
        raise ValueError("no variation levels given")
    if s["raw_filter"] == "none":
        raise ValueError("montecarlo compares median filtering; use median3 or median5")
    window = s["filter_window"] if s["filter_window"] is not None else 3
    config = ExperimentConfig(
        arch=s["arch"],
        threshold=s["threshold"],
        delay=s["delay"],
        scene=SyntheticSceneSpec(geometry=ArrayGeometry(s["rows"], s["cols"])),
        workers=s["workers"],
    )
    document = run_montecarlo(
        config,
        variations,
        n_seeds=args.seeds,
        seed_base=s["seed"],
        filter_window=window,
        out_dir=s["out"],
    )
    for p in variations:
        level = document["aggregate"][f"{p:g}"]
        print(
            f"p={p:.2f}  IoU unfiltered mean {level['unfiltered']['mean']:.4f}  "
            f"filtered mean {level['filtered']['mean']:.4f}"
        )
    if s["out"] is not None:
        out = Path(s["out"])
        print(f"wrote {out / 'montecarlo.csv'}, {out / 'montecarlo.json'} and "
              f"{out / 'iou_vs_variation.png'}")
    return 0


def _add_config_flag(p) -> None:
    p.add_argument("--config", metavar="FILE", help="flat 'key = value' settings file")


def _add_geometry_flags(p) -> None:
    p.add_argument("--rows", type=int, help="array rows (default 64)")
    p.add_argument("--cols", type=int, help="array columns (default 64)")


def _add_arch_flag(p) -> None:
    p.add_argument(
        "--arch",
        choices=["parallel", "column"],
        help="array architecture (default parallel)",
    )


def _add_out_flag(p, required_note: str = "") -> None:
    p.add_argument("--out", metavar="DIR", help=f"output directory{required_note}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memsense",
        description="Behavioral simulator for an analog frame-differencing "
        "pixel sensor built on two-state memristive circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the detection pipeline and write outputs")
    _add_config_flag(p)
    _add_arch_flag(p)
    _add_geometry_flags(p)
    p.add_argument("--variation", type=float, help="device mismatch fraction in [0,1)")
    p.add_argument("--seed", type=int, help="random seed (default MEMSENSE_SEED or 0)")
    p.add_argument("--threshold", type=float, help="detection threshold in volts")
    p.add_argument("--delay", type=int, help="frame delay for differencing (default 1)")
    p.add_argument(
        "--filter",
        choices=sorted(_FILTER_WINDOWS),
        help="mask post-filter (default none)",
    )
    p.add_argument("--workers", type=int, help="thread count for frame pairs")
    p.add_argument(
        "--input",
        nargs="+",
        metavar="IMAGE",
        help="input image sequence (PGM; PNG with the png extra); "
        "omit to use the built-in synthetic scene",
    )
    _add_out_flag(p, " (required)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("scene", help="write a synthetic scene and its ground truth")
    _add_config_flag(p)
    _add_geometry_flags(p)
    p.add_argument("--object-rows", type=int, default=16)
    p.add_argument("--object-cols", type=int, default=16)
    p.add_argument("--start-row", type=int, default=24)
    p.add_argument("--start-col", type=int, default=8)
    p.add_argument("--velocity-rows", type=int, default=0, help="rows per frame")
    p.add_argument("--velocity-cols", type=int, default=2, help="columns per frame")
    p.add_argument("--frames", type=int, default=10)
    p.add_argument("--foreground", type=int, default=255)
    p.add_argument("--background", type=int, default=0)
    p.add_argument("--delay", type=int, help="ground-truth frame delay (default 1)")
    _add_out_flag(p, " (required)")
    p.set_defaults(func=_cmd_scene)

    p = sub.add_parser("sweep", help="transfer-curve CSV over the input range")
    _add_config_flag(p)
    p.add_argument("--v-r", type=float, default=1.0, help="reference voltage (default 1.0)")
    p.add_argument("--points", type=int, default=11, help="sample count (default 11)")
    _add_out_flag(p, " (omit to print CSV)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", help="circuit count, power, area and latency")
    _add_config_flag(p)
    _add_arch_flag(p)
    _add_geometry_flags(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("montecarlo", help="detection quality over seeds and variation")
    _add_config_flag(p)
    _add_arch_flag(p)
    _add_geometry_flags(p)
    p.add_argument("--threshold", type=float, help="detection threshold in volts")
    p.add_argument("--delay", type=int, help="frame delay for differencing")
    p.add_argument(
        "--filter",
        choices=sorted(_FILTER_WINDOWS),
        help="median window for the filtered column (default median3)",
    )
    p.add_argument("--seed", type=int, help="base seed; runs use seed..seed+seeds-1")
    p.add_argument("--seeds", type=int, default=20, help="seeds per level (default 20)")
    p.add_argument(
        "--variations",
        default="0.1,0.2,0.3,0.4,0.5",
        help="comma-separated mismatch fractions",
    )
    p.add_argument("--workers", type=int, help="thread count for frame pairs")
    _add_out_flag(p)
    p.set_defaults(func=_cmd_montecarlo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
