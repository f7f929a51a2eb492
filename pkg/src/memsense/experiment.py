"""Experiment drivers: simulation runs, cost reports, sweeps, Monte Carlo."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .architecture import (
    DEFAULT_CIRCUIT_AREA_UM2,
    DEFAULT_CIRCUIT_POWER_W,
    DEFAULT_ROW_SETTLE_TIME_S,
    ArchitectureKind,
    ArrayGeometry,
    area_report,
    build_architecture,
    circuit_count,
    component_reduction,
    frame_latency,
    power_report,
)
from .circuit import CircuitConfig, PixelPairInput, amplifier_stage, transfer
from .device import MemristorState
from .frame import Frame
from .pgm import load_sequence, save_frame
from .pipeline import (
    DEFAULT_THRESHOLD_V,
    DetectionResult,
    dynamic_difference,
    median_filter,
    threshold_mask,
)
from .scene import SyntheticSceneSpec, generate_scene

SUMMARY_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one simulation run depends on.

    Frames come either from ``inputs`` (image files) or from a synthetic
    scene; with a scene the ground truth is known and detection metrics are
    produced. ``filter_window`` of None disables post-threshold filtering.
    """

    arch: ArchitectureKind = ArchitectureKind.PIXEL_PARALLEL
    variation: float = 0.0
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD_V
    delay: int = 1
    filter_window: int | None = None
    circuit: CircuitConfig = field(default_factory=CircuitConfig)
    inputs: tuple[str, ...] = ()
    scene: SyntheticSceneSpec | None = None
    out_dir: str | None = None
    workers: int = 1
    per_circuit_power: float = DEFAULT_CIRCUIT_POWER_W
    per_circuit_area: float = DEFAULT_CIRCUIT_AREA_UM2
    row_settle_time: float = DEFAULT_ROW_SETTLE_TIME_S

    def __post_init__(self) -> None:
        if not 0.0 <= self.variation < 1.0:
            raise ValueError(f"variation must lie in [0, 1), got {self.variation}")
        if self.delay < 1:
            raise ValueError(f"delay must be at least 1, got {self.delay}")
        if self.threshold < 0:
            raise ValueError(f"threshold must be non-negative, got {self.threshold}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.filter_window not in (None, 3, 5):
            raise ValueError(
                f"filter_window must be None, 3 or 5, got {self.filter_window}"
            )
        if self.inputs and self.scene is not None:
            raise ValueError("give input files or a synthetic scene, not both")

    @property
    def filter_name(self) -> str:
        return "none" if self.filter_window is None else f"median{self.filter_window}"


@dataclass(frozen=True)
class ExperimentResult:
    """In-memory outcome of one run, before anything touches disk."""

    config: ExperimentConfig
    geometry: ArrayGeometry
    frames: list[Frame]
    ground_truth: list[np.ndarray] | None
    differences: list[Frame]
    raw: list[DetectionResult]
    filtered: list[DetectionResult] | None

    @property
    def final(self) -> list[DetectionResult]:
        return self.filtered if self.filtered is not None else self.raw

    def mean_iou(self, filtered: bool | None = None) -> float:
        results = self.final if filtered is None else (
            self.filtered if filtered else self.raw
        )
        if results is None or results[0].metrics is None:
            raise ValueError("no detection metrics; run needs ground truth")
        return float(np.mean([r.metrics.iou for r in results]))

    def summary(self) -> dict:
        cfg = self.config
        frame_metrics = []
        if self.ground_truth is not None:
            for k, result in enumerate(self.final):
                record = {
                    "frame_index": cfg.delay + k,
                    "iou": result.metrics.iou,
                    "pixel_error_rate": result.metrics.pixel_error_rate,
                    "threshold": cfg.threshold,
                    "variation_p": cfg.variation,
                    "seed": cfg.seed,
                }
                if self.filtered is not None:
                    record["iou_unfiltered"] = self.raw[k].metrics.iou
                frame_metrics.append(record)
        aggregate = None
        if frame_metrics:
            ious = [m["iou"] for m in frame_metrics]
            aggregate = {
                "iou_mean": float(np.mean(ious)),
                "iou_min": float(np.min(ious)),
                "iou_max": float(np.max(ious)),
            }
            if self.filtered is not None:
                aggregate["iou_mean_unfiltered"] = self.mean_iou(filtered=False)
        return {
            "schema_version": SUMMARY_SCHEMA_VERSION,
            "architecture": cfg.arch.value,
            "rows": self.geometry.n_rows,
            "cols": self.geometry.n_cols,
            "variation": cfg.variation,
            "seed": cfg.seed,
            "threshold": cfg.threshold,
            "delay": cfg.delay,
            "filter": cfg.filter_name,
            "source": "files" if cfg.inputs else "synthetic",
            "frame_metrics": frame_metrics,
            "aggregate": aggregate,
        }


def _source_frames(config: ExperimentConfig):
    if config.inputs:
        frames = load_sequence(config.inputs)
        return frames, None
    scene = config.scene if config.scene is not None else SyntheticSceneSpec()
    frames, ground_truth = generate_scene(scene, delay=config.delay)
    return frames, ground_truth


def execute(config: ExperimentConfig) -> ExperimentResult:
    """Run the full pipeline in memory.

    Samples devices from the seed, differences the sequence, thresholds,
    optionally median-filters the masks and scores them against the ground
    truth when one exists.
    """
    rng = np.random.default_rng(config.seed)
    frames, ground_truth = _source_frames(config)
    geometry = ArrayGeometry(frames[0].height, frames[0].width)
    arch = build_architecture(
        config.arch,
        geometry,
        config.circuit,
        variation_fraction=config.variation,
        rng=rng,
        state=MemristorState.LOW_RESISTANCE,
        per_circuit_power=config.per_circuit_power,
        per_circuit_area=config.per_circuit_area,
        row_settle_time=config.row_settle_time,
    )
    differences = dynamic_difference(
        frames, arch, config.circuit, delay=config.delay, workers=config.workers
    )
    raw = [threshold_mask(diff, config.threshold) for diff in differences]
    filtered = None
    if config.filter_window is not None:
        filtered = [
            replace(r, mask=median_filter(r.mask, config.filter_window)) for r in raw
        ]
    if ground_truth is not None:
        raw = [r.with_metrics(gt) for r, gt in zip(raw, ground_truth)]
        if filtered is not None:
            filtered = [r.with_metrics(gt) for r, gt in zip(filtered, ground_truth)]
    return ExperimentResult(
        config=config,
        geometry=geometry,
        frames=frames,
        ground_truth=ground_truth,
        differences=differences,
        raw=raw,
        filtered=filtered,
    )


def write_json(document: dict, path) -> None:
    """Stable JSON serialization: sorted keys, trailing newline."""
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def run_experiment(config: ExperimentConfig) -> dict:
    """Execute a run and write frames, masks, summary JSON and a figure.

    Re-running with the same configuration and seed reproduces every output
    byte for byte; file names inside the summary are relative to the output
    directory.
    """
    if config.out_dir is None:
        raise ValueError("run_experiment needs an output directory")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = execute(config)

    outputs = {"differences": [], "masks": [], "ground_truth": []}
    for k, diff in enumerate(result.differences):
        t = config.delay + k
        diff_name = f"diff_{t:03d}.pgm"
        mask_name = f"mask_{t:03d}.pgm"
        save_frame(diff, out / diff_name, "signed_difference")
        save_frame(result.final[k].mask, out / mask_name, "mask")
        outputs["differences"].append(diff_name)
        outputs["masks"].append(mask_name)
        if result.ground_truth is not None:
            gt_name = f"gt_{t:03d}.pgm"
            save_frame(result.ground_truth[k], out / gt_name, "mask")
            outputs["ground_truth"].append(gt_name)

    summary = result.summary()
    summary["outputs"] = outputs
    write_json(summary, out / "summary.json")

    from . import plots

    mid = len(result.differences) // 2
    plots.detection_figure(
        result.frames[config.delay + mid],
        result.differences[mid],
        result.final[mid].mask,
        result.ground_truth[mid] if result.ground_truth is not None else None,
        out / "detection.png",
    )
    return summary


def run_montecarlo(
    config: ExperimentConfig,
    variations: list[float],
    n_seeds: int = 20,
    seed_base: int = 0,
    filter_window: int = 3,
    out_dir=None,
) -> dict:
    """Repeat the experiment over seeds and variation levels.

    Each run is scored twice, with and without the median filter, so the
    aggregate shows what the filtering buys at every mismatch level. Needs a
    synthetic scene (files carry no ground truth).
    """
    if config.inputs:
        raise ValueError("Monte Carlo needs ground truth; use a synthetic scene")
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be at least 1, got {n_seeds}")
    runs = []
    aggregate = {}
    for p in variations:
        unfiltered, filtered = [], []
        for s in range(n_seeds):
            run_config = replace(
                config,
                variation=p,
                seed=seed_base + s,
                filter_window=filter_window,
                out_dir=None,
            )
            result = execute(run_config)
            iou_u = result.mean_iou(filtered=False)
            iou_f = result.mean_iou(filtered=True)
            unfiltered.append(iou_u)
            filtered.append(iou_f)
            runs.append(
                {
                    "variation": p,
                    "seed": seed_base + s,
                    "iou_unfiltered": iou_u,
                    "iou_filtered": iou_f,
                }
            )
        aggregate[f"{p:g}"] = {
            "unfiltered": _stats(unfiltered),
            "filtered": _stats(filtered),
        }
    document = {
        "schema_version": SUMMARY_SCHEMA_VERSION,
        "architecture": config.arch.value,
        "threshold": config.threshold,
        "delay": config.delay,
        "filter": f"median{filter_window}",
        "n_seeds": n_seeds,
        "seed_base": seed_base,
        "variations": list(variations),
        "runs": runs,
        "aggregate": aggregate,
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_montecarlo_csv(runs, out / "montecarlo.csv")
        write_json(document, out / "montecarlo.json")

        from . import plots

        plots.montecarlo_figure(variations, aggregate, out / "iou_vs_variation.png")
    return document


def _stats(values: list[float]) -> dict:
    return {
        "mean": float(np.mean(values)),
        "min": float(np.min(values)),
        "max": float(np.max(values)),
    }


def _write_montecarlo_csv(runs: list[dict], path) -> None:
    lines = ["variation,seed,iou_unfiltered,iou_filtered"]
    for run in runs:
        lines.append(
            f"{run['variation']:.6f},{run['seed']},"
            f"{run['iou_unfiltered']:.6f},{run['iou_filtered']:.6f}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def report_costs(
    kind: ArchitectureKind,
    geometry: ArrayGeometry,
    per_circuit_power: float = DEFAULT_CIRCUIT_POWER_W,
    per_circuit_area: float = DEFAULT_CIRCUIT_AREA_UM2,
    row_settle_time: float = DEFAULT_ROW_SETTLE_TIME_S,
) -> dict:
    """Cost record for one architecture over one geometry."""
    reduction = component_reduction(geometry) * 100.0
    return {
        "architecture": kind.value,
        "n": geometry.n_rows,
        "m": geometry.n_cols,
        "circuits": circuit_count(kind, geometry),
        "power_w": power_report(kind, geometry, per_circuit_power),
        "area_um2": area_report(kind, geometry, per_circuit_area),
        "latency_s": frame_latency(kind, geometry, row_settle_time),
        "reduction_percent": (
            reduction if kind is ArchitectureKind.COLUMN_SEQUENTIAL else 0.0
        ),
    }


def format_cost_table(reports: list[dict]) -> str:
    """Human-readable table for a list of cost records."""
    header = (
        f"{'architecture':<14}{'n':>6}{'m':>6}{'circuits':>10}"
        f"{'power [W]':>14}{'area [um^2]':>16}{'latency [s]':>14}"
        f"{'reduction [%]':>15}"
    )
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r['architecture']:<14}{r['n']:>6}{r['m']:>6}{r['circuits']:>10}"
            f"{r['power_w']:>14.6g}{r['area_um2']:>16.6g}{r['latency_s']:>14.6g}"
            f"{r['reduction_percent']:>15.4f}"
        )
    return "\n".join(lines)


def transfer_sweep(
    config: CircuitConfig,
    v_r: float = 1.0,
    v_ins=None,
) -> list[tuple[float, float, float, float]]:
    """Transfer-curve samples over v_in for both memristor states.

    Each row is (v_in, v_a, v_o with the low-resistance state, v_o with the
    high-resistance state) at the fixed reference voltage v_r.
    """
    if v_ins is None:
        v_ins = np.linspace(0.0, 1.0, 11)
    ron = config.nominal_device(MemristorState.LOW_RESISTANCE)
    roff = config.nominal_device(MemristorState.HIGH_RESISTANCE)
    rows = []
    for v_in in np.asarray(v_ins, dtype=np.float64):
        PixelPairInput(float(v_in), v_r).validate(config)
        rows.append(
            (
                float(v_in),
                float(amplifier_stage(v_in, config)),
                float(transfer(v_in, v_r, ron, config)),
                float(transfer(v_in, v_r, roff, config)),
            )
        )
    return rows


def format_sweep_csv(rows) -> str:
    """Sweep rows as CSV text with six decimal places."""
    lines = ["v_in,v_a,v_o_ron,v_o_roff"]
    for v_in, v_a, v_o_ron, v_o_roff in rows:
        lines.append(f"{v_in:.6f},{v_a:.6f},{v_o_ron:.6f},{v_o_roff:.6f}")
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows, path) -> None:
    Path(path).write_text(format_sweep_csv(rows))
