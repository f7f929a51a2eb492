"""Behavioral simulator for a memristive analog frame-differencing sensor.

The model covers a two-state memristor device with multiplicative mismatch,
the op-amp pixel circuit built around it, pixel-parallel and
column-sequential array architectures, and a moving-object detection
pipeline with seeded Monte Carlo experiments on top.
"""

from .architecture import (
    DEFAULT_CIRCUIT_AREA_UM2,
    DEFAULT_CIRCUIT_POWER_W,
    DEFAULT_ROW_SETTLE_TIME_S,
    AnalogRowMemory,
    ArchitectureKind,
    ArrayArchitecture,
    ArrayGeometry,
    area_report,
    build_architecture,
    circuit_count,
    component_reduction,
    frame_latency,
    power_report,
)
from .circuit import (
    CircuitConfig,
    PixelPairInput,
    amplifier_stage,
    clamp_to_rails,
    difference_stage,
    transfer,
    transfer_pair,
    transfer_with_resistance,
)
from .device import (
    MemristorDevice,
    MemristorState,
    sample_mismatch,
    sample_mismatches,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    execute,
    format_cost_table,
    report_costs,
    run_experiment,
    run_montecarlo,
    transfer_sweep,
    write_sweep_csv,
)
from .frame import FULL_SCALE_VOLTS, Frame, pixel_to_voltage, voltage_to_pixel
from .pgm import PgmError, load_sequence, read_pgm, save_frame, write_pgm
from .pipeline import (
    DEFAULT_THRESHOLD_V,
    DetectionMetrics,
    DetectionResult,
    dynamic_difference,
    iou,
    median_filter,
    neighborhood_similarity,
    pixel_error_rate,
    static_mode,
    threshold_mask,
)
from .scene import SyntheticSceneSpec, generate_scene

__version__ = "0.1.0"

__all__ = [
    "AnalogRowMemory",
    "ArchitectureKind",
    "ArrayArchitecture",
    "ArrayGeometry",
    "CircuitConfig",
    "DEFAULT_CIRCUIT_AREA_UM2",
    "DEFAULT_CIRCUIT_POWER_W",
    "DEFAULT_ROW_SETTLE_TIME_S",
    "DEFAULT_THRESHOLD_V",
    "DetectionMetrics",
    "DetectionResult",
    "ExperimentConfig",
    "ExperimentResult",
    "FULL_SCALE_VOLTS",
    "Frame",
    "MemristorDevice",
    "MemristorState",
    "PgmError",
    "PixelPairInput",
    "SyntheticSceneSpec",
    "amplifier_stage",
    "area_report",
    "build_architecture",
    "circuit_count",
    "clamp_to_rails",
    "component_reduction",
    "difference_stage",
    "dynamic_difference",
    "execute",
    "format_cost_table",
    "frame_latency",
    "generate_scene",
    "iou",
    "load_sequence",
    "median_filter",
    "neighborhood_similarity",
    "pixel_error_rate",
    "pixel_to_voltage",
    "power_report",
    "read_pgm",
    "report_costs",
    "run_experiment",
    "run_montecarlo",
    "sample_mismatch",
    "sample_mismatches",
    "save_frame",
    "static_mode",
    "threshold_mask",
    "transfer",
    "transfer_pair",
    "transfer_sweep",
    "transfer_with_resistance",
    "voltage_to_pixel",
    "write_pgm",
    "write_sweep_csv",
    "__version__",
]
