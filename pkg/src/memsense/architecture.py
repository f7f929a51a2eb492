"""Pixel-parallel and column-sequential array organizations with cost models.

The pixel-parallel architecture gives every pixel its own differencing
circuit (n*m devices). The column-sequential architecture shares n circuits,
one per row, and scans the m columns through an analog row memory; it cuts
the component count by a factor of m at the price of an m-fold latency hit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .circuit import CircuitConfig, transfer_with_resistance
from .device import MemristorDevice, MemristorState, sample_mismatches
from .frame import Frame

# Per-circuit cost defaults for the 180 nm realization of the design.
DEFAULT_CIRCUIT_POWER_W = 0.09664
DEFAULT_CIRCUIT_AREA_UM2 = 531.66
# The settle time is a modelling knob, not a measured figure.
DEFAULT_ROW_SETTLE_TIME_S = 1e-6


class ArchitectureKind(Enum):
    PIXEL_PARALLEL = "parallel"
    COLUMN_SEQUENTIAL = "column"


@dataclass(frozen=True)
class ArrayGeometry:
    """Pixel array size: n_rows x n_cols."""

    n_rows: int
    n_cols: int

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError(f"geometry must be at least 1x1, got {self}")

    @property
    def n_pixels(self) -> int:
        return self.n_rows * self.n_cols


def circuit_count(kind: ArchitectureKind, geometry: ArrayGeometry) -> int:
    """Differencing circuits required by an architecture."""
    if kind is ArchitectureKind.PIXEL_PARALLEL:
        return geometry.n_pixels
    return geometry.n_rows


def component_reduction(geometry: ArrayGeometry) -> float:
    """Fraction of circuits saved by column-sequential sharing: 1 - 1/m."""
    return 1.0 - 1.0 / geometry.n_cols


def power_report(
    kind: ArchitectureKind,
    geometry: ArrayGeometry,
    per_circuit_power: float = DEFAULT_CIRCUIT_POWER_W,
) -> float:
    """Total dissipation in watts: circuit count times per-circuit power."""
    return circuit_count(kind, geometry) * per_circuit_power


def area_report(
    kind: ArchitectureKind,
    geometry: ArrayGeometry,
    per_circuit_area: float = DEFAULT_CIRCUIT_AREA_UM2,
) -> float:
    """Total on-chip area in square micrometers."""
    return circuit_count(kind, geometry) * per_circuit_area


def frame_latency(
    kind: ArchitectureKind,
    geometry: ArrayGeometry,
    row_settle_time: float = DEFAULT_ROW_SETTLE_TIME_S,
) -> float:
    """Seconds to difference one frame pair.

    Pixel-parallel settles every pixel concurrently. Column-sequential steps
    through the m columns with its n shared circuits, so latency scales with
    the sequential dimension.
    """
    if row_settle_time <= 0:
        raise ValueError(f"row_settle_time must be positive, got {row_settle_time}")
    if kind is ArchitectureKind.PIXEL_PARALLEL:
        return row_settle_time
    return geometry.n_cols * row_settle_time


class AnalogRowMemory:
    """Ideal sample-and-hold buffer for one column of row voltages.

    No droop, no write noise; reading before the first write is an error.
    """

    def __init__(self, n_rows: int):
        if n_rows < 1:
            raise ValueError(f"row memory needs at least one cell, got {n_rows}")
        self.n_rows = n_rows
        self.stored_row: np.ndarray | None = None

    @property
    def valid(self) -> bool:
        return self.stored_row is not None

    def write(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.n_rows,):
            raise ValueError(
                f"row memory holds {self.n_rows} values, got shape {values.shape}"
            )
        self.stored_row = values.copy()

    def read(self) -> np.ndarray:
        if self.stored_row is None:
            raise RuntimeError("analog row memory read before any write")
        return self.stored_row.copy()


@dataclass(frozen=True)
class ArrayArchitecture:
    """A device population bound to one of the two array organizations.

    Pixel-parallel holds one device per pixel in row-major order;
    column-sequential holds one device per row, reused across columns.
    """

    kind: ArchitectureKind
    geometry: ArrayGeometry
    devices: tuple[MemristorDevice, ...]
    per_circuit_power: float = DEFAULT_CIRCUIT_POWER_W
    per_circuit_area: float = DEFAULT_CIRCUIT_AREA_UM2
    row_settle_time: float = DEFAULT_ROW_SETTLE_TIME_S

    def __post_init__(self) -> None:
        expected = circuit_count(self.kind, self.geometry)
        if len(self.devices) != expected:
            raise ValueError(
                f"{self.kind.value} architecture over {self.geometry} needs "
                f"{expected} devices, got {len(self.devices)}"
            )
        if self.row_settle_time <= 0:
            raise ValueError("row_settle_time must be positive")

    def circuit_count(self) -> int:
        return circuit_count(self.kind, self.geometry)

    def component_reduction(self) -> float:
        return component_reduction(self.geometry)

    def power_report(self) -> float:
        return power_report(self.kind, self.geometry, self.per_circuit_power)

    def area_report(self) -> float:
        return area_report(self.kind, self.geometry, self.per_circuit_area)

    def frame_latency(self) -> float:
        return frame_latency(self.kind, self.geometry, self.row_settle_time)

    def programmed(self, state: MemristorState) -> "ArrayArchitecture":
        """Program every device to ``state``, mismatches preserved."""
        return replace(self, devices=tuple(d.program(state) for d in self.devices))

    def states(self) -> set[MemristorState]:
        return {d.state for d in self.devices}

    def resistances(self) -> np.ndarray:
        """Effective resistances as a flat array, one entry per device."""
        return np.array([d.effective_resistance() for d in self.devices])

    def _check_frame(self, frame: Frame, name: str) -> None:
        if frame.shape != (self.geometry.n_rows, self.geometry.n_cols):
            raise ValueError(
                f"{name} frame is {frame.height}x{frame.width}, architecture "
                f"expects {self.geometry.n_rows}x{self.geometry.n_cols}"
            )

    def process_frame_pair(
        self, previous: Frame, current: Frame, config: CircuitConfig
    ) -> Frame:
        """Analog difference of a frame pair, per pixel, in volts.

        Pixel (i, j) is evaluated with v_in = current[i, j] and
        v_r = previous[i, j]. Column-sequential reuses row device i for every
        column, so one mismatched device colors the whole row; the previous
        frame's column passes through the analog row memory on that path.
        """
        self._check_frame(previous, "previous")
        self._check_frame(current, "current")
        n, m = self.geometry.n_rows, self.geometry.n_cols
        if self.kind is ArchitectureKind.PIXEL_PARALLEL:
            r_grid = self.resistances().reshape(n, m)
            out = transfer_with_resistance(current.values, previous.values, r_grid, config)
        else:
            r_rows = self.resistances()
            memory = AnalogRowMemory(n)
            out = np.empty((n, m))
            for j in range(m):
                memory.write(previous.values[:, j])
                out[:, j] = transfer_with_resistance(
                    current.values[:, j], memory.read(), r_rows, config
                )
        return Frame.from_voltages(out, (-config.v_dd, config.v_dd))


def build_architecture(
    kind: ArchitectureKind,
    geometry: ArrayGeometry,
    config: CircuitConfig,
    variation_fraction: float = 0.0,
    rng: np.random.Generator | None = None,
    state: MemristorState = MemristorState.LOW_RESISTANCE,
    per_circuit_power: float = DEFAULT_CIRCUIT_POWER_W,
    per_circuit_area: float = DEFAULT_CIRCUIT_AREA_UM2,
    row_settle_time: float = DEFAULT_ROW_SETTLE_TIME_S,
) -> ArrayArchitecture:
    """Sample a device population and bind it to an architecture.

    Pixel-parallel consumes n*m draws from ``rng``, column-sequential n, so
    architectures built from generators with the same seed share their first
    n mismatch values and experiments stay comparable across topologies.
    """
    count = circuit_count(kind, geometry)
    if rng is None:
        if variation_fraction != 0.0:
            raise ValueError("device variation requires a random generator")
        mismatches = np.ones(count)
    else:
        mismatches = sample_mismatches(rng, count, variation_fraction)
    devices = tuple(
        MemristorDevice(config.r_on_nominal, config.r_off_nominal, state, float(f))
        for f in mismatches
    )
    return ArrayArchitecture(
        kind,
        geometry,
        devices,
        per_circuit_power=per_circuit_power,
        per_circuit_area=per_circuit_area,
        row_settle_time=row_settle_time,
    )
