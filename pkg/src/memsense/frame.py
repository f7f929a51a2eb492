"""Voltage-domain image frames and the gray-level mapping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Full-scale pixel voltage: gray level 255 maps to the 1 V reference level.
FULL_SCALE_VOLTS = 1.0


def pixel_to_voltage(gray):
    """Map gray levels in [0, 255] linearly onto [0, FULL_SCALE_VOLTS]."""
    gray = np.asarray(gray, dtype=np.float64)
    if np.any(gray < 0) or np.any(gray > 255):
        raise ValueError("gray level outside [0, 255]")
    volts = gray / 255.0 * FULL_SCALE_VOLTS
    return float(volts) if volts.ndim == 0 else volts


def voltage_to_pixel(volts):
    """Inverse of pixel_to_voltage: round to the nearest gray level and clamp."""
    volts = np.asarray(volts, dtype=np.float64)
    gray = np.clip(np.rint(volts / FULL_SCALE_VOLTS * 255.0), 0, 255).astype(np.int64)
    return int(gray) if gray.ndim == 0 else gray


@dataclass(frozen=True)
class Frame:
    """Rectangular grid of pixel voltages with range metadata.

    ``values`` is a (height, width) float64 array. ``v_range`` declares the
    interval the values are guaranteed to lie in; exporters use it to scale
    raw output images.
    """

    width: int
    height: int
    values: np.ndarray
    v_range: tuple[float, float] = (0.0, FULL_SCALE_VOLTS)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != (self.height, self.width):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{self.height}x{self.width} geometry"
            )
        v_min, v_max = self.v_range
        if v_min >= v_max:
            raise ValueError(f"empty voltage range {self.v_range}")
        if values.size and (values.min() < v_min or values.max() > v_max):
            raise ValueError(
                f"frame values [{values.min()}, {values.max()}] escape the "
                f"declared range {self.v_range}"
            )

    @classmethod
    def from_voltages(cls, values: np.ndarray, v_range: tuple[float, float]) -> "Frame":
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-d grid, got shape {values.shape}")
        return cls(values.shape[1], values.shape[0], values, v_range)

    @classmethod
    def from_grays(cls, grays: np.ndarray, maxval: int = 255) -> "Frame":
        """Build a frame from integer gray levels in [0, maxval]."""
        grays = np.asarray(grays)
        if maxval < 1:
            raise ValueError(f"maxval must be at least 1, got {maxval}")
        if np.any(grays < 0) or np.any(grays > maxval):
            raise ValueError(f"gray level outside [0, {maxval}]")
        volts = grays.astype(np.float64) / maxval * FULL_SCALE_VOLTS
        return cls.from_voltages(volts, (0.0, FULL_SCALE_VOLTS))

    @classmethod
    def constant(cls, width: int, height: int, volts: float,
                 v_range: tuple[float, float] = (0.0, FULL_SCALE_VOLTS)) -> "Frame":
        return cls(width, height, np.full((height, width), volts), v_range)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)
