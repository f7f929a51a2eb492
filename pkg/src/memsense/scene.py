"""Synthetic moving-rectangle scenes with known ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .architecture import ArrayGeometry
from .frame import Frame


@dataclass(frozen=True)
class SyntheticSceneSpec:
    """A rectangle translating at constant velocity over a flat background.

    Velocities are integer pixels per frame. The object must stay fully
    inside the frame for the whole sequence.
    """

    geometry: ArrayGeometry = field(default_factory=lambda: ArrayGeometry(64, 64))
    object_rows: int = 16
    object_cols: int = 16
    start_row: int = 24
    start_col: int = 8
    velocity_rows: int = 0
    velocity_cols: int = 2
    frame_count: int = 10
    foreground: int = 255
    background: int = 0

    def __post_init__(self) -> None:
        if self.object_rows < 1 or self.object_cols < 1:
            raise ValueError("object must be at least 1x1")
        if self.frame_count < 1:
            raise ValueError(f"frame_count must be at least 1, got {self.frame_count}")
        for name in ("foreground", "background"):
            level = getattr(self, name)
            if not 0 <= level <= 255:
                raise ValueError(f"{name} gray level {level} outside [0, 255]")
        for t in (0, self.frame_count - 1):
            top, left = self.position(t)
            if (top < 0 or left < 0
                    or top + self.object_rows > self.geometry.n_rows
                    or left + self.object_cols > self.geometry.n_cols):
                raise ValueError(
                    f"object leaves the {self.geometry.n_rows}x"
                    f"{self.geometry.n_cols} frame at t={t} "
                    f"(top-left {top},{left})"
                )

    def position(self, t: int) -> tuple[int, int]:
        """Top-left corner of the object at frame t."""
        return (self.start_row + t * self.velocity_rows,
                self.start_col + t * self.velocity_cols)

    def footprint(self, t: int) -> np.ndarray:
        """Boolean object mask at frame t."""
        mask = np.zeros((self.geometry.n_rows, self.geometry.n_cols), dtype=bool)
        top, left = self.position(t)
        mask[top:top + self.object_rows, left:left + self.object_cols] = True
        return mask


def generate_scene(
    spec: SyntheticSceneSpec, delay: int = 1, rng=None
) -> tuple[list[Frame], list[np.ndarray]]:
    """Render the scene and its ground-truth motion masks.

    Returns frame_count frames and frame_count - delay masks; mask k marks
    the symmetric difference of the object footprints at frames k + delay
    and k, matching the differencing pipeline's output alignment. The scene
    is deterministic; ``rng`` is accepted for interface parity and unused.
    """
    if delay < 0:
        raise ValueError(f"delay must be non-negative, got {delay}")
    frames = []
    for t in range(spec.frame_count):
        grays = np.full(
            (spec.geometry.n_rows, spec.geometry.n_cols),
            spec.background,
            dtype=np.int64,
        )
        grays[spec.footprint(t)] = spec.foreground
        frames.append(Frame.from_grays(grays))
    ground_truth = [
        spec.footprint(t) ^ spec.footprint(t - delay)
        for t in range(delay, spec.frame_count)
    ]
    return frames, ground_truth
