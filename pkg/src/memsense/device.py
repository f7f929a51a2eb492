"""Two-state memristor model with bounded multiplicative mismatch."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class MemristorState(Enum):
    """Programmable resistance state of a memristor."""

    LOW_RESISTANCE = "low"
    HIGH_RESISTANCE = "high"


@dataclass(frozen=True)
class MemristorDevice:
    """A memristor reduced to a programmable two-state resistor.

    The device carries nominal resistances for both states plus a single
    multiplicative mismatch factor modelling programming error. The mismatch
    is fixed for the lifetime of the device: reprogramming the state never
    resamples it, and both states share the same factor.
    """

    r_on_nominal: float
    r_off_nominal: float
    state: MemristorState
    mismatch: float = 1.0

    def __post_init__(self) -> None:
        if self.r_on_nominal <= 0:
            raise ValueError(f"r_on_nominal must be positive, got {self.r_on_nominal}")
        if self.r_off_nominal <= self.r_on_nominal:
            raise ValueError(
                f"r_off_nominal ({self.r_off_nominal}) must exceed "
                f"r_on_nominal ({self.r_on_nominal})"
            )
        if self.mismatch <= 0:
            raise ValueError(f"mismatch must be positive, got {self.mismatch}")

    def program(self, state: MemristorState) -> "MemristorDevice":
        """Return a copy programmed to ``state``; nominals and mismatch kept."""
        return replace(self, state=state)

    def effective_resistance(self) -> float:
        """Resistance presented by the current state, mismatch applied."""
        nominal = (
            self.r_on_nominal
            if self.state is MemristorState.LOW_RESISTANCE
            else self.r_off_nominal
        )
        return nominal * self.mismatch


def _check_variation(variation_fraction: float) -> None:
    # p >= 1 would admit zero or negative resistance
    if not 0.0 <= variation_fraction < 1.0:
        raise ValueError(
            f"variation fraction must lie in [0, 1), got {variation_fraction}"
        )


def sample_mismatch(rng: np.random.Generator, variation_fraction: float) -> float:
    """Draw one mismatch factor, uniform on [1 - p, 1 + p]."""
    _check_variation(variation_fraction)
    return float(rng.uniform(1.0 - variation_fraction, 1.0 + variation_fraction))


def sample_mismatches(
    rng: np.random.Generator, count: int, variation_fraction: float
) -> np.ndarray:
    """Draw ``count`` mismatch factors from the same stream as sample_mismatch.

    The vectorized draw consumes the generator identically to ``count``
    successive scalar draws, so device populations built from a shared seed
    stay comparable regardless of how many devices each architecture needs.
    """
    _check_variation(variation_fraction)
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    return rng.uniform(1.0 - variation_fraction, 1.0 + variation_fraction, size=count)
