"""Analytical transfer function of the two-stage differencing circuit.

Stage one is a non-inverting amplifier with gain 1 + R2/R1. Stage two sums
the reference pixel against the amplified input through the memristor:

    V_o = V_r * (R4/R_m + R4/R3 + 1) - V_a * (R4/R_m)

With the default resistor ladder (R1 = R3 = R4 = 1 kOhm, R2 = 2 kOhm) the
low-resistance state (R_m = 1 kOhm) gives V_o = 3*V_r - 3*V_in and the
high-resistance state (R_m = 100 kOhm) gives V_o = 2.01*V_r - 0.03*V_in.
Outputs saturate at the supply rails.

All functions are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import MemristorDevice, MemristorState

ArrayLike = float | np.ndarray


@dataclass(frozen=True)
class CircuitConfig:
    """Resistor ladder, supply rail and nominal memristor states."""

    r1: float = 1_000.0
    r2: float = 2_000.0
    r3: float = 1_000.0
    r4: float = 1_000.0
    v_dd: float = 4.0
    r_on_nominal: float = 1_000.0
    r_off_nominal: float = 100_000.0

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "r3", "r4", "v_dd", "r_on_nominal", "r_off_nominal"):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.r_off_nominal <= self.r_on_nominal:
            raise ValueError("r_off_nominal must exceed r_on_nominal")

    @property
    def amplifier_gain(self) -> float:
        return 1.0 + self.r2 / self.r1

    def nominal_device(self, state: MemristorState) -> MemristorDevice:
        """A zero-mismatch device matching this configuration's nominals."""
        return MemristorDevice(self.r_on_nominal, self.r_off_nominal, state)


@dataclass(frozen=True)
class PixelPairInput:
    """One current/reference pixel voltage pair feeding the circuit."""

    v_in: float
    v_r: float

    def validate(self, config: CircuitConfig) -> "PixelPairInput":
        for name, value in (("v_in", self.v_in), ("v_r", self.v_r)):
            if not 0.0 <= value <= config.v_dd:
                raise ValueError(
                    f"{name} = {value} V outside the pixel range [0, {config.v_dd}] V"
                )
        return self


def clamp_to_rails(v: ArrayLike, config: CircuitConfig) -> ArrayLike:
    """Limit a voltage to the symmetric supply rails [-v_dd, +v_dd]."""
    return np.clip(v, -config.v_dd, config.v_dd)


def amplifier_stage(v_in: ArrayLike, config: CircuitConfig) -> ArrayLike:
    """Non-inverting amplifier output V_a = v_in * (1 + r2/r1), rail-clamped."""
    return clamp_to_rails(v_in * config.amplifier_gain, config)


def difference_stage(
    v_a: ArrayLike, v_r: ArrayLike, r_m: ArrayLike, config: CircuitConfig
) -> ArrayLike:
    """Memristive difference stage, unclamped.

    Returns v_r * (r4/r_m + r4/r3 + 1) - v_a * (r4/r_m).
    """
    if np.any(np.asarray(r_m) <= 0):
        raise ValueError("memristor resistance must be positive")
    ratio = config.r4 / r_m
    return v_r * (ratio + config.r4 / config.r3 + 1.0) - v_a * ratio


def transfer_with_resistance(
    v_in: ArrayLike, v_r: ArrayLike, r_m: ArrayLike, config: CircuitConfig
) -> ArrayLike:
    """Full two-stage response for an explicit memristor resistance, clamped.

    The vectorized entry point: r_m may be a per-pixel array.
    """
    v_a = amplifier_stage(v_in, config)
    return clamp_to_rails(difference_stage(v_a, v_r, r_m, config), config)


def transfer(
    v_in: ArrayLike, v_r: ArrayLike, device: MemristorDevice, config: CircuitConfig
) -> ArrayLike:
    """Full two-stage response through ``device``'s effective resistance."""
    return transfer_with_resistance(v_in, v_r, device.effective_resistance(), config)


def transfer_pair(
    pair: PixelPairInput, device: MemristorDevice, config: CircuitConfig
) -> float:
    """Validated scalar transfer for one pixel pair."""
    pair.validate(config)
    return float(transfer(pair.v_in, pair.v_r, device, config))
