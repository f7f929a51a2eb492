"""End-to-end image-sequence processing: differencing, masks and metrics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .architecture import ArrayArchitecture
from .circuit import CircuitConfig, transfer_with_resistance
from .device import MemristorState
from .frame import Frame

# Detection threshold default: half the full-scale difference swing at the
# nominal gain of 3, so a full-contrast moving pixel clears it even with a
# 30% mismatched device (3/1.3 is still above 1.5 V).
DEFAULT_THRESHOLD_V = 1.5

_WINDOW_SIZES = (3, 5)


@dataclass(frozen=True)
class DetectionMetrics:
    iou: float
    pixel_error_rate: float


@dataclass(frozen=True)
class DetectionResult:
    """Binary detection mask plus the analog difference it came from."""

    difference: Frame
    mask: np.ndarray
    threshold: float
    metrics: DetectionMetrics | None = None

    def with_metrics(self, ground_truth: np.ndarray) -> "DetectionResult":
        metrics = DetectionMetrics(
            iou=iou(self.mask, ground_truth),
            pixel_error_rate=pixel_error_rate(self.mask, ground_truth),
        )
        return replace(self, metrics=metrics)


def _check_window(window: int) -> None:
    if window not in _WINDOW_SIZES:
        raise ValueError(f"window must be one of {_WINDOW_SIZES}, got {window}")


def dynamic_difference(
    sequence: list[Frame],
    arch: ArrayArchitecture,
    config: CircuitConfig,
    delay: int = 1,
    workers: int = 1,
) -> list[Frame]:
    """Difference each frame against the one ``delay`` steps earlier.

    output[k] compares sequence[k + delay] against sequence[k], so the result
    has len(sequence) - delay frames. All devices must be in the
    low-resistance (differencing) state. ``workers`` > 1 evaluates frame
    pairs concurrently; results are ordered by index either way.
    """
    if delay < 1:
        raise ValueError(f"delay must be at least 1 frame, got {delay}")
    if len(sequence) <= delay:
        raise ValueError(
            f"need more than {delay} frames for delay={delay}, got {len(sequence)}"
        )
    if arch.states() != {MemristorState.LOW_RESISTANCE}:
        raise ValueError("dynamic differencing expects all devices in the "
                         "low-resistance state")

    def pair(t: int) -> Frame:
        return arch.process_frame_pair(sequence[t - delay], sequence[t], config)

    indices = range(delay, len(sequence))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(pair, indices))
    return [pair(t) for t in indices]


def static_mode(
    background: Frame,
    input_frame: Frame,
    state: MemristorState,
    arch: ArrayArchitecture,
    config: CircuitConfig,
) -> Frame:
    """Single-frame processing against a stored background.

    The memristor state selects the function: low resistance subtracts the
    input from the background, high resistance passes the background through
    nearly untouched (input sensitivity 100x smaller).
    """
    return arch.programmed(state).process_frame_pair(background, input_frame, config)


def neighborhood_similarity(frame: Frame, window: int, config: CircuitConfig) -> Frame:
    """Average circuit response of each pixel against its window neighbors.

    Each neighbor is fed as v_in against the center pixel as v_r through a
    nominal low-resistance device; the score is the mean over the window's
    8 (or 24) neighbors. Borders use replicate padding.
    """
    _check_window(window)
    if frame.height < window or frame.width < window:
        raise ValueError(
            f"frame {frame.height}x{frame.width} is smaller than the "
            f"{window}x{window} window"
        )
    pad = window // 2
    h, w = frame.shape
    padded = np.pad(frame.values, pad, mode="edge")
    acc = np.zeros((h, w))
    for di in range(-pad, pad + 1):
        for dj in range(-pad, pad + 1):
            if di == 0 and dj == 0:
                continue
            neighbor = padded[pad + di:pad + di + h, pad + dj:pad + dj + w]
            acc += transfer_with_resistance(
                neighbor, frame.values, config.r_on_nominal, config
            )
    scores = acc / (window * window - 1)
    return Frame.from_voltages(scores, (-config.v_dd, config.v_dd))


def threshold_mask(difference: Frame, threshold: float) -> DetectionResult:
    """Mark pixels whose absolute difference reaches the threshold."""
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    mask = np.abs(difference.values) >= threshold
    return DetectionResult(difference=difference, mask=mask, threshold=threshold)


def median_filter(data, window: int):
    """Median over a window x window neighborhood with replicate padding.

    Accepts a Frame, a boolean mask (where the median is a majority vote) or
    a float array, and returns the same type.
    """
    _check_window(window)
    if isinstance(data, Frame):
        filtered = ndimage.median_filter(data.values, size=window, mode="nearest")
        return Frame.from_voltages(filtered, data.v_range)
    data = np.asarray(data)
    if data.dtype == bool:
        return ndimage.median_filter(data.astype(np.uint8), size=window,
                                     mode="nearest").astype(bool)
    return ndimage.median_filter(data, size=window, mode="nearest")


def iou(mask: np.ndarray, ground_truth: np.ndarray) -> float:
    """Intersection over union of two binary masks; 1.0 when both are empty."""
    mask = np.asarray(mask, dtype=bool)
    ground_truth = np.asarray(ground_truth, dtype=bool)
    if mask.shape != ground_truth.shape:
        raise ValueError(
            f"mask shape {mask.shape} does not match ground truth "
            f"{ground_truth.shape}"
        )
    union = np.logical_or(mask, ground_truth).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(mask, ground_truth).sum() / union)


def pixel_error_rate(mask: np.ndarray, ground_truth: np.ndarray) -> float:
    """Fraction of pixels where the mask disagrees with the ground truth."""
    mask = np.asarray(mask, dtype=bool)
    ground_truth = np.asarray(ground_truth, dtype=bool)
    if mask.shape != ground_truth.shape:
        raise ValueError(
            f"mask shape {mask.shape} does not match ground truth "
            f"{ground_truth.shape}"
        )
    return float(np.mean(mask != ground_truth))
