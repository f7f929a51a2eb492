"""Minimal PGM codec plus frame import/export.

Reads both ASCII (P2) and binary (P5) portable graymaps; writes binary P5
with maxval 255. Parse errors name the offending file and byte offset.
PNG import is an optional convenience and needs Pillow.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .frame import Frame

# Full-scale analog difference at the default gain of 3; the signed export
# mode maps [-3 V, +3 V] onto [0, 255] with 0 V at gray 128.
SIGNED_DIFFERENCE_SPAN_V = 3.0

SAVE_MODES = ("signed_difference", "mask", "raw")

_WHITESPACE = frozenset(b" \t\r\n\x0b\x0c")


class PgmError(ValueError):
    """Malformed or unsupported image file."""


class _Scanner:
    """Tokenizer over a PNM header that tracks byte offsets for errors."""

    def __init__(self, data: bytes, path: str):
        self.data = data
        self.pos = 0
        self.path = path

    def fail(self, message: str, offset: int | None = None) -> PgmError:
        where = self.pos if offset is None else offset
        return PgmError(f"{self.path}: {message} at byte {where}")

    def skip_space(self) -> None:
        data = self.data
        while self.pos < len(data):
            byte = data[self.pos]
            if byte in _WHITESPACE:
                self.pos += 1
            elif byte == ord("#"):
                # comment runs to end of line
                while self.pos < len(data) and data[self.pos] not in (10, 13):
                    self.pos += 1
            else:
                break

    def next_token(self, what: str) -> tuple[bytes, int]:
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos] not in _WHITESPACE:
            self.pos += 1
        if self.pos == start:
            raise self.fail(f"missing {what}", start)
        return data[start:self.pos], start

    def next_int(self, what: str, lo: int, hi: int) -> int:
        token, start = self.next_token(what)
        try:
            value = int(token)
        except ValueError:
            raise self.fail(f"{what} is not an integer: {token!r}", start) from None
        if not lo <= value <= hi:
            raise self.fail(f"{what} {value} outside [{lo}, {hi}]", start)
        return value


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Decode a P2 or P5 file into (gray grid, maxval).

    The grid is a (height, width) integer array with values in [0, maxval].
    """
    path = os.fspath(path)
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise PgmError(f"{path}: cannot read file ({exc})") from exc
    scanner = _Scanner(data, path)
    magic, magic_at = scanner.next_token("magic number")
    if magic not in (b"P2", b"P5"):
        raise scanner.fail(f"unsupported magic {magic!r}, expected P2 or P5", magic_at)
    width = scanner.next_int("width", 1, 1 << 20)
    height = scanner.next_int("height", 1, 1 << 20)
    maxval = scanner.next_int("maxval", 1, 65535)
    count = width * height

    if magic == b"P5":
        if scanner.pos >= len(data) or data[scanner.pos] not in _WHITESPACE:
            raise scanner.fail("expected single whitespace byte after maxval")
        scanner.pos += 1
        sample_bytes = 1 if maxval < 256 else 2
        needed = count * sample_bytes
        raster = data[scanner.pos:scanner.pos + needed]
        if len(raster) < needed:
            raise scanner.fail(
                f"raster truncated: expected {needed} bytes, found {len(raster)}"
            )
        dtype = np.uint8 if sample_bytes == 1 else np.dtype(">u2")
        grays = np.frombuffer(raster, dtype=dtype).astype(np.int64)
        bad = np.nonzero(grays > maxval)[0]
        if bad.size:
            offset = scanner.pos + int(bad[0]) * sample_bytes
            raise scanner.fail(f"sample value {grays[bad[0]]} exceeds maxval {maxval}",
                               offset)
    else:
        grays = np.empty(count, dtype=np.int64)
        for k in range(count):
            grays[k] = scanner.next_int(f"sample {k}", 0, maxval)
    return grays.reshape(height, width), maxval


def write_pgm(path, grays: np.ndarray) -> None:
    """Write a (height, width) grid of gray levels in [0, 255] as binary P5."""
    grays = np.asarray(grays)
    if grays.ndim != 2:
        raise ValueError(f"expected a 2-d gray grid, got shape {grays.shape}")
    if np.any(grays < 0) or np.any(grays > 255):
        raise ValueError("gray level outside [0, 255]")
    height, width = grays.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + grays.astype(np.uint8).tobytes())


def _read_png(path) -> tuple[np.ndarray, int]:
    try:
        from PIL import Image
    except ImportError:
        raise PgmError(
            f"{path}: PNG support needs Pillow (pip install memsense[png])"
        ) from None
    with Image.open(path) as img:
        grays = np.asarray(img.convert("L"), dtype=np.int64)
    return grays, 255


def load_sequence(paths) -> list[Frame]:
    """Decode a sequence of grayscale images into voltage frames.

    All images must share one geometry; gray levels map linearly onto
    [0, 1 V] by their own maxval.
    """
    paths = [os.fspath(p) for p in paths]
    if not paths:
        raise PgmError("no input files given")
    frames: list[Frame] = []
    for path in paths:
        if path.lower().endswith(".png"):
            grays, maxval = _read_png(path)
        else:
            grays, maxval = read_pgm(path)
        if frames:
            first = frames[0]
            if grays.shape != first.shape:
                raise PgmError(
                    f"{path}: frame is {grays.shape[0]}x{grays.shape[1]}, "
                    f"expected {first.height}x{first.width} like {paths[0]}"
                )
        frames.append(Frame.from_grays(grays, maxval))
    return frames


def save_frame(frame, path, mode: str) -> None:
    """Export a frame or mask as an 8-bit P5 image.

    signed_difference maps [-3 V, +3 V] linearly to [0, 255] (0 V at 128),
    mask maps false/true to 0/255, raw maps the frame's declared voltage
    range to [0, 255].
    """
    if mode not in SAVE_MODES:
        raise ValueError(f"mode must be one of {SAVE_MODES}, got {mode!r}")
    if mode == "mask":
        values = frame.values if isinstance(frame, Frame) else np.asarray(frame)
        grays = np.where(values.astype(bool), 255, 0)
    elif mode == "signed_difference":
        span = SIGNED_DIFFERENCE_SPAN_V
        scaled = (frame.values + span) / (2.0 * span) * 255.0
        grays = np.clip(np.rint(scaled), 0, 255)
    else:
        v_min, v_max = frame.v_range
        scaled = (frame.values - v_min) / (v_max - v_min) * 255.0
        grays = np.clip(np.rint(scaled), 0, 255)
    write_pgm(path, grays.astype(np.uint8))
