"""Figure rendering. Everything draws to a file, never to a window."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _save(fig, path) -> None:
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def sweep_figure(rows, path) -> None:
    """Transfer curves for both device states over the input range."""
    data = np.asarray(rows, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(data[:, 0], data[:, 2], marker="o", label="low resistance")
    ax.plot(data[:, 0], data[:, 3], marker="s", label="high resistance")
    ax.set_xlabel("input voltage [V]")
    ax.set_ylabel("output voltage [V]")
    ax.set_title("Pixel circuit transfer")
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def detection_figure(frame, difference, mask, ground_truth, path) -> None:
    """Side-by-side panel: input frame, differencing output, mask, truth."""
    panels = [
        ("input frame", frame.values, "gray", frame.v_range),
        ("difference", difference.values, "coolwarm", difference.v_range),
        ("mask", mask.astype(float), "gray", (0.0, 1.0)),
    ]
    if ground_truth is not None:
        panels.append(("ground truth", ground_truth.astype(float), "gray", (0.0, 1.0)))
    fig, axes = plt.subplots(1, len(panels), figsize=(3.2 * len(panels), 3.4))
    for ax, (title, values, cmap, (lo, hi)) in zip(np.atleast_1d(axes), panels):
        ax.imshow(values, cmap=cmap, vmin=lo, vmax=hi, interpolation="nearest")
        ax.set_title(title)
        ax.set_xticks([])
        ax.set_yticks([])
    _save(fig, path)


def montecarlo_figure(variations, aggregate, path) -> None:
    """Mean detection quality against device variation, with min/max bands."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, marker in (("unfiltered", "o"), ("filtered", "s")):
        means = [aggregate[f"{p:g}"][label]["mean"] for p in variations]
        lows = [aggregate[f"{p:g}"][label]["min"] for p in variations]
        highs = [aggregate[f"{p:g}"][label]["max"] for p in variations]
        ax.plot(variations, means, marker=marker, label=label)
        ax.fill_between(variations, lows, highs, alpha=0.15)
    ax.set_xlabel("device variation p")
    ax.set_ylabel("IoU")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("Detection quality vs device variation")
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def cost_figure(reports, path) -> None:
    """Circuit count, power and area per architecture as grouped bars."""
    labels = [r["architecture"] for r in reports]
    x = np.arange(len(labels))
    fig, axes = plt.subplots(1, 3, figsize=(10.0, 3.6))
    for ax, key, title in zip(
        axes,
        ("circuits", "power_w", "area_um2"),
        ("circuits", "power [W]", "area [um^2]"),
    ):
        ax.bar(x, [r[key] for r in reports], width=0.6)
        ax.set_xticks(x)
        ax.set_xticklabels(labels)
        ax.set_title(title)
        ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
