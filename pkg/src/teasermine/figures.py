"""Figure rendering for the report artifacts.

Each function writes one PNG next to the delimited output it illustrates.
Rendering is deterministic (fixed backend, size, dpi, metadata) so repeat
runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stats import Histogram
from .threshold import ThresholdCurve

_SAVE_OPTS = dict(dpi=120, metadata={"Software": "teasermine"})


def render_histogram(hist: Histogram, title: str, path: str | Path) -> None:
    """Bar plot of a density-normalized overlap histogram."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    lefts = hist.bin_edges[:-1]
    widths = [r - l for l, r in zip(hist.bin_edges, hist.bin_edges[1:])]
    ax.bar(lefts, hist.densities, width=widths, align="edge",
           color="#4878a8", edgecolor="white", linewidth=0.5)
    ax.set_xlabel("unigram overlap")
    ax.set_ylabel("density")
    ax.set_xlim(0, 1)
    ax.set_title(f"{title} (n={hist.n}, mean={hist.mean:.3f}, std={hist.std:.3f})")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def render_threshold_curve(curve: ThresholdCurve, path: str | Path) -> None:
    """Per-domain overlap-ratio against the candidate grid, log-x."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for domain in sorted(curve.overlap_ratio):
        ax.plot(curve.candidates, curve.overlap_ratio[domain],
                marker="o", markersize=3, linewidth=1, label=f"c{domain}")
    if curve.selected is not None:
        ax.axvline(curve.selected, color="black", linestyle="--", linewidth=1,
                   label=f"selected {curve.selected:.4g}")
    ax.set_xscale("log")
    ax.set_xlabel("candidate dr threshold")
    ax.set_ylabel("overlap ratio with frequent words")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def render_elbow(sse_by_k: dict[int, float], suggested: int | None,
                 path: str | Path) -> None:
    """SSE against cluster count with the suggested elbow marked."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ks = sorted(sse_by_k)
    ax.plot(ks, [sse_by_k[k] for k in ks], marker="x", color="#a84848")
    if suggested is not None:
        ax.axvline(suggested, color="black", linestyle="--", linewidth=1,
                   label=f"suggested k={suggested}")
        ax.legend(fontsize=8)
    ax.set_xlabel("k")
    ax.set_ylabel("sum of squared error")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
