"""Corpus-level overlap distributions and length statistics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import EmptyCorpus
from .overlap import prominent_section, window_article
from .recognizer import Record


@dataclass(frozen=True)
class Histogram:
    """Density-normalized histogram: sum(density * bin width) == 1."""

    bin_edges: tuple[float, ...]
    densities: tuple[float, ...]
    n: int
    mean: float
    std: float


@dataclass(frozen=True)
class LengthStats:
    n: int
    mean: float | None
    std: float | None


def histogram(scores: Sequence[float], bins: int = 20) -> Histogram:
    """Bin scores over [0, 1] into a density histogram."""
    if len(scores) == 0:
        raise EmptyCorpus("no scores to bin")
    arr = np.asarray(scores, dtype=float)
    counts, edges = np.histogram(arr, bins=bins, range=(0.0, 1.0))
    widths = np.diff(edges)
    densities = counts / (arr.size * widths)
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        densities=tuple(float(d) for d in densities),
        n=int(arr.size),
        mean=float(arr.mean()),
        std=float(arr.std()),  # population std
    )


def pair_scores(
    records: Iterable[Record],
    pair: Literal["tweet", "headline"],
    p: int = 5,
    q: int = 1,
) -> list[float]:
    """Max-window overlap of the chosen short text against each article.

    Records whose short text normalizes to nothing are skipped: they have
    no defined overlap.
    """
    scores = []
    for record in records:
        shortcut = record.tweet if pair == "tweet" else record.headline
        if not shortcut.unigrams:
            continue
        section, _ = prominent_section(shortcut, window_article(record.article, p, q))
        scores.append(section.score)
    return scores


def overlap_distribution(
    records: Iterable[Record],
    pair: Literal["tweet", "headline"],
    bins: int = 20,
    p: int = 5,
    q: int = 1,
) -> Histogram:
    """Distribution of short-text/article overlaps across the corpus."""
    scores = pair_scores(records, pair, p=p, q=q)
    if not scores:
        raise EmptyCorpus(f"no records with a scorable {pair}")
    return histogram(scores, bins=bins)


def length_stats(
    records: Iterable[Record],
    field: Literal["tweet", "headline", "highlight"],
) -> LengthStats:
    """Mean/std (population) of raw whitespace word counts for a field."""
    attr = {"tweet": "tweet_raw", "headline": "headline_raw",
            "highlight": "highlight_raw"}[field]
    counts = [
        len(text.split())
        for record in records
        if (text := getattr(record, attr)) is not None
    ]
    if not counts:
        return LengthStats(0, None, None)
    arr = np.asarray(counts, dtype=float)
    return LengthStats(len(counts), float(arr.mean()), float(arr.std()))


def histogram_tsv(histograms: dict[str, Histogram]) -> str:
    """TSV rows (pair, bin_left, bin_right, density) for external plotting."""
    lines = ["pair\tbin_left\tbin_right\tdensity"]
    for name in sorted(histograms):
        h = histograms[name]
        for left, right, density in zip(h.bin_edges, h.bin_edges[1:], h.densities):
            lines.append(f"{name}\t{left:.6f}\t{right:.6f}\t{density:.10g}")
    return "\n".join(lines) + "\n"
