"""Unsupervised dr-threshold selection.

For a grid of candidate thresholds, compile the records whose non-overlap
words dip below each candidate and measure how often those words are fully
contained in the domain's most-frequent-word set (the prefix covering 80%
of token occurrences). The selected threshold is the largest candidate
below which no domain shows such containment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .domains import DomainModel
from .errors import EmptyDomain
from .relevance import RelevanceMatrix


class AbstractiveRecord(NamedTuple):
    """One record that survived extractivity+abstractivity filtering."""

    record_id: str
    domain: int
    nonoverlap: frozenset[str]


@dataclass
class ParetoSet:
    """Per-domain frequency-ranked prefixes covering the target share."""

    coverage_target: float
    terms: dict[int, tuple[str, ...]] = field(default_factory=dict)
    achieved_coverage: dict[int, float] = field(default_factory=dict)
    set_sizes: dict[int, int] = field(default_factory=dict)
    _members: dict[int, frozenset[str]] = field(default_factory=dict)

    def membership(self, domain: int) -> frozenset[str]:
        return self._members[domain]


@dataclass
class ThresholdCurve:
    candidates: tuple[float, ...]
    overlap_ratio: dict[int, list[float]]
    n_qualifying: dict[int, list[int]]
    selected: float | None = None


def candidate_grid(start: float = 1e-4, stop: float = 5e-2, points: int = 25) -> tuple[float, ...]:
    """Geometric grid of candidate thresholds."""
    return tuple(float(x) for x in np.geomspace(start, stop, points))


def pareto_sets(model: DomainModel, coverage: float = 0.8) -> ParetoSet:
    """Shortest frequency-ranked prefix reaching the coverage per domain.

    Terms are ranked by descending count with lexicographic tie-breaks, so
    the prefix is deterministic.
    """
    if not 0 < coverage < 1:
        raise ValueError("coverage must be inside (0, 1)")
    result = ParetoSet(coverage_target=coverage)
    for d in model.domains():
        counts = model.per_domain_term_counts.get(d, {})
        total = model.per_domain_total_terms.get(d, 0)
        if total == 0:
            raise EmptyDomain(f"domain {d} has no terms")
        ranked = sorted(counts.items(), key=lambda it: (-it[1], it[0]))
        prefix: list[str] = []
        cum = 0
        for term, count in ranked:
            prefix.append(term)
            cum += count
            if cum / total >= coverage:
                break
        result.terms[d] = tuple(prefix)
        result.achieved_coverage[d] = cum / total
        result.set_sizes[d] = len(prefix)
        result._members[d] = frozenset(prefix)
    return result


def overlap_ratio_curve(
    candidates: Sequence[float],
    abstractive_records: Iterable[AbstractiveRecord],
    matrix: RelevanceMatrix,
    pareto: ParetoSet,
) -> ThresholdCurve:
    """Fraction of threshold-qualifying records fully inside the Pareto set.

    A record qualifies at candidate t when at least one of its non-overlap
    words has dr strictly below t; records with an empty non-overlap set
    never qualify. Domains with zero qualifying records report ratio 0.
    """
    grid = tuple(sorted(set(float(c) for c in candidates)))
    # per record: the smallest dr among its non-overlap words, and whether
    # the whole set sits inside the domain's frequent words
    profiles: dict[int, list[tuple[float, bool]]] = {}
    for rec in abstractive_records:
        if not rec.nonoverlap:
            continue
        min_dr = min(matrix.lookup(rec.domain, w) for w in rec.nonoverlap)
        inside = rec.nonoverlap <= pareto.membership(rec.domain)
        profiles.setdefault(rec.domain, []).append((min_dr, inside))

    domains = sorted(pareto.terms)
    ratios = {d: [] for d in domains}
    qualifying = {d: [] for d in domains}
    for d in domains:
        recs = profiles.get(d, [])
        for t in grid:
            n_qual = sum(1 for min_dr, _ in recs if min_dr < t)
            n_inside = sum(1 for min_dr, ins in recs if min_dr < t and ins)
            qualifying[d].append(n_qual)
            ratios[d].append(n_inside / n_qual if n_qual else 0.0)
    return ThresholdCurve(grid, ratios, qualifying)


def select_threshold(curve: ThresholdCurve) -> float:
    """Largest candidate below which every domain shows zero overlap-ratio.

    When even the smallest candidate produces overlap somewhere, fall back
    to the candidate minimizing the worst-domain ratio (ties prefer the
    smaller candidate).
    """
    if not curve.candidates:
        raise ValueError("empty threshold curve")
    domains = sorted(curve.overlap_ratio)
    boundary = None
    for i, candidate in enumerate(curve.candidates):
        if all(curve.overlap_ratio[d][i] == 0.0 for d in domains):
            boundary = candidate
        else:
            break
    if boundary is not None:
        return boundary
    best, best_worst = curve.candidates[0], math.inf
    for i, candidate in enumerate(curve.candidates):
        worst = max(curve.overlap_ratio[d][i] for d in domains)
        if worst < best_worst:
            best, best_worst = candidate, worst
    return best
