"""Document embedding and k-means domain clustering.

Records are embedded (TF-IDF bag-of-words by default, or vectors loaded
from file), clustered with Lloyd's algorithm under deterministic
farthest-point seeding, and the resulting model carries per-domain term
counts for the relevance stage. Embedding vectors are plain float64 numpy
arrays of a fixed dimension.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidK, ProviderFailure
from .textnorm import NormalizedText


class TfidfEmbeddingProvider:
    """Bag-of-words TF-IDF vectors over the top-`dim` corpus terms.

    Weight of term t in document d is count(t, d) * (ln(N/df(t)) + 1),
    L2-normalized. Vocabulary keeps the `dim` highest-count terms (ties
    broken lexicographically); dimensions are ordered alphabetically so a
    fitted provider is fully determined by the corpus.
    """

    def __init__(self, docs: Iterable[NormalizedText], dim: int = 512):
        totals: Counter[str] = Counter()
        df: Counter[str] = Counter()
        n_docs = 0
        for doc in docs:
            n_docs += 1
            totals.update(doc.tokens)
            df.update(doc.unigrams)
        if n_docs == 0 or not totals:
            raise ProviderFailure("cannot fit TF-IDF on an empty corpus")
        top = sorted(totals, key=lambda t: (-totals[t], t))[:dim]
        self.vocabulary = sorted(top)
        self.dim = len(self.vocabulary)
        self._index = {t: i for i, t in enumerate(self.vocabulary)}
        self._idf = np.array(
            [math.log(n_docs / df[t]) + 1.0 for t in self.vocabulary])

    def embed(self, article: NormalizedText, doc_id: str | None = None) -> np.ndarray:
        vec = np.zeros(self.dim)
        counts = Counter(article.tokens)
        for term, count in counts.items():
            i = self._index.get(term)
            if i is not None:
                vec[i] = count * self._idf[i]
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ProviderFailure(
                f"document {doc_id!r} has no vocabulary terms")
        return vec / norm


class PrecomputedEmbeddingProvider:
    """Vectors loaded from an NDJSON file of {record_id, vector} lines."""

    def __init__(self, path: str | Path):
        self._vectors: dict[str, np.ndarray] = {}
        self.dim = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                row = json.loads(line)
                vec = np.asarray(row["vector"], dtype=float)
                if self.dim == 0:
                    self.dim = vec.shape[0]
                elif vec.shape[0] != self.dim:
                    raise ProviderFailure(
                        f"inconsistent vector length for {row['record_id']!r}")
                self._vectors[str(row["record_id"])] = vec

    def embed(self, article: NormalizedText, doc_id: str | None = None) -> np.ndarray:
        if doc_id not in self._vectors:
            raise ProviderFailure(f"no precomputed vector for {doc_id!r}")
        return self._vectors[doc_id]


def embed(article: NormalizedText, provider, doc_id: str | None = None) -> np.ndarray:
    """Embed one document; ProviderFailure marks it unclusterable."""
    return provider.embed(article, doc_id)


@dataclass
class DomainModel:
    """Clustering result plus the per-domain term statistics built on it."""

    k: int
    centroids: np.ndarray
    assignments: dict[str, int]
    sse: float
    sse_history: list[float] = field(default_factory=list)
    per_domain_term_counts: dict[int, Counter] = field(default_factory=dict)
    per_domain_total_terms: dict[int, int] = field(default_factory=dict)

    def domains(self) -> range:
        return range(self.k)

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "centroids": [[float(x) for x in row] for row in self.centroids],
            "assignments": dict(sorted(self.assignments.items())),
            "sse": self.sse,
            "sse_history": self.sse_history,
            "per_domain_term_counts": {
                str(d): dict(sorted(c.items()))
                for d, c in self.per_domain_term_counts.items()
            },
            "per_domain_total_terms": {
                str(d): n for d, n in self.per_domain_total_terms.items()
            },
        }
        return json.dumps(payload, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "DomainModel":
        raw = json.loads(text)
        return cls(
            k=raw["k"],
            centroids=np.asarray(raw["centroids"], dtype=float),
            assignments={str(i): int(d) for i, d in raw["assignments"].items()},
            sse=raw["sse"],
            sse_history=list(raw.get("sse_history", [])),
            per_domain_term_counts={
                int(d): Counter(c)
                for d, c in raw.get("per_domain_term_counts", {}).items()
            },
            per_domain_total_terms={
                int(d): int(n)
                for d, n in raw.get("per_domain_total_terms", {}).items()
            },
        )


def _farthest_point_init(X: np.ndarray, k: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    first = int(rng.integers(len(X)))
    chosen = [first]
    d2 = ((X - X[first]) ** 2).sum(axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(d2))  # first occurrence, so ties are stable
        chosen.append(nxt)
        d2 = np.minimum(d2, ((X - X[nxt]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _assign(X, x2, centroids):
    # squared distances via the expansion; avoids an n*k*dim intermediate
    d2 = x2[:, None] - 2.0 * (X @ centroids.T) + (centroids ** 2).sum(axis=1)
    np.maximum(d2, 0.0, out=d2)
    labels = np.argmin(d2, axis=1)
    sse = float(d2[np.arange(len(X)), labels].sum())
    return labels, d2, sse


def _assign_with_repair(X, x2, centroids, k):
    """Assignment step; empty clusters are reseeded from worst-fit points.

    The reseeding point lies exactly on the new centroid, so pinning it to
    the repaired cluster never increases the objective (it only overrides
    the lowest-index tie-break when centroids coincide).
    """
    labels, d2, sse = _assign(X, x2, centroids)
    point_d2 = d2[np.arange(len(X)), labels].copy()
    pinned: dict[int, int] = {}
    for c in range(k):
        if not np.any(labels == c):
            far = int(np.argmax(point_d2))
            centroids[c] = X[far]
            labels, d2, sse = _assign(X, x2, centroids)
            for idx, cluster in pinned.items():
                labels[idx] = cluster
            labels[far] = c
            pinned[far] = c
            point_d2 = d2[np.arange(len(X)), labels]
            point_d2[list(pinned)] = -1.0
    return labels, sse, centroids


def kmeans(
    points: Mapping[str, np.ndarray],
    k: int,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-8,
    initial_centroids: np.ndarray | None = None,
) -> DomainModel:
    """Lloyd's algorithm over an id->vector mapping.

    Deterministic for a fixed seed: initialization picks a seed-random
    first centroid then repeatedly the point farthest from all chosen ones
    (or start from explicitly supplied centroids). Empty clusters are
    reseeded from the point farthest from its assigned centroid. Stops when
    the largest centroid shift drops below tol.
    """
    ids = list(points)
    if k < 1 or k > len(ids):
        raise InvalidK(f"k={k} with {len(ids)} points")
    X = np.asarray([points[i] for i in ids], dtype=float)
    x2 = (X ** 2).sum(axis=1)
    if initial_centroids is not None:
        centroids = np.array(initial_centroids, dtype=float)
        if centroids.shape != (k, X.shape[1]):
            raise InvalidK("initial_centroids shape mismatch")
    else:
        centroids = _farthest_point_init(X, k, seed)

    sse_history: list[float] = []
    for _ in range(max_iter):
        labels, sse, centroids = _assign_with_repair(X, x2, centroids, k)
        sse_history.append(sse)

        new_centroids = centroids.copy()
        for c in range(k):
            members = X[labels == c]
            if len(members):
                new_centroids[c] = members.mean(axis=0)
        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        if shift < tol:
            break

    labels, sse, centroids = _assign_with_repair(X, x2, centroids, k)
    assignments = {rid: int(lab) for rid, lab in zip(ids, labels)}
    return DomainModel(k, centroids, assignments, sse, sse_history)


def attach_term_counts(
    model: DomainModel, tokens_by_id: Mapping[str, Iterable[str]]
) -> DomainModel:
    """Populate per-domain term statistics from article tokens."""
    counts: dict[int, Counter] = {d: Counter() for d in model.domains()}
    for rid, domain in model.assignments.items():
        counts[domain].update(tokens_by_id[rid])
    model.per_domain_term_counts = counts
    model.per_domain_total_terms = {
        d: sum(c.values()) for d, c in counts.items()
    }
    return model


@dataclass
class ClusterDiagnostics:
    sse_by_k: dict[int, float] = field(default_factory=dict)
    suggested_k: int | None = None
    top_keywords: dict[int, list[tuple[str, int]]] = field(default_factory=dict)
    avg_article_words: dict[int, float] = field(default_factory=dict)


_FLAT_EPS = 1e-12


def suggest_k(sse_by_k: Mapping[int, float]) -> int:
    """Pick the k after which the SSE curve stops dropping abruptly.

    Uses the largest ratio of consecutive drops
    (sse[k-1]-sse[k]) / (sse[k]-sse[k+1]); an essentially flat curve
    suggests the smallest k. Advisory only.
    """
    ks = sorted(sse_by_k)
    if len(ks) == 1:
        return ks[0]
    sses = [sse_by_k[k] for k in ks]
    drops = [max(sses[i - 1] - sses[i], 0.0) for i in range(1, len(ks))]
    if max(drops) <= _FLAT_EPS:
        return ks[0]
    if len(ks) == 2:
        return ks[1]
    best_k, best_ratio = ks[0], -1.0
    for i in range(1, len(drops)):
        d_in, d_out = drops[i - 1], drops[i]
        if d_out <= _FLAT_EPS:
            ratio = math.inf if d_in > _FLAT_EPS else 0.0
        else:
            ratio = d_in / d_out
        if ratio > best_ratio:
            best_k, best_ratio = ks[i], ratio
    return best_k


def elbow_scan(
    points: Mapping[str, np.ndarray],
    k_range: Iterable[int],
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> ClusterDiagnostics:
    """Run kmeans for every k and report the SSE curve plus a suggested k."""
    ks = sorted(set(k_range))
    if not ks:
        raise InvalidK("empty k range")
    sse_by_k = {
        k: kmeans(points, k, seed=seed, max_iter=max_iter, tol=tol).sse
        for k in ks
    }
    return ClusterDiagnostics(sse_by_k=sse_by_k, suggested_k=suggest_k(sse_by_k))


def keyword_report(
    model: DomainModel,
    records_keywords: Mapping[str, Iterable[str]],
    top_n: int = 100,
) -> dict[int, list[tuple[str, int]]]:
    """Most frequent meta-keywords per domain; records without keywords skip."""
    per_domain: dict[int, Counter] = {d: Counter() for d in model.domains()}
    for rid, domain in model.assignments.items():
        for kw in records_keywords.get(rid) or ():
            kw = kw.strip()
            if kw:
                per_domain[domain][kw] += 1
    return {
        d: sorted(c.items(), key=lambda it: (-it[1], it[0]))[:top_n]
        for d, c in per_domain.items()
    }


def article_size_report(
    model: DomainModel, word_counts_by_id: Mapping[str, int]
) -> dict[int, float]:
    """Mean raw word count of the articles assigned to each domain."""
    sums: dict[int, list[int]] = {d: [0, 0] for d in model.domains()}
    for rid, domain in model.assignments.items():
        sums[domain][0] += word_counts_by_id[rid]
        sums[domain][1] += 1
    return {d: (s / n if n else 0.0) for d, (s, n) in sums.items()}
