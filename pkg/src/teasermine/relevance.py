"""Domain-relevance scoring: a TF-IDF adapted to domains instead of documents.

dr(w, d) = tf_domain(w, d) * idf_domain(w), with tf the occurrence share of
w among all article tokens of domain d and idf the log-ratio of domain
count to domains containing w. Words frequent within one domain and rare
elsewhere score high; words present everywhere score exactly zero; words
unknown to the corpus fall back to a configurable OOV default (0.0 =
maximally unusual).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .domains import DomainModel
from .errors import EmptyDomain, UnknownTerm


def tf_domain(term: str, domain: int, model: DomainModel) -> float:
    """Occurrence count of term in the domain over the domain's token total."""
    total = model.per_domain_total_terms.get(domain, 0)
    if total == 0:
        raise EmptyDomain(f"domain {domain} has no terms")
    return model.per_domain_term_counts[domain].get(term, 0) / total


def idf_domain(term: str, model: DomainModel) -> float:
    """ln(|domains| / |domains containing term|)."""
    containing = sum(
        1 for d in model.domains()
        if model.per_domain_term_counts.get(d, {}).get(term, 0) > 0
    )
    if containing == 0:
        raise UnknownTerm(term)
    return math.log(model.k / containing)


def dr(term: str, domain: int, model: DomainModel) -> float:
    return tf_domain(term, domain, model) * idf_domain(term, model)


@dataclass
class RelevanceMatrix:
    """dr value for every (domain, vocabulary term) pair.

    Cells where the term does not occur in the domain are exactly 0 and
    stored implicitly. Out-of-vocabulary lookups return `default_oov`.
    """

    domains: int
    default_oov: float = 0.0
    vocabulary: frozenset[str] = frozenset()
    _cells: dict[int, dict[str, float]] = field(default_factory=dict)

    def lookup(self, domain: int, term: str) -> float:
        if term not in self.vocabulary:
            return self.default_oov
        return self._cells.get(domain, {}).get(term, 0.0)

    def lookup_many(self, domain: int, terms: Iterable[str]) -> list[float]:
        return [self.lookup(domain, t) for t in terms]

    def to_ndjson(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            meta = {"meta": {"domains": self.domains,
                             "default_oov": self.default_oov}}
            fh.write(json.dumps(meta, sort_keys=True) + "\n")
            for domain in sorted(self._cells):
                cells = self._cells[domain]
                for term in sorted(cells):
                    row = {"domain": domain, "term": term, "dr": cells[term]}
                    fh.write(json.dumps(row, sort_keys=True) + "\n")

    @classmethod
    def from_ndjson(cls, path: str | Path) -> "RelevanceMatrix":
        with open(path, encoding="utf-8") as fh:
            header = json.loads(fh.readline())["meta"]
            matrix = cls(domains=header["domains"],
                         default_oov=header["default_oov"])
            vocab = set()
            for line in fh:
                if not line.strip():
                    continue
                row = json.loads(line)
                matrix._cells.setdefault(row["domain"], {})[row["term"]] = row["dr"]
                vocab.add(row["term"])
            matrix.vocabulary = frozenset(vocab)
        return matrix


def build_matrix(model: DomainModel, default_oov: float = 0.0) -> RelevanceMatrix:
    """Stack dr values for the whole vocabulary into a lookup matrix.

    A cell is materialized for every (domain, term) with a nonzero
    occurrence count; all other in-vocabulary cells are zero because their
    term frequency is zero.
    """
    for d in model.domains():
        if model.per_domain_total_terms.get(d, 0) == 0:
            raise EmptyDomain(f"domain {d} has no terms")
    vocabulary = frozenset().union(
        *(model.per_domain_term_counts[d].keys() for d in model.domains()))
    containing: dict[str, int] = {}
    for d in model.domains():
        for term in model.per_domain_term_counts[d]:
            containing[term] = containing.get(term, 0) + 1
    cells: dict[int, dict[str, float]] = {}
    for d in model.domains():
        total = model.per_domain_total_terms[d]
        row: dict[str, float] = {}
        for term, count in model.per_domain_term_counts[d].items():
            row[term] = (count / total) * math.log(model.k / containing[term])
        cells[d] = row
    matrix = RelevanceMatrix(domains=model.k, default_oov=default_oov,
                             vocabulary=vocabulary)
    matrix._cells = cells
    return matrix
