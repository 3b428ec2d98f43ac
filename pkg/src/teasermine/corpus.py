"""Corpus ingestion, record persistence, and dataset splitting.

The interchange format is NDJSON: one record per line with fields
{id, tweet_text, headline, article_text, highlight?, keywords?, account?,
timestamp?, url?}. Malformed lines are counted and skipped, never fatal.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientRecords
from .recognizer import Record
from .textnorm import NormalizedText, NormConfig, SentenceSplitArticle

log = logging.getLogger(__name__)

_REQUIRED = ("id", "tweet_text", "headline", "article_text")


@dataclass
class IngestReport:
    records: list[Record]
    n_lines: int = 0
    n_skipped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)


def _validate(row: dict, seen_ids: set) -> str | None:
    if not isinstance(row, dict):
        return "line is not a JSON object"
    for key in _REQUIRED:
        value = row.get(key)
        if not isinstance(value, str) or not value.strip():
            return f"missing or empty field {key!r}"
    if row["id"] in seen_ids:
        return f"duplicate id {row['id']!r}"
    if "url" in row and row["url"] is not None:
        if not isinstance(row["url"], str) or not row["url"].strip():
            return "url present but empty (tweet is not indicative)"
    keywords = row.get("keywords")
    if keywords is not None and not isinstance(keywords, list):
        return "keywords must be a list"
    return None


def ingest(
    path: str | Path,
    norm_config: NormConfig,
    account_allowlist: Sequence[str] = (),
) -> IngestReport:
    """Read, validate and normalize an NDJSON corpus file.

    Every input line is either one record or one counted skip, so
    len(records) + n_skipped == n_lines. A nonempty allowlist keeps only
    records whose account field is listed.
    """
    report = IngestReport(records=[])
    seen_ids: set[str] = set()
    allowed = set(account_allowlist)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            report.n_lines += 1
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                report.n_skipped += 1
                report.errors.append((lineno, f"bad JSON: {exc.msg}"))
                continue
            problem = _validate(row, seen_ids)
            if problem is None and allowed and row.get("account") not in allowed:
                problem = f"account {row.get('account')!r} not allowlisted"
            if problem:
                report.n_skipped += 1
                report.errors.append((lineno, problem))
                continue
            seen_ids.add(row["id"])
            report.records.append(Record.build(
                id=str(row["id"]),
                article_text=row["article_text"],
                headline=row["headline"],
                tweet_text=row["tweet_text"],
                config=norm_config,
                keywords=[str(k) for k in row.get("keywords") or []],
                highlight=row.get("highlight"),
            ))
    for lineno, reason in report.errors:
        log.warning("%s:%d skipped: %s", path, lineno, reason)
    return report


def record_to_json(record: Record) -> str:
    """Serialize one record with its normalized forms for later stages."""
    payload = {
        "id": record.id,
        "tweet_text": record.tweet_raw,
        "headline": record.headline_raw,
        "article_text": record.article_raw,
        "highlight": record.highlight_raw,
        "keywords": list(record.keywords),
        "norm": {
            "tweet_clean": record.tweet_clean,
            "headline_clean": record.headline_clean,
            "tweet_tokens": list(record.tweet.tokens),
            "headline_tokens": list(record.headline.tokens),
            "sentences_raw": list(record.article.raw_sentences),
            "sentences_tokens": [list(s.tokens) for s in record.article.sentences],
        },
    }
    if record.domain is not None:
        payload["domain"] = record.domain
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def record_from_json(line: str) -> Record:
    row = json.loads(line)
    norm = row["norm"]
    sentences = tuple(
        NormalizedText.from_tokens(toks, source_len_words=len(raw.split()))
        for toks, raw in zip(norm["sentences_tokens"], norm["sentences_raw"])
    )
    return Record(
        id=row["id"],
        article_raw=row["article_text"],
        article=SentenceSplitArticle(sentences, tuple(norm["sentences_raw"])),
        headline_raw=row["headline"],
        headline_clean=norm["headline_clean"],
        headline=NormalizedText.from_tokens(
            norm["headline_tokens"], len(row["headline"].split())),
        tweet_raw=row["tweet_text"],
        tweet_clean=norm["tweet_clean"],
        tweet=NormalizedText.from_tokens(
            norm["tweet_tokens"], len(row["tweet_text"].split())),
        domain=row.get("domain"),
        keywords=tuple(row.get("keywords") or ()),
        highlight_raw=row.get("highlight"),
    )


def write_records(records: Iterable[Record], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record_to_json(record) + "\n")


def read_records(path: str | Path) -> list[Record]:
    with open(path, encoding="utf-8") as fh:
        return [record_from_json(line) for line in fh if line.strip()]


@dataclass(frozen=True)
class SplitSpec:
    train_size: int
    validation_size: int
    test_size: int
    domain_balance: bool = True
    dedup_jaccard_threshold: float = 0.8
    seed: int = 0


@dataclass
class SplitResult:
    train: list[str]
    validation: list[str]
    test: list[str]
    removed: list[tuple[str, str, float]]  # (val/test id, train id, jaccard)

    def to_json(self) -> str:
        return json.dumps({
            "train": self.train,
            "validation": self.validation,
            "test": self.test,
            "removed": [
                {"id": rid, "matched_train_id": tid, "jaccard": round(j, 6)}
                for rid, tid, j in self.removed
            ],
        }, sort_keys=True, indent=1)


def _article_unigrams(record: Record) -> frozenset[str]:
    return frozenset().union(*(s.unigrams for s in record.article.sentences)) \
        if record.article.sentences else frozenset()


def _take_quota(pool: Sequence[str], sizes: Sequence[int], label: str):
    if sum(sizes) > len(pool):
        raise InsufficientRecords(
            f"{label}: need {sum(sizes)} records, have {len(pool)}")
    out, start = [], 0
    for size in sizes:
        out.append(list(pool[start:start + size]))
        start += size
    return out


def split(records: Sequence[Record], spec: SplitSpec) -> SplitResult:
    """Seeded (optionally domain-stratified) train/validation/test split.

    After splitting, any validation/test record whose article unigram
    Jaccard against some training article reaches the dedup threshold is
    dropped and logged: near-duplicate events must not leak across splits.
    """
    rng = np.random.default_rng(spec.seed)
    train: list[str] = []
    validation: list[str] = []
    test: list[str] = []

    if spec.domain_balance:
        by_domain: dict[int, list[str]] = {}
        for record in records:
            if record.domain is None:
                raise ValueError(
                    f"record {record.id!r} has no domain; cluster first")
            by_domain.setdefault(record.domain, []).append(record.id)
        domains = sorted(by_domain)
        quotas = []
        for size in (spec.train_size, spec.validation_size, spec.test_size):
            base, extra = divmod(size, len(domains))
            # remainder spread over the lowest domain ids
            quotas.append({d: base + (1 if i < extra else 0)
                           for i, d in enumerate(domains)})
        for d in domains:
            pool = sorted(by_domain[d])
            rng.shuffle(pool)
            tr, va, te = _take_quota(
                pool, [quotas[0][d], quotas[1][d], quotas[2][d]], f"domain {d}")
            train += tr
            validation += va
            test += te
    else:
        pool = sorted(record.id for record in records)
        rng.shuffle(pool)
        train, validation, test = _take_quota(
            pool, [spec.train_size, spec.validation_size, spec.test_size],
            "corpus")

    by_id = {record.id: record for record in records}
    train_sets = {rid: _article_unigrams(by_id[rid]) for rid in train}
    index: dict[str, list[str]] = {}
    for rid in train:
        for term in train_sets[rid]:
            index.setdefault(term, []).append(rid)

    removed: list[tuple[str, str, float]] = []

    def dedup(ids: list[str]) -> list[str]:
        kept = []
        for rid in ids:
            uni = _article_unigrams(by_id[rid])
            shared: dict[str, int] = {}
            for term in uni:
                for tid in index.get(term, ()):
                    shared[tid] = shared.get(tid, 0) + 1
            hit = None
            for tid in sorted(shared):
                union = len(uni) + len(train_sets[tid]) - shared[tid]
                jac = shared[tid] / union if union else 1.0
                if jac >= spec.dedup_jaccard_threshold:
                    hit = (rid, tid, jac)
                    break
            if hit:
                removed.append(hit)
                log.info("split dedup: dropped %s (jaccard %.3f vs %s)",
                         hit[0], hit[2], hit[1])
            else:
                kept.append(rid)
        return kept

    return SplitResult(train, dedup(validation), dedup(test), removed)
