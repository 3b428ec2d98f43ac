"""Teaser recognition: extractivity, abstractivity and teasingness checks.

A record's tweet is a teaser when (1) neither tweet/headline nor
tweet/article-sentence is a substring of the other, (2) its best window
overlap sits inside the configured band, and (3) at least one of the words
it does NOT share with that window has a domain-relevance score below the
threshold, i.e. the tweet contains an unusual word for the domain.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Iterable

from .overlap import Abstractivity, abstractivity_class, prominent_section, window_article
from .relevance import RelevanceMatrix
from .textnorm import NormConfig, NormalizedText, SentenceSplitArticle, clean_raw, normalize, split_sentences

_WS_RE = re.compile(r"\s+")


class Stage(enum.Enum):
    EXTRACTIVE_VS_HEADLINE = "extractive_vs_headline"
    EXTRACTIVE_VS_ARTICLE = "extractive_vs_article"
    ABSTRACTIVITY_LOW = "abstractivity_low"
    ABSTRACTIVITY_HIGH = "abstractivity_high"
    NOT_TEASING = "not_teasing"
    ACCEPTED = "accepted"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Record:
    """One corpus instance with every derived text form precomputed."""

    id: str
    article_raw: str
    article: SentenceSplitArticle
    headline_raw: str
    headline_clean: str
    headline: NormalizedText
    tweet_raw: str
    tweet_clean: str
    tweet: NormalizedText
    domain: int | None = None
    keywords: tuple[str, ...] = ()
    highlight_raw: str | None = None

    @classmethod
    def build(cls, id: str, article_text: str, headline: str, tweet_text: str,
              config: NormConfig, keywords: Iterable[str] = (),
              highlight: str | None = None) -> "Record":
        return cls(
            id=id,
            article_raw=article_text,
            article=split_sentences(article_text, config),
            headline_raw=headline,
            headline_clean=clean_raw(headline, config),
            headline=normalize(headline, config),
            tweet_raw=tweet_text,
            tweet_clean=clean_raw(tweet_text, config),
            tweet=normalize(tweet_text, config),
            keywords=tuple(keywords),
            highlight_raw=highlight,
        )

    def with_domain(self, domain: int) -> "Record":
        return replace(self, domain=domain)

    def article_concat(self) -> NormalizedText:
        return NormalizedText.concat(list(self.article.sentences))

    def article_tokens(self) -> tuple[str, ...]:
        return self.article_concat().tokens


@dataclass(frozen=True)
class RecognizerParams:
    p: int = 5
    q: int = 1
    low: float = 0.2
    high: float = 0.8
    dr_threshold: float = 0.005
    # the set difference defining "non-overlap": tweet words absent from the
    # prominent section (default), or the literal reverse reading
    nonoverlap_direction: str = "tweet_minus_article"


@dataclass(frozen=True)
class RecognitionVerdict:
    record_id: str
    is_teaser: bool
    stage: Stage
    max_overlap: float | None = None
    prominent_index: int | None = None
    nonoverlap_words: tuple[str, ...] | None = None
    nonoverlap_dr: tuple[float, ...] | None = None
    min_dr: float | None = None


def is_extract(a: str, b: str) -> bool:
    """True when either text, lowercased and whitespace-collapsed, contains
    the other."""
    a = _WS_RE.sub(" ", a).strip().lower()
    b = _WS_RE.sub(" ", b).strip().lower()
    return a in b or b in a


def nonoverlap(shortcut: NormalizedText, prominent: NormalizedText) -> frozenset[str]:
    """Shortcut unigrams absent from the prominent section."""
    return shortcut.unigrams - prominent.unigrams


@dataclass(frozen=True)
class AbstractivityAnalysis:
    """Stages 1-2 outcome, shared by recognition and threshold fitting."""

    passed: bool
    stage: Stage | None
    max_overlap: float | None = None
    prominent_index: int | None = None
    prominent_text: NormalizedText | None = None
    nonoverlap_words: frozenset[str] | None = None


def analyze(record: Record, params: RecognizerParams) -> AbstractivityAnalysis:
    """Run the extractivity and abstractivity checks, short-circuiting.

    The result carries the non-overlap word set when both checks pass;
    teasingness (the dr lookup) is layered on top by is_teaser.
    """
    if not record.tweet.unigrams:
        return AbstractivityAnalysis(False, Stage.DEGENERATE)
    if is_extract(record.tweet_clean, record.headline_clean):
        return AbstractivityAnalysis(False, Stage.EXTRACTIVE_VS_HEADLINE)
    for sentence in record.article.raw_sentences:
        if is_extract(record.tweet_clean, sentence):
            return AbstractivityAnalysis(False, Stage.EXTRACTIVE_VS_ARTICLE)

    windowed = window_article(record.article, params.p, params.q)
    section, _profile = prominent_section(record.tweet, windowed)
    band = abstractivity_class(section.score, params.low, params.high)
    if band is Abstractivity.TOO_LOW:
        return AbstractivityAnalysis(
            False, Stage.ABSTRACTIVITY_LOW, section.score, section.window_index)
    if band is Abstractivity.TOO_HIGH:
        return AbstractivityAnalysis(
            False, Stage.ABSTRACTIVITY_HIGH, section.score, section.window_index)

    if params.nonoverlap_direction == "article_minus_tweet":
        words = nonoverlap(section.text, record.tweet)
    else:
        words = nonoverlap(record.tweet, section.text)
    return AbstractivityAnalysis(
        True, None, section.score, section.window_index, section.text, words)


def is_teaser(
    record: Record, matrix: RelevanceMatrix, params: RecognizerParams
) -> RecognitionVerdict:
    """Full recognition for one record; Accepted only when some non-overlap
    word scores strictly below the dr threshold."""
    if record.domain is None:
        raise ValueError(f"record {record.id!r} has no domain assigned")
    analysis = analyze(record, params)
    if not analysis.passed:
        return RecognitionVerdict(
            record.id, False, analysis.stage,
            max_overlap=analysis.max_overlap,
            prominent_index=analysis.prominent_index)

    words = tuple(sorted(analysis.nonoverlap_words))
    dr_values = tuple(matrix.lookup_many(record.domain, words))
    teasing = any(v < params.dr_threshold for v in dr_values)
    return RecognitionVerdict(
        record.id,
        teasing,
        Stage.ACCEPTED if teasing else Stage.NOT_TEASING,
        max_overlap=analysis.max_overlap,
        prominent_index=analysis.prominent_index,
        nonoverlap_words=words,
        nonoverlap_dr=dr_values,
        min_dr=min(dr_values) if dr_values else None,
    )


@dataclass
class PruneReport:
    total: int
    counts: dict[Stage, int]
    fractions: dict[Stage, float]
    kept_fraction: float

    _TABLE_ROWS = (
        ("extractivity_wrt_headline", (Stage.EXTRACTIVE_VS_HEADLINE,)),
        ("extractivity_wrt_article", (Stage.EXTRACTIVE_VS_ARTICLE,)),
        ("abstractivity", (Stage.ABSTRACTIVITY_LOW, Stage.ABSTRACTIVITY_HIGH)),
        ("teasingness", (Stage.NOT_TEASING,)),
        ("degenerate", (Stage.DEGENERATE,)),
        ("accepted", (Stage.ACCEPTED,)),
    )

    def to_tsv(self) -> str:
        lines = ["analysis\tcount\tfraction"]
        for label, stages in self._TABLE_ROWS:
            count = sum(self.counts.get(s, 0) for s in stages)
            frac = count / self.total if self.total else 0.0
            lines.append(f"{label}\t{count}\t{frac:.6f}")
        lines.append(f"total\t{self.total}\t1.000000")
        return "\n".join(lines) + "\n"


def prune_report(verdicts: Iterable[RecognitionVerdict]) -> PruneReport:
    """Stage-by-stage pruning counts over a recognized corpus."""
    counts = {stage: 0 for stage in Stage}
    total = 0
    for verdict in verdicts:
        counts[verdict.stage] += 1
        total += 1
    fractions = {
        stage: (n / total if total else 0.0) for stage, n in counts.items()
    }
    kept = fractions[Stage.ACCEPTED] if total else 0.0
    return PruneReport(total, counts, fractions, kept)
