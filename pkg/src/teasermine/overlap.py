"""Unigram percentage-match scoring and prominent-section search.

The match score between a short text and an article window is the fraction
of the short text's distinct terms that the window covers. The window with
the highest score is the "prominent section" of the article for that text.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptyReference
from .textnorm import NormalizedText, SentenceSplitArticle


class Abstractivity(enum.Enum):
    TOO_LOW = "too_low"
    ABSTRACTIVE = "abstractive"
    TOO_HIGH = "too_high"


@dataclass(frozen=True)
class WindowedArticle:
    """Concatenations of p consecutive sentences, advancing q at a time."""

    windows: tuple[NormalizedText, ...]
    p: int
    q: int


@dataclass(frozen=True)
class ProminentSection:
    window_index: int
    score: float
    text: NormalizedText


@dataclass(frozen=True)
class OverlapProfile:
    scores: tuple[float, ...]


def perc_match(x1: NormalizedText, x2: NormalizedText) -> float:
    """|uni(x1) ∩ uni(x2)| / |uni(x1)|.

    Raises EmptyReference when x1 has no unigrams; callers treat that as a
    degenerate record.
    """
    if not x1.unigrams:
        raise EmptyReference("first text has no unigrams")
    return len(x1.unigrams & x2.unigrams) / len(x1.unigrams)


def window_article(article: SentenceSplitArticle, p: int, q: int) -> WindowedArticle:
    """Slide a window of p sentences with stride q over the article.

    Articles shorter than p sentences yield a single window covering all of
    them, so short articles are scored instead of silently dropped.
    """
    if p < 1 or q < 1:
        raise ValueError("window size and stride must be >= 1")
    sentences = article.sentences
    if len(sentences) < p:
        return WindowedArticle((NormalizedText.concat(list(sentences)),), p, q)
    count = (len(sentences) - p) // q + 1
    windows = tuple(
        NormalizedText.concat(list(sentences[i * q:i * q + p]))
        for i in range(count)
    )
    return WindowedArticle(windows, p, q)


def prominent_section(
    shortcut: NormalizedText, windowed: WindowedArticle
) -> tuple[ProminentSection, OverlapProfile]:
    """Score every window against the shortcut and return the argmax.

    Ties break toward the lowest window index (leading content is the more
    prominent under inverted-pyramid news style).
    """
    scores = tuple(perc_match(shortcut, w) for w in windowed.windows)
    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    section = ProminentSection(best, scores[best], windowed.windows[best])
    return section, OverlapProfile(scores)


def abstractivity_class(score: float, low: float, high: float) -> Abstractivity:
    """Classify a max-overlap score against the (low, high) band.

    The bounds themselves count as abstractive: only strictly-outside
    scores are rejected.
    """
    if not 0 <= low < high <= 1:
        raise ValueError("need 0 <= low < high <= 1")
    if score < low:
        return Abstractivity.TOO_LOW
    if score > high:
        return Abstractivity.TOO_HIGH
    return Abstractivity.ABSTRACTIVE
