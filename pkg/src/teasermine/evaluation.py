"""ROUGE scoring and the extractive baselines used for benchmarking.

ROUGE-1/2 use clipped n-gram counts; ROUGE-L uses the token-level longest
common subsequence (a contiguous-substring mode is available for
comparison). Scores are computed over the same normalized token stream as
the rest of the pipeline, so stemming/stopword handling is consistent and
configurable in one place.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import EmptyArticle, EmptyReference
from .overlap import prominent_section, window_article
from .recognizer import Record, RecognizerParams
from .textnorm import NormalizedText


class RougeTriple(NamedTuple):
    precision: float
    recall: float
    f1: float


_ZERO = RougeTriple(0.0, 0.0, 0.0)


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: NormalizedText, reference: NormalizedText, n: int) -> RougeTriple:
    """Clipped n-gram precision/recall/F1."""
    ref_counts = _ngrams(reference.tokens, n)
    total_ref = sum(ref_counts.values())
    if total_ref == 0:
        raise EmptyReference(f"reference has no {n}-grams")
    cand_counts = _ngrams(candidate.tokens, n)
    total_cand = sum(cand_counts.values())
    overlap = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
    precision = overlap / total_cand if total_cand else 0.0
    recall = overlap / total_ref
    return RougeTriple(precision, recall, _f1(precision, recall))


def _lcs_length(a, b) -> int:
    # classic DP over one rolling row
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(cur[-1], prev[j]))
        prev = cur
    return prev[-1]


def _longest_common_substring(a, b) -> int:
    best = 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            run = prev[j - 1] + 1 if x == y else 0
            cur.append(run)
            best = max(best, run)
        prev = cur
    return best


def rouge_l(
    candidate: NormalizedText,
    reference: NormalizedText,
    mode: str = "subsequence",
) -> RougeTriple:
    """Longest-common-subsequence F1 (or contiguous-substring when asked)."""
    if not reference.tokens:
        raise EmptyReference("reference has no tokens")
    if mode == "substring":
        length = _longest_common_substring(candidate.tokens, reference.tokens)
    else:
        length = _lcs_length(candidate.tokens, reference.tokens)
    precision = length / len(candidate.tokens) if candidate.tokens else 0.0
    recall = length / len(reference.tokens)
    return RougeTriple(precision, recall, _f1(precision, recall))


@dataclass(frozen=True)
class PairScore:
    rouge1: RougeTriple
    rouge2: RougeTriple
    rougeL: RougeTriple


@dataclass(frozen=True)
class AggregateScore:
    n_pairs: int
    n_skipped: int
    rouge1: RougeTriple
    rouge2: RougeTriple
    rougeL: RougeTriple


def score_pair(
    candidate: NormalizedText,
    reference: NormalizedText,
    rouge_l_mode: str = "subsequence",
) -> PairScore:
    """All three metrics for one pair; a reference too short for bigrams
    contributes zeros to ROUGE-2."""
    try:
        r2 = rouge_n(candidate, reference, 2)
    except EmptyReference:
        r2 = _ZERO
    return PairScore(
        rouge1=rouge_n(candidate, reference, 1),
        rouge2=r2,
        rougeL=rouge_l(candidate, reference, rouge_l_mode),
    )


def evaluate_corpus(
    pairs: Iterable[tuple[NormalizedText, NormalizedText]],
    rouge_l_mode: str = "subsequence",
) -> AggregateScore:
    """Unweighted per-pair mean of P, R and F1 for each metric.

    Pairs whose reference normalizes to nothing are skipped and counted.
    """
    scored: list[PairScore] = []
    skipped = 0
    for candidate, reference in pairs:
        if not reference.tokens:
            skipped += 1
            continue
        scored.append(score_pair(candidate, reference, rouge_l_mode))
    if not scored:
        raise EmptyReference("no scorable pairs")

    def mean(metric: str) -> RougeTriple:
        triples = [getattr(s, metric) for s in scored]
        n = len(triples)
        return RougeTriple(
            sum(t.precision for t in triples) / n,
            sum(t.recall for t in triples) / n,
            sum(t.f1 for t in triples) / n,
        )

    return AggregateScore(
        len(scored), skipped, mean("rouge1"), mean("rouge2"), mean("rougeL"))


def lead_baseline(record: Record, max_words: int) -> str:
    """Leading sentence(s), cut to max_words whitespace words."""
    if not record.article.raw_sentences:
        raise EmptyArticle(record.id)
    if max_words <= 0:
        return ""
    words: list[str] = []
    for sentence in record.article.raw_sentences:
        words.extend(sentence.split())
        if len(words) >= max_words:
            break
    return " ".join(words[:max_words])


def prominent_baseline(record: Record, params: RecognizerParams) -> str:
    """First sentence of the article window that best matches the tweet."""
    if not record.article.raw_sentences:
        raise EmptyArticle(record.id)
    windowed = window_article(record.article, params.p, params.q)
    section, _ = prominent_section(record.tweet, windowed)
    first_sentence = min(section.window_index * params.q,
                         len(record.article.raw_sentences) - 1)
    return record.article.raw_sentences[first_sentence]
