"""Deterministic text normalization shared by every analysis stage.

All scoring downstream (overlap, relevance, recognition, ROUGE) runs on the
same token stream produced here: whitespace tokenization, edge-punctuation
stripping, lowercasing, digit-run masking, stopword pruning, and suffix
stemming. Everything is a pure function of (text, config), so results are
reproducible and safe to compute in parallel.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import porter

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"(?<!\w)@\w+")
_HASHMARK_RE = re.compile(r"(?<!\w)#(?=\w)")
_DIGIT_RUN_RE = re.compile(r"\d+")
_SPACE_RE = re.compile(r"\s+")
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s)")

# curly quotes fold to ASCII so contractions match the stopword list
_QUOTE_FOLD = str.maketrans({"’": "'", "‘": "'",
                             "“": '"', "”": '"'})

_DEFAULT_ABBREVIATIONS = (
    "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "vs.",
    "etc.", "e.g.", "i.e.", "u.s.", "u.k.", "u.n.", "inc.", "ltd.", "co.",
    "corp.", "gen.", "gov.", "sen.", "rep.", "jan.", "feb.", "mar.", "apr.",
    "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.", "no.",
    "fig.", "al.",
)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a one-word-per-line UTF-8 stopword file (default: vendored list)."""
    if path is None:
        text = resources.files("teasermine").joinpath(
            "data/stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class NormConfig:
    """Knobs for normalization; one shared instance per pipeline run."""

    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    stem: bool = True
    mask_numbers: bool = True
    strip_urls: bool = True
    strip_mentions: bool = True
    strip_hashtag_marks: bool = True
    abbreviations: frozenset[str] = frozenset(_DEFAULT_ABBREVIATIONS)

    def without_stopwords(self) -> "NormConfig":
        return replace(self, stopwords=frozenset())


@dataclass(frozen=True)
class NormalizedText:
    """Stemmed, stopword-pruned token sequence plus its unigram set."""

    tokens: tuple[str, ...]
    unigrams: frozenset[str]
    source_len_words: int

    def __bool__(self) -> bool:
        return bool(self.tokens)

    @staticmethod
    def from_tokens(tokens, source_len_words=None):
        tokens = tuple(tokens)
        n = len(tokens) if source_len_words is None else source_len_words
        return NormalizedText(tokens, frozenset(tokens), n)

    @staticmethod
    def concat(parts: "list[NormalizedText]") -> "NormalizedText":
        tokens: list[str] = []
        for part in parts:
            tokens.extend(part.tokens)
        n = sum(p.source_len_words for p in parts)
        return NormalizedText(tuple(tokens), frozenset(tokens), n)


@dataclass(frozen=True)
class SentenceSplitArticle:
    sentences: tuple[NormalizedText, ...]
    raw_sentences: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.sentences)


@lru_cache(maxsize=1 << 17)
def _stem_fixed(token: str) -> str:
    # iterate to a fixed point so normalize() is idempotent; the stemmer
    # never lengthens its input, so this terminates
    while True:
        out = porter.stem(token)
        if out == token:
            return out
        token = out


def _strip_edge_punct(token: str) -> str:
    # '%' is the number mask and must survive; everything else in the
    # punctuation/symbol categories is trimmed from both ends
    start, end = 0, len(token)
    while start < end and token[start] != "%" and \
            unicodedata.category(token[start])[0] in "PS":
        start += 1
    while end > start and token[end - 1] != "%" and \
            unicodedata.category(token[end - 1])[0] in "PS":
        end -= 1
    return token[start:end]


def clean_raw(text: str, config: NormConfig) -> str:
    """Strip URLs/mentions/hashtag markers and collapse whitespace.

    Case and punctuation are preserved; this is the surface form used for
    substring (extractivity) checks and for baseline outputs.
    """
    text = text.translate(_QUOTE_FOLD)
    if config.strip_urls:
        text = _URL_RE.sub(" ", text)
    if config.strip_mentions:
        text = _MENTION_RE.sub(" ", text)
    if config.strip_hashtag_marks:
        text = _HASHMARK_RE.sub("", text)
    return _SPACE_RE.sub(" ", text).strip()


def normalize(text: str, config: NormConfig) -> NormalizedText:
    """Tokenize, lowercase, mask digit runs, prune stopwords and stem.

    Every maximal digit run becomes a single '%' token before stemming.
    Stopwords are dropped both on the surface form and on the stem, so the
    output never intersects the stopword list. Tokens are split on
    whitespace with edge punctuation stripped; interior apostrophes are
    kept. Empty input yields an empty result.
    """
    source_len = len(text.split())
    lowered = clean_raw(text, config).lower()
    tokens: list[str] = []
    for raw_tok in lowered.split():
        if config.mask_numbers:
            raw_tok = _DIGIT_RUN_RE.sub("%", raw_tok)
        tok = _strip_edge_punct(raw_tok)
        if not tok or tok in config.stopwords:
            continue
        if config.stem and tok.isascii() and tok.isalpha():
            tok = _stem_fixed(tok)
            if tok in config.stopwords:
                continue
        tokens.append(tok)
    return NormalizedText(tuple(tokens), frozenset(tokens), source_len)


def _is_abbreviation(text: str, punct_end: int, config: NormConfig) -> bool:
    # word carrying the candidate boundary, e.g. "Dr." in "met Dr. Smith"
    m = re.search(r"\S+$", text[:punct_end])
    token = (m.group() if m else "").lstrip("(\"'[{")
    if token.lower() in config.abbreviations:
        return True
    # uppercase single-letter initials such as "J. K. Rowling"
    return len(token) == 2 and token[1] == "." and token[0].isupper()


def split_sentences(article: str, config: NormConfig) -> SentenceSplitArticle:
    """Split an article at sentence-final punctuation followed by whitespace.

    Known abbreviations and single-letter initials do not end a sentence.
    Raw sentences keep their punctuation and concatenate (modulo
    whitespace) back to the input.
    """
    raw: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(article):
        if _is_abbreviation(article, m.end(), config):
            continue
        piece = article[start:m.end()].strip()
        if piece:
            raw.append(piece)
        start = m.end()
    tail = article[start:].strip()
    if tail:
        raw.append(tail)
    normalized = tuple(normalize(s, config) for s in raw)
    return SentenceSplitArticle(normalized, tuple(raw))
