"""Shared fixture builders: stable nonsense vocabularies and synthetic corpora."""

from __future__ import annotations

import json
import string

import numpy as np
import pytest

from teasermine.textnorm import NormConfig, normalize

NORM = NormConfig()


def stable_words(rng: np.random.Generator, n: int, length=(4, 8)) -> list[str]:
    """Nonsense words that survive normalization unchanged.

    Keeps fixtures hand-checkable: token == word, no stemming or stopword
    surprises.
    """
    out: list[str] = []
    seen = set()
    letters = string.ascii_lowercase
    while len(out) < n:
        size = int(rng.integers(length[0], length[1] + 1))
        word = "".join(letters[i] for i in rng.integers(0, 26, size))
        if word in seen:
            continue
        seen.add(word)
        norm = normalize(word, NORM)
        if norm.tokens == (word,):
            out.append(word)
    return out


@pytest.fixture(scope="session")
def word_bank():
    rng = np.random.default_rng(99)
    return stable_words(rng, 600)


def _sentence(rng, words, size) -> str:
    chosen = [words[i] for i in rng.integers(0, len(words), size)]
    chosen[0] = chosen[0].capitalize()
    return " ".join(chosen) + "."


def build_synthetic_corpus(n_records: int, n_domains: int, seed: int) -> list[dict]:
    """Corpus rows with planted outcome variety.

    Per domain: an exclusive topic vocabulary (drives both clustering and
    high-dr words) plus corpus-wide shared words. Tweets are planted to be
    headline copies, sentence extracts, near-full window copies, off-topic
    texts, frequent-word teasers (not teasing) or rare-word teasers.
    """
    rng = np.random.default_rng(seed)
    shared = stable_words(rng, 50)
    domain_vocab = [stable_words(rng, 40) for _ in range(n_domains)]
    accounts = ["newsalpha", "newsbravo", "newscharlie"]
    rows = []
    for i in range(n_records):
        d = i % n_domains
        vocab = domain_vocab[d]
        pool = vocab * 2 + shared  # topical words dominate
        n_sentences = int(rng.integers(4, 9))
        sentences = [_sentence(rng, pool, int(rng.integers(5, 10)))
                     for _ in range(n_sentences)]
        article = " ".join(sentences)
        window_words = sorted(
            {w.lower().strip(".") for s in sentences[:5] for w in s.split()})
        headline = _sentence(rng, pool, 6)[:-1]

        kind = ("teaser", "teaser", "extract_headline", "extract_headline",
                "extract_article", "too_high", "too_low", "frequent",
                "frequent", "teaser")[i % 10]
        if kind == "extract_headline":
            tweet = headline
        elif kind == "extract_article":
            sentence = sentences[int(rng.integers(0, n_sentences))]
            words = sentence[:-1].split()
            tweet = " ".join(words[: max(2, len(words) - 2)])
        elif kind == "too_high":
            take = [window_words[j] for j in
                    rng.permutation(len(window_words))[:6]]
            tweet = " ".join(take)
        elif kind == "too_low":
            other = domain_vocab[(d + 1) % n_domains]
            tweet = " ".join(other[j] for j in rng.integers(0, len(other), 6))
        else:  # frequent / teaser: ~half window words, half absent words
            take = [window_words[j] for j in rng.permutation(len(window_words))[:3]]
            # absent but domain-frequent words keep dr well above a sane
            # threshold; shared words would score 0 (present everywhere)
            absent = [w for w in vocab if w not in window_words][:20]
            while len(absent) < 3:
                absent.append(f"pad{'x' * (len(absent) + 1)}vex")
            extra = [absent[j] for j in rng.permutation(len(absent))[:3]]
            if kind == "teaser":
                suffix = "".join(chr(ord("a") + int(c)) for c in str(i))
                extra[-1] = f"zq{suffix}vex"  # out-of-vocabulary rarity
            tweet = " ".join(take + extra)
        if i % 2 == 0:
            tweet += " https://t.co/x%d" % i

        row = {
            "id": f"r{i:05d}",
            "tweet_text": tweet,
            "headline": headline,
            "article_text": article,
            "account": accounts[i % len(accounts)],
            "url": f"https://example.org/{i}",
        }
        if i % 10 != 3:
            row["keywords"] = [f"topic{d}"]
        if i % 10 != 4:
            row["highlight"] = _sentence(rng, pool, 12)
        rows.append(row)
    return rows


def write_ndjson(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


ARTICLE = ("Arta artb artc artd. Artf artg arth arti. Artj artk artl artm.")
HEADLINE = "Hdla hdlb hdlc hdld"

STAGE_TWEETS = {
    "extractive_vs_headline": HEADLINE,
    "extractive_vs_article": "artb artc",
    "abstractivity_low": "lowa lowb lowc lowd lowf lowg",
    "abstractivity_high": "artd artc artb arta artf artg",
    "not_teasing": "arta artb artc frq frqb fil",
    "accepted": "arta artb artc frq frqb rarezap",
    "degenerate": "https://t.co/only",
}


def build_staged_corpus(stage_counts: dict[str, int]):
    """Records planted to land on exact recognizer stages.

    The relevance matrix is constructed directly: domain 0 holds frequent
    terms (dr far above 0.005) plus 'rarezap' occurring once (dr ~ 7e-4);
    domain 1 exists so the idf component is nonzero.
    """
    import numpy as np

    from teasermine.domains import DomainModel, attach_term_counts
    from teasermine.recognizer import Record
    from teasermine.relevance import build_matrix

    domain_tokens = {
        0: ["frq"] * 300 + ["frqb"] * 300 + ["fil"] * 200 + ["filb"] * 199
           + ["rarezap"],
        1: ["othr"] * 100,
    }
    model = DomainModel(k=2, centroids=np.zeros((2, 1)),
                        assignments={"m0": 0, "m1": 1}, sse=0.0)
    attach_term_counts(model, {"m0": domain_tokens[0], "m1": domain_tokens[1]})
    matrix = build_matrix(model)

    records = []
    expected = {}
    i = 0
    for stage, count in stage_counts.items():
        for _ in range(count):
            rid = f"s{i:03d}"
            records.append(Record.build(
                rid, ARTICLE, HEADLINE, STAGE_TWEETS[stage], NORM
            ).with_domain(0))
            expected[rid] = stage
            i += 1
    return records, matrix, expected
