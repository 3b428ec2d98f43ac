"""Ingest, persistence and split tests."""

import json

import numpy as np
import pytest

from teasermine.corpus import (
    SplitSpec,
    ingest,
    read_records,
    record_from_json,
    record_to_json,
    split,
    write_records,
)
from teasermine.errors import InsufficientRecords
from teasermine.recognizer import Record
from teasermine.textnorm import NormConfig

from conftest import build_synthetic_corpus, stable_words, write_ndjson

CFG = NormConfig()


def valid_row(i=0, **extra):
    row = {
        "id": f"r{i}",
        "tweet_text": f"tweeta tweetb tweetc{i}",
        "headline": f"Headline words here {i}",
        "article_text": f"Arta artb artc{i}. More artd arte here.",
    }
    row.update(extra)
    return row


class TestIngest:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.ndjson"
        path.write_text("", "utf-8")
        report = ingest(path, CFG)
        assert (len(report.records), report.n_skipped, report.n_lines) == (0, 0, 0)

    def test_missing_field_skipped(self, tmp_path):
        path = tmp_path / "c.ndjson"
        row = valid_row()
        del row["article_text"]
        write_ndjson([row], path)
        report = ingest(path, CFG)
        assert len(report.records) == 0 and report.n_skipped == 1
        assert "article_text" in report.errors[0][1]

    def test_three_valid_one_malformed(self, tmp_path):
        path = tmp_path / "c.ndjson"
        lines = [json.dumps(valid_row(i)) for i in range(3)]
        lines.insert(2, "{not json")
        path.write_text("\n".join(lines) + "\n", "utf-8")
        report = ingest(path, CFG)
        assert len(report.records) == 3
        assert report.n_skipped == 1
        assert report.errors[0][0] == 3  # 1-based line number
        assert len(report.records) + report.n_skipped == report.n_lines

    def test_duplicate_id_skipped(self, tmp_path):
        path = tmp_path / "c.ndjson"
        write_ndjson([valid_row(1), valid_row(1)], path)
        report = ingest(path, CFG)
        assert len(report.records) == 1 and report.n_skipped == 1

    def test_empty_url_rejected(self, tmp_path):
        path = tmp_path / "c.ndjson"
        write_ndjson([valid_row(0, url="")], path)
        report = ingest(path, CFG)
        assert report.n_skipped == 1

    def test_account_allowlist(self, tmp_path):
        path = tmp_path / "c.ndjson"
        write_ndjson([valid_row(0, account="good"),
                      valid_row(1, account="bad")], path)
        report = ingest(path, CFG, account_allowlist=("good",))
        assert [r.id for r in report.records] == ["r0"]
        assert report.n_skipped == 1

    def test_input_never_mutated(self, tmp_path):
        path = tmp_path / "c.ndjson"
        write_ndjson([valid_row(i) for i in range(3)], path)
        before = path.read_bytes()
        ingest(path, CFG)
        assert path.read_bytes() == before

    def test_normalization_attached(self, tmp_path):
        path = tmp_path / "c.ndjson"
        write_ndjson([valid_row(0)], path)
        record = ingest(path, CFG).records[0]
        assert record.tweet.tokens
        assert len(record.article.sentences) == 2


class TestRecordRoundtrip:
    def test_json_roundtrip_equality(self):
        record = Record.build(
            "rid", "First sentence arta. Second one artb.",
            "A Headline", "Tweet text 42 http://x.co/z", CFG,
            keywords=["politics"], highlight="A highlight sentence.",
        ).with_domain(3)
        loaded = record_from_json(record_to_json(record))
        assert loaded == record

    def test_file_roundtrip(self, tmp_path):
        rows = build_synthetic_corpus(12, 3, seed=5)
        src = tmp_path / "src.ndjson"
        write_ndjson(rows, src)
        records = ingest(src, CFG).records
        out = tmp_path / "records.ndjson"
        write_records(records, out)
        assert read_records(out) == records


def records_with_domains(n, k, word_offset=0):
    rng = np.random.default_rng(123 + word_offset)
    words = stable_words(rng, n * 3)
    records = []
    for i in range(n):
        unique = words[3 * i:3 * i + 3]
        records.append(Record.build(
            f"r{i:03d}",
            f"{unique[0].capitalize()} {unique[1]} {unique[2]} body.",
            f"Head {unique[0]}",
            f"Tweet {unique[1]}",
            CFG,
        ).with_domain(i % k))
    return records


class TestSplit:
    def test_exact_stratification(self):
        records = records_with_domains(80, 8)
        spec = SplitSpec(64, 8, 8, seed=7)
        result = split(records, spec)
        assert (len(result.train), len(result.validation), len(result.test)) \
            == (64, 8, 8)
        by_id = {r.id: r for r in records}
        for ids, per_domain in ((result.train, 8), (result.validation, 1),
                                (result.test, 1)):
            domains = [by_id[i].domain for i in ids]
            assert all(domains.count(d) == per_domain for d in range(8))

    def test_disjoint_union(self):
        records = records_with_domains(40, 4)
        result = split(records, SplitSpec(24, 8, 8, seed=1))
        all_ids = result.train + result.validation + result.test
        assert len(all_ids) == len(set(all_ids))
        assert set(all_ids) <= {r.id for r in records}

    def test_deterministic_under_seed(self):
        records = records_with_domains(40, 4)
        a = split(records, SplitSpec(24, 8, 8, seed=9))
        b = split(records, SplitSpec(24, 8, 8, seed=9))
        assert (a.train, a.validation, a.test) == (b.train, b.validation, b.test)

    def test_insufficient_records(self):
        records = records_with_domains(10, 2)
        with pytest.raises(InsufficientRecords):
            split(records, SplitSpec(10, 4, 4, seed=0))

    def test_exact_duplicate_removed(self):
        rng = np.random.default_rng(200)
        words = stable_words(rng, 30)
        art = " ".join(words[:10]).capitalize() + "."
        other = " ".join(words[10:20]).capitalize() + "."
        records = [
            Record.build("a1", art, "H one", "T one", CFG).with_domain(0),
            Record.build("a2", art, "H two", "T two", CFG).with_domain(0),
            Record.build("b1", other, "H three", "T three", CFG).with_domain(1),
            Record.build("b2", " ".join(words[20:30]).capitalize() + ".",
                         "H four", "T four", CFG).with_domain(1),
        ]
        result = split(records, SplitSpec(2, 2, 0, seed=3))
        assert len(result.removed) == 1
        removed_id, matched, jac = result.removed[0]
        assert {removed_id, matched} == {"a1", "a2"}
        assert jac == 1.0

    def test_jaccard_boundary(self):
        rng = np.random.default_rng(201)
        words = stable_words(rng, 60)
        shared_a, shared_b = words[:17], words[20:35]
        # pair A: |shared|=17, uniques 1+2 -> 17/20 = 0.85 (removed at 0.8)
        art_a1 = " ".join(shared_a + [words[40]]) + "."
        art_a2 = " ".join(shared_a + [words[41], words[42]]) + "."
        # pair B: |shared|=15, uniques 2+3 -> 15/20 = 0.75 (kept)
        art_b1 = " ".join(shared_b + [words[45], words[46]]) + "."
        art_b2 = " ".join(shared_b + [words[47], words[48], words[49]]) + "."
        records = [
            Record.build("a1", art_a1, "H a", "T a", CFG).with_domain(0),
            Record.build("a2", art_a2, "H b", "T b", CFG).with_domain(0),
            Record.build("b1", art_b1, "H c", "T c", CFG).with_domain(1),
            Record.build("b2", art_b2, "H d", "T d", CFG).with_domain(1),
        ]
        result = split(records, SplitSpec(2, 2, 0, seed=11,
                                          dedup_jaccard_threshold=0.8))
        assert len(result.removed) == 1
        assert result.removed[0][0] in {"a1", "a2"}
        assert result.removed[0][2] == pytest.approx(0.85)
        assert len(result.validation) == 1  # the 0.75 record survives

    def test_unbalanced_mode(self):
        records = records_with_domains(30, 3)
        result = split(records, SplitSpec(20, 5, 5, domain_balance=False,
                                          seed=2))
        assert (len(result.train), len(result.validation), len(result.test)) \
            == (20, 5, 5)
