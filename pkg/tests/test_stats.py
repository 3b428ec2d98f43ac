"""Histogram and length-statistics tests."""

import numpy as np
import pytest

from teasermine.errors import EmptyCorpus
from teasermine.recognizer import Record, RecognizerParams, Stage, is_teaser
from teasermine.stats import (
    LengthStats,
    histogram,
    histogram_tsv,
    length_stats,
    overlap_distribution,
    pair_scores,
)
from teasermine.textnorm import NormConfig

from conftest import build_staged_corpus

CFG = NormConfig()


class TestHistogram:
    def test_delta_distribution(self):
        hist = histogram([0.5] * 10, bins=10)
        nonzero = [d for d in hist.densities if d > 0]
        assert len(nonzero) == 1
        assert nonzero[0] == pytest.approx(10.0, abs=1e-9)

    def test_empty_scores(self):
        with pytest.raises(EmptyCorpus):
            histogram([], bins=10)

    def test_hand_binned_fixture(self):
        # 0.15 -> bin 1, 0.35/0.35 -> bin 3, 0.85 -> bin 8; width 0.1, n=4
        hist = histogram([0.15, 0.35, 0.35, 0.85], bins=10)
        expected = [0.0] * 10
        expected[1] = 1 / (4 * 0.1)
        expected[3] = 2 / (4 * 0.1)
        expected[8] = 1 / (4 * 0.1)
        assert list(hist.densities) == pytest.approx(expected, abs=1e-9)
        assert hist.mean == pytest.approx((0.15 + 0.35 + 0.35 + 0.85) / 4)

    def test_area_is_one(self):
        rng = np.random.default_rng(55)
        for _ in range(100):
            n = int(rng.integers(1, 200))
            scores = rng.uniform(0, 1, n)
            bins = int(rng.integers(1, 40))
            hist = histogram(scores, bins=bins)
            widths = np.diff(hist.bin_edges)
            area = float(np.dot(hist.densities, widths))
            assert abs(area - 1.0) < 1e-9

    def test_extreme_scores_stay_binned(self):
        hist = histogram([0.0, 1.0], bins=4)
        assert hist.densities[0] > 0 and hist.densities[-1] > 0

    def test_mean_within_range_std_zero_iff_constant(self):
        rng = np.random.default_rng(56)
        for _ in range(50):
            scores = rng.uniform(0, 1, int(rng.integers(1, 50)))
            hist = histogram(scores, bins=10)
            assert scores.min() <= hist.mean <= scores.max()
            assert (hist.std == 0.0) == bool(np.all(scores == scores[0]))


class TestOverlapDistribution:
    def test_accepted_records_inside_band(self):
        records, matrix, _ = build_staged_corpus(
            {"accepted": 6, "not_teasing": 3})
        hist = overlap_distribution(records, "tweet", bins=20)
        assert hist.n == 9
        # planted overlap is exactly 0.5
        assert hist.mean == pytest.approx(0.5)

    def test_headline_pair(self):
        records, _, _ = build_staged_corpus({"accepted": 4})
        hist = overlap_distribution(records, "headline", bins=10)
        assert hist.n == 4
        assert hist.mean == 0.0  # planted headline shares nothing

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            overlap_distribution([], "tweet")

    def test_degenerate_shortcut_skipped(self):
        records, _, _ = build_staged_corpus({"degenerate": 3})
        with pytest.raises(EmptyCorpus):
            overlap_distribution(records, "tweet")

    def test_recognizer_closure_property(self):
        records, matrix, expected = build_staged_corpus(
            {"accepted": 5, "not_teasing": 4, "abstractivity_high": 3,
             "abstractivity_low": 2})
        params = RecognizerParams()
        accepted = [r for r in records
                    if is_teaser(r, matrix, params).stage is Stage.ACCEPTED]
        scores = pair_scores(accepted, "tweet", p=params.p, q=params.q)
        assert len(scores) == 5
        assert all(params.low <= s <= params.high for s in scores)


class TestLengthStats:
    def _record(self, tweet, highlight=None):
        return Record.build("x", "Arta artb.", "Hdla hdlb", tweet, CFG,
                            highlight=highlight)

    def test_single_record(self):
        stats = length_stats([self._record("one two three four five six "
                                           "seven eight nine ten")], "tweet")
        assert stats == LengthStats(1, 10.0, 0.0)

    def test_population_std(self):
        records = [self._record(" ".join(["w"] * 8)),
                   self._record(" ".join(["w"] * 12))]
        stats = length_stats(records, "tweet")
        assert stats.mean == 10.0
        assert stats.std == 2.0

    def test_empty_set_flagged(self):
        stats = length_stats([], "tweet")
        assert stats.n == 0 and stats.mean is None and stats.std is None

    def test_missing_highlight_skipped(self):
        records = [self._record("t", highlight="a b c"),
                   self._record("t", highlight=None)]
        stats = length_stats(records, "highlight")
        assert stats.n == 1 and stats.mean == 3.0


class TestHistogramTsv:
    def test_rows_and_header(self):
        hist = histogram([0.5, 0.25], bins=4)
        tsv = histogram_tsv({"tweet_vs_article": hist})
        lines = tsv.strip().splitlines()
        assert lines[0] == "pair\tbin_left\tbin_right\tdensity"
        assert len(lines) == 5
        assert all(ln.startswith("tweet_vs_article\t") for ln in lines[1:])
