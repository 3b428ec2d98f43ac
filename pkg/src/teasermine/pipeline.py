"""End-to-end pipeline: each stage reads/writes declared artifacts.

Stage order: ingest -> cluster -> relevance -> threshold (unless fixed) ->
recognize -> stats -> split. Every run writes a manifest with the config
hash and a checksum per artifact; runs are deterministic for a fixed seed,
so artifacts are byte-identical across repeats.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

from . import figures, stats as stats_mod
from .config import PipelineConfig
from .corpus import SplitSpec, ingest, split, write_records
from .domains import (
    DomainModel,
    PrecomputedEmbeddingProvider,
    TfidfEmbeddingProvider,
    article_size_report,
    attach_term_counts,
    elbow_scan,
    keyword_report,
    kmeans,
)
from .errors import StageFailure, TeaserMineError
from .recognizer import Record, Stage, analyze, is_teaser, prune_report
from .relevance import RelevanceMatrix, build_matrix
from .threshold import (
    AbstractiveRecord,
    ThresholdCurve,
    candidate_grid,
    overlap_ratio_curve,
    pareto_sets,
    select_threshold,
)

log = logging.getLogger(__name__)

__version__ = "0.1.0"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class PipelineRun:
    """Shared context for CLI stages and the full run."""

    def __init__(self, config: PipelineConfig, out_dir: str | Path | None = None):
        self.config = config
        self.out = Path(out_dir if out_dir is not None else config.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.notes: dict[str, str] = {}

    def path(self, name: str) -> Path:
        return self.out / name

    # ---- stages -----------------------------------------------------

    def stage_ingest(self, input_path: str | Path) -> list[Record]:
        report = ingest(input_path, self.config.norm_config(),
                        account_allowlist=self.config.account_allowlist)
        write_records(report.records, self.path("records.ndjson"))
        self.notes["ingest"] = (
            f"{len(report.records)} records, {report.n_skipped} skipped")
        log.info("ingest: %s", self.notes["ingest"])
        return report.records

    def stage_cluster(self, records: list[Record]) -> DomainModel:
        cfg = self.config
        if cfg.embeddings_file:
            provider = PrecomputedEmbeddingProvider(cfg.embeddings_file)
        else:
            provider = TfidfEmbeddingProvider(
                (r.article_concat() for r in records), dim=cfg.embedding_dim)
        points = {}
        unclustered = []
        for record in records:
            try:
                points[record.id] = provider.embed(record.article_concat(), record.id)
            except TeaserMineError:
                unclustered.append(record.id)
        if unclustered:
            self.notes["unclustered"] = f"{len(unclustered)} records"
        model = kmeans(points, cfg.k, seed=cfg.seed,
                       max_iter=cfg.kmeans_max_iter, tol=cfg.kmeans_tol)
        tokens_by_id = {r.id: r.article_tokens() for r in records
                        if r.id in points}
        attach_term_counts(model, tokens_by_id)

        if cfg.elbow_scan:
            diag = elbow_scan(points, range(cfg.elbow_k_min, cfg.elbow_k_max + 1),
                              seed=cfg.seed, max_iter=cfg.kmeans_max_iter,
                              tol=cfg.kmeans_tol)
            figures.render_elbow(diag.sse_by_k, diag.suggested_k,
                                 self.path("elbow.png"))
            self.notes["elbow"] = f"suggested k={diag.suggested_k}"

        keywords = keyword_report(
            model, {r.id: r.keywords for r in records}, cfg.keyword_top_n)
        sizes = article_size_report(
            model, {r.id: len(r.article_raw.split()) for r in records
                    if r.id in points})
        with open(self.path("domain_keywords.tsv"), "w", encoding="utf-8") as fh:
            fh.write("domain\tavg_article_words\ttop_keywords\n")
            for d in model.domains():
                tops = ", ".join(f"{w}({n})" for w, n in keywords[d][:12])
                fh.write(f"{d}\t{sizes.get(d, 0.0):.1f}\t{tops}\n")

        self.path("domain_model.json").write_text(model.to_json(), "utf-8")
        self.notes["cluster"] = f"k={model.k}, sse={model.sse:.6g}"
        return model

    def stage_relevance(self, model: DomainModel) -> RelevanceMatrix:
        matrix = build_matrix(model, default_oov=self.config.default_oov)
        matrix.to_ndjson(self.path("dr_matrix.ndjson"))
        self.notes["relevance"] = f"{len(matrix.vocabulary)} vocabulary terms"
        return matrix

    def _abstractive(self, records, model):
        params = self.config.recognizer_params(dr_threshold=1.0)
        out = []
        for record in records:
            domain = model.assignments.get(record.id)
            if domain is None:
                continue
            analysis = analyze(record.with_domain(domain), params)
            if analysis.passed and analysis.nonoverlap_words:
                out.append(AbstractiveRecord(
                    record.id, domain, analysis.nonoverlap_words))
        return out

    def stage_threshold(self, records, model, matrix) -> float:
        cfg = self.config
        pareto = pareto_sets(model, cfg.pareto_coverage)
        grid = candidate_grid(cfg.grid_start, cfg.grid_stop, cfg.grid_points)
        curve = overlap_ratio_curve(
            grid, self._abstractive(records, model), matrix, pareto)
        curve.selected = select_threshold(curve)
        self._write_curve(curve)
        figures.render_threshold_curve(curve, self.path("threshold_curve.png"))
        self.notes["threshold"] = f"selected {curve.selected:.6g}"
        return curve.selected

    def _write_curve(self, curve: ThresholdCurve) -> None:
        with open(self.path("threshold_curve.tsv"), "w", encoding="utf-8") as fh:
            fh.write(f"# selected={curve.selected!r}\n")
            fh.write("candidate\tdomain\tratio\tn_qualifying\n")
            for i, cand in enumerate(curve.candidates):
                for d in sorted(curve.overlap_ratio):
                    fh.write(f"{cand!r}\t{d}\t{curve.overlap_ratio[d][i]:.6f}"
                             f"\t{curve.n_qualifying[d][i]}\n")

    def stage_recognize(self, records, model, matrix, dr_threshold: float):
        params = self.config.recognizer_params(dr_threshold=dr_threshold)
        verdicts = []
        with open(self.path("verdicts.ndjson"), "w", encoding="utf-8") as fh:
            for record in records:
                domain = model.assignments.get(record.id)
                if domain is None:
                    continue
                verdict = is_teaser(record.with_domain(domain), matrix, params)
                verdicts.append(verdict)
                fh.write(json.dumps({
                    "id": verdict.record_id,
                    "is_teaser": verdict.is_teaser,
                    "stage": verdict.stage.value,
                    "max_overlap": verdict.max_overlap,
                    "nonoverlap_words": list(verdict.nonoverlap_words or ()),
                    "min_dr": verdict.min_dr,
                }, sort_keys=True) + "\n")
        report = prune_report(verdicts)
        self.path("prune_report.tsv").write_text(report.to_tsv(), "utf-8")
        self.notes["recognize"] = (
            f"{report.counts[Stage.ACCEPTED]}/{report.total} accepted")
        return verdicts

    def stage_stats(self, records, verdicts) -> None:
        cfg = self.config
        accepted_ids = {v.record_id for v in verdicts if v.is_teaser}
        accepted = [r for r in records if r.id in accepted_ids]
        histograms = {}
        summary = {"accepted": len(accepted)}
        for pair, label in (("tweet", "tweet_vs_article"),
                            ("headline", "headline_vs_article")):
            scores = stats_mod.pair_scores(accepted, pair, p=cfg.p, q=cfg.q)
            if scores:
                hist = stats_mod.histogram(scores, bins=cfg.bins)
                histograms[label] = hist
                summary[label] = {"n": hist.n, "mean": hist.mean, "std": hist.std}
                figures.render_histogram(
                    hist, label.replace("_", " "), self.path(f"hist_{pair}_article.png"))
        for field in ("tweet", "headline", "highlight"):
            ls = stats_mod.length_stats(accepted, field)
            summary[f"{field}_words"] = (
                {"n": ls.n, "mean": ls.mean, "std": ls.std})
        with open(self.path("histograms.tsv"), "w", encoding="utf-8") as fh:
            fh.write(stats_mod.histogram_tsv(histograms))
        self.path("stats_summary.json").write_text(
            json.dumps(summary, sort_keys=True, indent=1), "utf-8")
        self.notes["stats"] = f"{len(accepted)} accepted records summarized"

    def stage_split(self, records, model, verdicts) -> None:
        cfg = self.config
        accepted_ids = {v.record_id for v in verdicts if v.is_teaser}
        accepted = [r.with_domain(model.assignments[r.id])
                    for r in records if r.id in accepted_ids]
        sizes = (cfg.train_size, cfg.validation_size, cfg.test_size)
        if sizes == (0, 0, 0):
            sizes = _auto_split_sizes(accepted, cfg.domain_balance)
            self.notes["split_sizes"] = "auto " + "/".join(map(str, sizes))
        spec = SplitSpec(*sizes, domain_balance=cfg.domain_balance,
                         dedup_jaccard_threshold=cfg.dedup_jaccard,
                         seed=cfg.seed)
        result = split(accepted, spec)
        self.path("splits.json").write_text(result.to_json(), "utf-8")
        self.notes["split"] = (
            f"{len(result.train)}/{len(result.validation)}/{len(result.test)}"
            f" (removed {len(result.removed)})")

    # ---- driver ------------------------------------------------------

    def write_manifest(self, incomplete: str | None = None) -> None:
        artifacts = {
            p.name: _sha256(p)
            for p in sorted(self.out.iterdir())
            if p.is_file() and p.name != "manifest.json"
        }
        manifest = {
            "version": __version__,
            "config_digest": self.config.digest(),
            "seed": self.config.seed,
            "artifacts": artifacts,
            "notes": dict(sorted(self.notes.items())),
        }
        if incomplete:
            manifest["incomplete"] = incomplete
        self.path("manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=1), "utf-8")


def _auto_split_sizes(accepted, balanced: bool) -> tuple[int, int, int]:
    """80/10/10, scaled to the smallest domain when balancing."""
    if not balanced:
        n = len(accepted)
        return int(n * 0.8), int(n * 0.1), int(n * 0.1)
    counts: dict[int, int] = {}
    for record in accepted:
        counts[record.domain] = counts.get(record.domain, 0) + 1
    if not counts:
        return 0, 0, 0
    m, k = min(counts.values()), len(counts)
    return int(m * 0.8) * k, int(m * 0.1) * k, int(m * 0.1) * k


def run_pipeline(config: PipelineConfig, input_path: str | Path,
                 out_dir: str | Path | None = None) -> Path:
    """Execute every stage and write the manifest; returns the out dir."""
    run = PipelineRun(config, out_dir)
    stage = "ingest"
    try:
        records = run.stage_ingest(input_path)
        stage = "cluster"
        model = run.stage_cluster(records)
        stage = "relevance"
        matrix = run.stage_relevance(model)
        stage = "threshold"
        if config.dr_threshold is None:
            dr_threshold = run.stage_threshold(records, model, matrix)
        else:
            dr_threshold = config.dr_threshold
            run.notes["threshold"] = f"fixed {dr_threshold!r}"
        stage = "recognize"
        verdicts = run.stage_recognize(records, model, matrix, dr_threshold)
        stage = "stats"
        run.stage_stats(records, verdicts)
        stage = "split"
        run.stage_split(records, model, verdicts)
    except Exception as exc:
        run.notes[stage] = f"FAILED: {exc}"
        run.write_manifest(incomplete=stage)
        raise StageFailure(stage, str(exc)) from exc
    run.write_manifest()
    return run.out
