"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, cluster, relevance,
threshold, recognize, stats, split), plus `rouge` for scoring generation
output and `run` for the whole pipeline. Stage commands read and write the
declared artifacts inside --out-dir, so they can be re-run independently.

Exit codes: 0 success, 2 config error, 3 stage failure, 4 input I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import PipelineConfig
from .corpus import read_records
from .domains import DomainModel
from .errors import ConfigError, StageFailure, TeaserMineError
from .evaluation import evaluate_corpus, lead_baseline, prominent_baseline, score_pair
from .pipeline import PipelineRun, run_pipeline
from .recognizer import RecognitionVerdict, Stage
from .relevance import RelevanceMatrix
from .textnorm import normalize

log = logging.getLogger("teasermine")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teasermine",
        description="Teaser corpus mining, recognition and evaluation.")
    parser.add_argument("--config", help="TOML configuration file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out-dir", help="artifact directory (default: out)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and normalize a corpus")
    p_ingest.add_argument("--input", required=True)

    sub.add_parser("cluster", help="embed articles and fit domains")
    sub.add_parser("relevance", help="build the domain-relevance matrix")
    sub.add_parser("threshold", help="select the dr threshold from the data")

    p_rec = sub.add_parser("recognize", help="run teaser recognition")
    p_rec.add_argument("--dr-threshold", type=float,
                       help="override the threshold artifact/config value")

    sub.add_parser("stats", help="overlap histograms and length statistics")
    sub.add_parser("split", help="stratified train/validation/test split")

    p_rouge = sub.add_parser("rouge", help="score candidate vs reference texts")
    p_rouge.add_argument("--candidates", required=True,
                         help="NDJSON of {id, text}")
    p_rouge.add_argument("--references", required=True,
                         help="NDJSON of {id, text}")
    p_rouge.add_argument("--out", help="write per-pair TSV here")

    p_base = sub.add_parser(
        "baselines", help="emit extractive baseline texts for benchmarking")
    p_base.add_argument("--kind", choices=("lead", "prominent"),
                        default="lead")
    p_base.add_argument("--max-words", type=int, default=15)
    p_base.add_argument("--out", help="candidates NDJSON (default in out-dir)")
    p_base.add_argument("--references-field",
                        choices=("tweet", "headline", "highlight"),
                        help="also emit this field as a reference file")
    p_base.add_argument("--references-out",
                        help="references NDJSON (default in out-dir)")

    p_run = sub.add_parser("run", help="execute the full pipeline")
    p_run.add_argument("--input", required=True)

    return parser


def _load_config(args) -> PipelineConfig:
    config = (PipelineConfig.from_file(args.config) if args.config
              else PipelineConfig())
    if args.seed is not None:
        config.seed = args.seed
    if args.out_dir is not None:
        config.out_dir = args.out_dir
    return config


def _read_verdicts(path: Path) -> list[RecognitionVerdict]:
    verdicts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            verdicts.append(RecognitionVerdict(
                record_id=row["id"],
                is_teaser=row["is_teaser"],
                stage=Stage(row["stage"]),
                max_overlap=row.get("max_overlap"),
                min_dr=row.get("min_dr"),
            ))
    return verdicts


def _selected_threshold(run: PipelineRun) -> float | None:
    curve_path = run.path("threshold_curve.tsv")
    if not curve_path.exists():
        return None
    first = curve_path.read_text("utf-8").splitlines()[0]
    if first.startswith("# selected="):
        return float(first.split("=", 1)[1])
    return None


def _rouge_command(args, config: PipelineConfig) -> int:
    def read_texts(path):
        rows = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    row = json.loads(line)
                    rows[str(row["id"])] = row["text"]
        return rows

    candidates = read_texts(args.candidates)
    references = read_texts(args.references)
    shared = sorted(set(candidates) & set(references))
    if not shared:
        raise ConfigError("candidate and reference files share no ids")
    norm = config.norm_config()
    if config.rouge_keep_stopwords:
        norm = norm.without_stopwords()
    pairs = [(normalize(candidates[i], norm), normalize(references[i], norm))
             for i in shared]

    lines = ["id\trouge1_p\trouge1_r\trouge1_f1\trouge2_p\trouge2_r"
             "\trouge2_f1\trougeL_p\trougeL_r\trougeL_f1"]
    for rid, (cand, ref) in zip(shared, pairs):
        if not ref.tokens:
            lines.append(f"{rid}\tskipped: empty reference")
            continue
        s = score_pair(cand, ref, config.rouge_l_mode)
        cells = [f"{v:.6f}" for triple in (s.rouge1, s.rouge2, s.rougeL)
                 for v in triple]
        lines.append(rid + "\t" + "\t".join(cells))
    aggregate = evaluate_corpus(pairs, config.rouge_l_mode)
    summary = {
        "n_pairs": aggregate.n_pairs,
        "n_skipped": aggregate.n_skipped,
        "rouge1_f1": aggregate.rouge1.f1,
        "rouge2_f1": aggregate.rouge2.f1,
        "rougeL_f1": aggregate.rougeL.f1,
    }
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n", "utf-8")
    else:
        print("\n".join(lines))
    print(json.dumps(summary, sort_keys=True))
    return 0


def _baselines_command(args, config: PipelineConfig) -> int:
    run = PipelineRun(config)
    records = read_records(run.path("records.ndjson"))
    params = config.recognizer_params(dr_threshold=1.0)
    out_path = Path(args.out) if args.out \
        else run.path(f"baseline_{args.kind}.ndjson")
    skipped = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for record in records:
            try:
                if args.kind == "lead":
                    text = lead_baseline(record, args.max_words)
                else:
                    text = prominent_baseline(record, params)
            except TeaserMineError:
                skipped += 1
                continue
            fh.write(json.dumps({"id": record.id, "text": text},
                                sort_keys=True) + "\n")
    print(f"{args.kind} baselines for {len(records) - skipped} records "
          f"({skipped} skipped) -> {out_path}")
    if args.references_field:
        ref_path = Path(args.references_out) if args.references_out \
            else run.path(f"references_{args.references_field}.ndjson")
        attr = {"tweet": "tweet_raw", "headline": "headline_raw",
                "highlight": "highlight_raw"}[args.references_field]
        with open(ref_path, "w", encoding="utf-8") as fh:
            for record in records:
                text = getattr(record, attr)
                if text:
                    fh.write(json.dumps({"id": record.id, "text": text},
                                        sort_keys=True) + "\n")
        print(f"references -> {ref_path}")
    return 0


def _stage_command(args, config: PipelineConfig) -> int:
    run = PipelineRun(config)
    if args.command == "ingest":
        run.stage_ingest(args.input)
        print(run.notes["ingest"])
        run.write_manifest()
        return 0

    records = read_records(run.path("records.ndjson"))
    if args.command == "cluster":
        run.stage_cluster(records)
        print(run.notes["cluster"])
        run.write_manifest()
        return 0

    model = DomainModel.from_json(run.path("domain_model.json").read_text("utf-8"))
    if args.command == "relevance":
        run.stage_relevance(model)
        print(run.notes["relevance"])
        run.write_manifest()
        return 0

    matrix = RelevanceMatrix.from_ndjson(run.path("dr_matrix.ndjson"))
    if args.command == "threshold":
        selected = run.stage_threshold(records, model, matrix)
        print(f"selected dr threshold: {selected!r}")
        run.write_manifest()
        return 0

    if args.command == "recognize":
        dr_threshold = args.dr_threshold
        if dr_threshold is None:
            dr_threshold = config.dr_threshold
        if dr_threshold is None:
            dr_threshold = _selected_threshold(run)
        if dr_threshold is None:
            raise ConfigError(
                "no dr threshold: pass --dr-threshold, set it in the config, "
                "or run the threshold stage first")
        run.stage_recognize(records, model, matrix, dr_threshold)
        print(run.notes["recognize"])
        run.write_manifest()
        return 0

    verdicts = _read_verdicts(run.path("verdicts.ndjson"))
    if args.command == "stats":
        run.stage_stats(records, verdicts)
        print(run.notes["stats"])
        run.write_manifest()
        return 0
    if args.command == "split":
        run.stage_split(records, model, verdicts)
        print(run.notes["split"])
        run.write_manifest()
        return 0
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "run":
            out = run_pipeline(config, args.input)
            print(f"pipeline complete: {out}")
            return 0
        if args.command == "rouge":
            return _rouge_command(args, config)
        if args.command == "baselines":
            return _baselines_command(args, config)
        return _stage_command(args, config)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except StageFailure as exc:
        log.error("%s", exc)
        return 3
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return 4
    except TeaserMineError as exc:
        log.error("%s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
