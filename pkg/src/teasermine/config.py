"""Pipeline configuration: one TOML file, every tunable with its default.

Defaults reproduce the reference analysis settings (window 5/1, overlap
band 0.2-0.8, dr threshold 0.005 or data-driven, 8 domains, 80% Pareto
coverage, 20 histogram bins).
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .recognizer import RecognizerParams
from .textnorm import NormConfig, load_stopwords


@dataclass
class PipelineConfig:
    seed: int = 13
    out_dir: str = "out"

    # normalization
    stopwords_file: str | None = None
    stem: bool = True
    mask_numbers: bool = True
    strip_urls: bool = True
    strip_mentions: bool = True
    strip_hashtag_marks: bool = True

    # clustering
    k: int = 8
    embedding_dim: int = 512
    kmeans_max_iter: int = 100
    kmeans_tol: float = 1e-8
    embeddings_file: str | None = None
    elbow_scan: bool = False
    elbow_k_min: int = 2
    elbow_k_max: int = 12
    keyword_top_n: int = 100

    # recognition
    p: int = 5
    q: int = 1
    overlap_low: float = 0.2
    overlap_high: float = 0.8
    dr_threshold: float | None = None  # None = select from the data
    nonoverlap_direction: str = "tweet_minus_article"
    default_oov: float = 0.0

    # threshold selection
    pareto_coverage: float = 0.8
    grid_start: float = 1e-4
    grid_stop: float = 5e-2
    grid_points: int = 25

    # stats
    bins: int = 20

    # split
    train_size: int = 0  # 0 = derive balanced 80/10/10 from accepted records
    validation_size: int = 0
    test_size: int = 0
    domain_balance: bool = True
    dedup_jaccard: float = 0.8

    # rouge
    rouge_l_mode: str = "subsequence"
    rouge_keep_stopwords: bool = False

    account_allowlist: tuple[str, ...] = field(default_factory=tuple)

    _SECTIONS = {
        "normalize": {
            "stopwords_file": "stopwords_file", "stem": "stem",
            "mask_numbers": "mask_numbers", "strip_urls": "strip_urls",
            "strip_mentions": "strip_mentions",
            "strip_hashtag_marks": "strip_hashtag_marks",
        },
        "cluster": {
            "k": "k", "embedding_dim": "embedding_dim",
            "max_iter": "kmeans_max_iter", "tol": "kmeans_tol",
            "embeddings_file": "embeddings_file", "elbow_scan": "elbow_scan",
            "elbow_k_min": "elbow_k_min", "elbow_k_max": "elbow_k_max",
            "keyword_top_n": "keyword_top_n",
        },
        "recognizer": {
            "p": "p", "q": "q", "low": "overlap_low", "high": "overlap_high",
            "dr_threshold": "dr_threshold",
            "nonoverlap_direction": "nonoverlap_direction",
            "default_oov": "default_oov",
        },
        "threshold": {
            "coverage": "pareto_coverage", "grid_start": "grid_start",
            "grid_stop": "grid_stop", "grid_points": "grid_points",
        },
        "stats": {"bins": "bins"},
        "split": {
            "train_size": "train_size", "validation_size": "validation_size",
            "test_size": "test_size", "domain_balance": "domain_balance",
            "dedup_jaccard": "dedup_jaccard",
        },
        "rouge": {
            "rouge_l_mode": "rouge_l_mode",
            "keep_stopwords": "rouge_keep_stopwords",
        },
        "ingest": {"account_allowlist": "account_allowlist"},
    }

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {path}: {exc}") from exc
        return cls.from_dict(raw, source=str(path))

    @classmethod
    def from_dict(cls, raw: dict, source: str = "<dict>") -> "PipelineConfig":
        cfg = cls()
        allowed_top = {"seed", "out_dir"} | set(cls._SECTIONS)
        unknown_top = set(raw) - allowed_top
        if unknown_top:
            raise ConfigError(
                f"{source}: unknown top-level key(s): {sorted(unknown_top)}")
        for key in ("seed", "out_dir"):
            if key in raw:
                setattr(cfg, key, raw[key])
        for section, keymap in cls._SECTIONS.items():
            body = raw.get(section, {})
            if not isinstance(body, dict):
                raise ConfigError(f"{source}: [{section}] must be a table")
            for file_key, attr in keymap.items():
                if file_key in body:
                    value = body[file_key]
                    if attr == "dr_threshold" and value == "auto":
                        value = None
                    if attr == "account_allowlist":
                        value = tuple(value)
                    setattr(cfg, attr, value)
            unknown = set(body) - set(keymap)
            if unknown:
                raise ConfigError(
                    f"{source}: unknown key(s) in [{section}]: {sorted(unknown)}")
        cfg.validate()
        return cfg

    def validate(self) -> None:
        checks = [
            (isinstance(self.seed, int), "seed must be an integer"),
            (self.k >= 1, "cluster k must be >= 1"),
            (self.p >= 1 and self.q >= 1, "window p and stride q must be >= 1"),
            (0 <= self.overlap_low < self.overlap_high <= 1,
             "need 0 <= low < high <= 1"),
            (self.dr_threshold is None or self.dr_threshold > 0,
             "dr_threshold must be positive or 'auto'"),
            (0 < self.pareto_coverage < 1, "pareto coverage must be in (0,1)"),
            (self.grid_points >= 1 and 0 < self.grid_start <= self.grid_stop,
             "bad threshold grid"),
            (self.bins >= 1, "stats bins must be >= 1"),
            (0 < self.dedup_jaccard <= 1, "dedup_jaccard must be in (0,1]"),
            (self.nonoverlap_direction in
             ("tweet_minus_article", "article_minus_tweet"),
             "bad nonoverlap_direction"),
            (self.rouge_l_mode in ("subsequence", "substring"),
             "bad rouge_l_mode"),
            (min(self.train_size, self.validation_size, self.test_size) >= 0,
             "split sizes must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def norm_config(self) -> NormConfig:
        return NormConfig(
            stopwords=load_stopwords(self.stopwords_file),
            stem=self.stem,
            mask_numbers=self.mask_numbers,
            strip_urls=self.strip_urls,
            strip_mentions=self.strip_mentions,
            strip_hashtag_marks=self.strip_hashtag_marks,
        )

    def recognizer_params(self, dr_threshold: float | None = None) -> RecognizerParams:
        threshold = dr_threshold if dr_threshold is not None else self.dr_threshold
        if threshold is None:
            raise ConfigError("dr_threshold not fixed and not yet selected")
        return RecognizerParams(
            p=self.p, q=self.q, low=self.overlap_low, high=self.overlap_high,
            dr_threshold=threshold,
            nonoverlap_direction=self.nonoverlap_direction,
        )

    def digest(self) -> str:
        """Stable hash of the resolved configuration (artifact location excluded)."""
        payload = asdict(self)
        payload.pop("out_dir")
        blob = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]
