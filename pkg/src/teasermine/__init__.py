"""teasermine: mine teaser-style short texts out of a news-tweet corpus.

Library surface re-exported here; the `teasermine` console script drives
the same stages from the command line.
"""

from .config import PipelineConfig
from .corpus import IngestReport, SplitSpec, ingest, read_records, split, write_records
from .domains import (
    ClusterDiagnostics,
    DomainModel,
    PrecomputedEmbeddingProvider,
    TfidfEmbeddingProvider,
    attach_term_counts,
    elbow_scan,
    embed,
    keyword_report,
    kmeans,
)
from .errors import TeaserMineError
from .evaluation import (
    evaluate_corpus,
    lead_baseline,
    prominent_baseline,
    rouge_l,
    rouge_n,
    score_pair,
)
from .overlap import (
    Abstractivity,
    abstractivity_class,
    perc_match,
    prominent_section,
    window_article,
)
from .pipeline import run_pipeline
from .recognizer import (
    Record,
    RecognitionVerdict,
    RecognizerParams,
    Stage,
    is_extract,
    is_teaser,
    nonoverlap,
    prune_report,
)
from .relevance import RelevanceMatrix, build_matrix, dr, idf_domain, tf_domain
from .stats import histogram, length_stats, overlap_distribution
from .textnorm import NormalizedText, NormConfig, normalize, split_sentences
from .threshold import (
    AbstractiveRecord,
    candidate_grid,
    overlap_ratio_curve,
    pareto_sets,
    select_threshold,
)

__version__ = "0.1.0"
