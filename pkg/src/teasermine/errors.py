"""Exception types shared across the pipeline."""


class TeaserMineError(Exception):
    """Base class for all library errors."""


class EmptyReference(TeaserMineError):
    """Reference text has no unigrams / n-grams, so a ratio is undefined."""


class EmptyDomain(TeaserMineError):
    """A domain has zero total terms."""


class UnknownTerm(TeaserMineError):
    """Term occurs in no domain; idf is undefined."""


class InvalidK(TeaserMineError):
    """Requested cluster count is zero or exceeds the number of points."""


class ProviderFailure(TeaserMineError):
    """An embedding provider could not produce a vector for a document."""


class EmptyCorpus(TeaserMineError):
    """An aggregate statistic was requested over zero qualifying records."""


class EmptyArticle(TeaserMineError):
    """A baseline extractor needs at least one article sentence."""


class InsufficientRecords(TeaserMineError):
    """A domain cannot fill its split quota."""


class ConfigError(TeaserMineError):
    """Pipeline configuration is missing, unreadable, or inconsistent."""


class StageFailure(TeaserMineError):
    """A pipeline stage aborted; carries the stage name."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}' failed: {message}")
        self.stage = stage
