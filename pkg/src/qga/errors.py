"""Exception hierarchy shared across the package.

Validation failures (bad registry, bad corpus, bad config) raise QgaError
subclasses and map to exit code 1 in the CLI. Backend failures live in
qga.backend and map to exit code 2.
"""


class QgaError(Exception):
    """Base class for validation and configuration errors."""


class RegistryError(QgaError):
    """Template registry failed to parse or validate."""


class CorpusError(QgaError):
    """Corpus JSONL failed to parse or validate."""


class ConfigError(QgaError):
    """Pipeline configuration is malformed."""
