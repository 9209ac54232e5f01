"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
ProviderError -> 3.
"""


class SummarankError(Exception):
    """Base class for all package errors."""


class ConfigError(SummarankError):
    """Invalid configuration (flags, config values)."""


class DataError(SummarankError):
    """Unreadable, malformed or inconsistent input data."""


class ProviderError(SummarankError):
    """Embedding provider failure."""


class ProviderUnavailableError(ProviderError):
    """Transport failure persisting after the configured retries."""


class ProtocolError(ProviderError):
    """Provider answered, but outside the agreed wire contract."""
