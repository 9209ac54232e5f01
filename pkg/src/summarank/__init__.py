"""summarank: rank candidate summaries against a reference and evaluate them.

Given a source text, a human reference summary and N candidate summaries,
the library embeds all summaries, builds a star-shaped similarity graph
anchored at the reference, ranks the candidates with weighted PageRank,
selects the best one, and scores every summary with a standard NLG metric
suite (BLEU, ROUGE, METEOR, WER, WIL, BERTScore).
"""

__version__ = "0.1.0"

from summarank.errors import (
    ConfigError,
    DataError,
    ProtocolError,
    ProviderError,
    ProviderUnavailableError,
)

__all__ = [
    "__version__",
    "ConfigError",
    "DataError",
    "ProtocolError",
    "ProviderError",
    "ProviderUnavailableError",
]
