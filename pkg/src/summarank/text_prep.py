"""Text normalization and word tokenization.

Bengali-aware but script-agnostic: normalization strips a configurable
punctuation set (ASCII punctuation plus the Bengali danda/double danda by
default) and canonicalizes Unicode, so every downstream metric and
embedding sees one canonical token stream. No stemming, no stop-word
removal, digits are kept.
"""

from __future__ import annotations

import string
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

# ASCII punctuation plus the Bengali sentence terminators danda (U+0964)
# and double danda (U+0965).
DEFAULT_PUNCTUATION: frozenset[str] = frozenset(string.punctuation) | {
    "।",
    "॥",
}


@dataclass(frozen=True)
class RawDocument:
    """One corpus item: a source text and its human-written summary."""

    id: str
    text: str
    reference: str
    category: str | None = None


@dataclass(frozen=True)
class TokenSequence:
    """Ordered word tokens plus the character length of the normalized source."""

    tokens: tuple[str, ...]
    source_len_chars: int = field(default=0)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


def normalize(text: str, punctuation: frozenset[str] = DEFAULT_PUNCTUATION) -> str:
    """Canonicalize ``text``: NFC, punctuation to spaces, whitespace collapsed.

    Total function: empty output is legal and handled by callers. Letters,
    digits (including Bengali digits U+09E6-U+09EF) and all other word
    characters pass through unchanged. Idempotent.
    """
    text = unicodedata.normalize("NFC", text)
    text = "".join(" " if ch in punctuation else ch for ch in text)
    return " ".join(text.split())


def tokenize_words(text: str) -> TokenSequence:
    """Split already-normalized ``text`` into maximal non-whitespace runs."""
    return TokenSequence(tokens=tuple(text.split()), source_len_chars=len(text))


def ngrams(tokens: Sequence[str] | TokenSequence, n: int) -> Counter[tuple[str, ...]]:
    """All contiguous ``n``-token windows with multiplicity.

    Empty when the sequence is shorter than ``n``. ``n`` must be >= 1.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    if isinstance(tokens, TokenSequence):
        tokens = tokens.tokens
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
