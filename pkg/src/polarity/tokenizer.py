"""Word n-grams and character q-grams.

Terms carry a prefix naming the token type that produced them (``W2:the
lights``, ``Q3:abr``) so different token types never share a term.
"""
from __future__ import annotations

import enum
from collections import Counter
from typing import Iterable, Sequence

__all__ = [
    "TokenType",
    "ALL_TOKEN_TYPES",
    "TermBag",
    "word_ngrams",
    "char_qgrams",
    "build_term_bag",
    "parse_token_types",
    "format_token_types",
    "types_to_mask",
    "mask_to_types",
]

TermBag = Counter


class TokenType(str, enum.Enum):
    W1 = "W1"
    W2 = "W2"
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    Q6 = "Q6"
    Q7 = "Q7"

    def __str__(self) -> str:
        return self.value

    @property
    def is_word(self) -> bool:
        return self.value[0] == "W"

    @property
    def size(self) -> int:
        return int(self.value[1:])


ALL_TOKEN_TYPES = tuple(TokenType)


def types_to_mask(types: Iterable[TokenType]) -> int:
    mask = 0
    for t in types:
        mask |= 1 << ALL_TOKEN_TYPES.index(TokenType(t))
    return mask


def mask_to_types(mask: int) -> frozenset:
    if not 0 < mask < 1 << len(ALL_TOKEN_TYPES):
        raise ValueError(f"token-type mask out of range: {mask}")
    return frozenset(t for i, t in enumerate(ALL_TOKEN_TYPES) if mask >> i & 1)


def format_token_types(types: Iterable[TokenType]) -> str:
    """Canonical text form, e.g. ``W1+Q3``."""
    return "+".join(t.value for t in ALL_TOKEN_TYPES if t in set(types))


def parse_token_types(value: str | Iterable[str]) -> frozenset:
    items = value.replace(",", "+").split("+") if isinstance(value, str) else list(value)
    types = frozenset(TokenType(str(item).strip().upper()) for item in items if str(item).strip())
    if not types:
        raise ValueError("the token-type set must not be empty")
    return types


def word_ngrams(words: Sequence[str], n: int) -> list[str]:
    if n < 1:
        raise ValueError("n must be positive")
    return [" ".join(words[i:i + n]) for i in range(len(words) - n + 1)]


def char_qgrams(text: str, q: int) -> list[str]:
    """All ``len(text) - q + 1`` substrings of length ``q``, duplicates kept."""
    if q < 1:
        raise ValueError("q must be positive")
    return [text[i:i + q] for i in range(len(text) - q + 1)]


def build_term_bag(normalized_text: str, processed_words: Sequence[str], types: Iterable[TokenType]) -> TermBag:
    """Count the prefixed terms of every requested token type.

    Word n-grams come from ``processed_words`` (after negation, stopwords and
    stemming); q-grams come from ``normalized_text`` with its spaces.
    """
    types = frozenset(TokenType(t) for t in types)
    if not types:
        raise ValueError("the token-type set must not be empty")
    bag = Counter()
    for t in ALL_TOKEN_TYPES:
        if t not in types:
            continue
        grams = word_ngrams(processed_words, t.size) if t.is_word else char_qgrams(normalized_text, t.size)
        prefix = t.value + ":"
        bag.update(prefix + g for g in grams)
    return bag
