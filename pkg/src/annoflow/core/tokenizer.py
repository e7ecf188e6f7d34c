"""Deterministic default tokenizer.

Maximal runs of letters/digits form one token, every other non-space
character is a token of its own, whitespace separates. This is a
stand-in for whatever tokenization a downstream model uses; token-level
metrics are always relative to the tokenizer that produced them.
"""
from __future__ import annotations

from .types import TokenSpan


def tokenize(text: str) -> list[TokenSpan]:
    """Split text into offset-carrying tokens; pure and platform-stable."""
    tokens: list[TokenSpan] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isalnum():
            j = i + 1
            while j < n and text[j].isalnum():
                j += 1
            tokens.append(TokenSpan(i, j))
            i = j
        else:
            tokens.append(TokenSpan(i, i + 1))
            i += 1
    return tokens
