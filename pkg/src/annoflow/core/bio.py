"""BIO tag codecs between character spans and token sequences.

Span boundaries are allowed to fall inside tokens (human annotators
produce them); the encoding resolves that with the >=1-character-overlap
rule. Decoding repairs dangling I- tags (an I-X following anything other
than B-X/I-X starts a new entity), so any tag sequence over a known
vocabulary decodes.
"""
from __future__ import annotations

from typing import Sequence

from ..errors import LengthMismatch, OverlappingSpans, ValidationError
from .types import CONFLICT, OUTSIDE, Span, TokenSpan


def _check_tokens(tokens: Sequence[TokenSpan]) -> None:
    for a, b in zip(tokens, tokens[1:]):
        if b.start < a.end:
            raise ValidationError(f"tokens must be sorted and disjoint: {a} vs {b}")


def spans_to_bio(tokens: Sequence[TokenSpan], spans: Sequence[Span]) -> list[str]:
    """Tag each token: B-/I- of a span it overlaps by >=1 character, else O.

    The first token a span overlaps gets B-, the rest I-. When one token
    straddles several spans, the earliest span claims it.
    """
    _check_tokens(tokens)
    ordered = sorted(spans, key=lambda s: s.sort_key)
    max_end = -1
    prev: Span | None = None
    for span in ordered:
        if span.label == CONFLICT:
            raise ValidationError("conflict spans cannot be BIO-encoded")
        if span.start < max_end:
            raise OverlappingSpans(f"spans overlap: {prev.triple} vs {span.triple}")
        if span.end > max_end:
            max_end = span.end
            prev = span

    tags = [OUTSIDE] * len(tokens)
    claimed = [False] * len(tokens)
    idx = 0
    for span in ordered:
        while idx < len(tokens) and tokens[idx].end <= span.start:
            idx += 1
        first = True
        j = idx
        while j < len(tokens) and tokens[j].start < span.end:
            if not claimed[j]:
                tags[j] = f"{'B' if first else 'I'}-{span.label}"
                claimed[j] = True
                first = False
            j += 1
    return tags


def decode_bio_runs(tags: Sequence[str]) -> list[tuple[int, int, str]]:
    """Decode tags into half-open token-index runs ``(first, last+1, label)``.

    Applies the repair rule: I-X not preceded by B-X/I-X opens a new run.
    """
    runs: list[tuple[int, int, str]] = []
    cur_label: str | None = None
    cur_start = 0
    for i, tag in enumerate(tags):
        if tag == OUTSIDE:
            if cur_label is not None:
                runs.append((cur_start, i, cur_label))
                cur_label = None
            continue
        prefix, sep, label = tag.partition("-")
        if prefix not in ("B", "I") or not sep or not label:
            raise ValidationError(f"malformed BIO tag {tag!r} at position {i}")
        if prefix == "B" or cur_label != label:
            if cur_label is not None:
                runs.append((cur_start, i, cur_label))
            cur_label = label
            cur_start = i
    if cur_label is not None:
        runs.append((cur_start, len(tags), cur_label))
    return runs


def bio_to_spans(tokens: Sequence[TokenSpan], tags: Sequence[str]) -> list[Span]:
    """Inverse of :func:`spans_to_bio` up to token-boundary snapping."""
    if len(tokens) != len(tags):
        raise LengthMismatch(f"{len(tags)} tags for {len(tokens)} tokens")
    _check_tokens(tokens)
    return [
        Span(tokens[first].start, tokens[last - 1].end, label)
        for first, last, label in decode_bio_runs(tags)
    ]


def strip_bio_prefix(tag: str) -> str:
    """Reduce a BIO tag to its bare class label (B-X and I-X both give X)."""
    if tag == OUTSIDE:
        return OUTSIDE
    return tag.partition("-")[2]


def token_labels(tokens: Sequence[TokenSpan], spans: Sequence[Span]) -> list[str]:
    """Per-token bare class labels (the BIO encoding with prefixes stripped)."""
    return [strip_bio_prefix(t) for t in spans_to_bio(tokens, spans)]
