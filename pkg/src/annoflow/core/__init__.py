"""Domain types, the default tokenizer and the BIO codecs."""
from .bio import bio_to_spans, decode_bio_runs, spans_to_bio, strip_bio_prefix, token_labels
from .tokenizer import tokenize
from .types import (
    CONFLICT,
    GOLD_AUTHOR,
    MERGED_AUTHOR,
    OUTSIDE,
    AnnotationSet,
    Document,
    LabelScheme,
    Span,
    TokenSpan,
    doc_map,
)

__all__ = [
    "CONFLICT",
    "GOLD_AUTHOR",
    "MERGED_AUTHOR",
    "OUTSIDE",
    "AnnotationSet",
    "Document",
    "LabelScheme",
    "Span",
    "TokenSpan",
    "bio_to_spans",
    "decode_bio_runs",
    "doc_map",
    "spans_to_bio",
    "strip_bio_prefix",
    "token_labels",
    "tokenize",
]
