"""Prediction providers and bootstrapping of draft annotations.

A provider returns per-token tag probabilities for requested documents;
how the model behind it is trained is entirely its own concern. Drafts
are the argmax decode with a per-entity confidence so a UI can render
shaky suggestions distinctly.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol, Sequence

import httpx

from .core.bio import decode_bio_runs
from .core.io import read_jsonl
from .core.types import OUTSIDE, AnnotationSet, Document, LabelScheme, Span, TokenSpan
from .errors import MissingDoc, ProviderUnavailable, SchemaViolation, ValidationError

ROW_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class TokenProbabilities:
    """Model output for one document: a |tokens| x |label_order| matrix."""

    doc_id: str
    scheme_version: int
    label_order: tuple[str, ...]
    tokens: tuple[TokenSpan, ...]
    probs: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.label_order:
            raise SchemaViolation(f"{self.doc_id!r}: empty label_order")
        if len(set(self.label_order)) != len(self.label_order):
            raise SchemaViolation(f"{self.doc_id!r}: duplicate tags in label_order")
        if OUTSIDE not in self.label_order:
            raise SchemaViolation(f"{self.doc_id!r}: label_order must contain O")
        for tag in self.label_order:
            if tag == OUTSIDE:
                continue
            prefix, sep, label = tag.partition("-")
            if prefix not in ("B", "I") or not sep or not label:
                raise SchemaViolation(f"{self.doc_id!r}: malformed tag {tag!r} in label_order")
        if len(self.probs) != len(self.tokens):
            raise SchemaViolation(
                f"{self.doc_id!r}: {len(self.probs)} probability rows for {len(self.tokens)} tokens"
            )
        for i, row in enumerate(self.probs):
            if len(row) != len(self.label_order):
                raise SchemaViolation(f"{self.doc_id!r}: row {i} has {len(row)} entries")
            if any(q < 0.0 for q in row):
                raise SchemaViolation(f"{self.doc_id!r}: negative probability in row {i}")
            if abs(sum(row) - 1.0) > ROW_SUM_TOLERANCE:
                raise SchemaViolation(f"{self.doc_id!r}: row {i} sums to {sum(row)!r}")
        for a, b in zip(self.tokens, self.tokens[1:]):
            if b.start < a.end:
                raise SchemaViolation(f"{self.doc_id!r}: tokens must be sorted and disjoint")

    def validate_for_scheme(self, scheme: LabelScheme) -> None:
        expected = set(scheme.bio_tags())
        got = set(self.label_order)
        if got != expected:
            raise SchemaViolation(
                f"{self.doc_id!r}: label_order does not match scheme v{scheme.version} "
                f"(unexpected: {sorted(got - expected)}, missing: {sorted(expected - got)})"
            )
        if self.scheme_version != scheme.version:
            raise SchemaViolation(
                f"{self.doc_id!r}: predictions carry scheme v{self.scheme_version}, expected v{scheme.version}"
            )


def token_probabilities_from_json(obj: dict[str, Any]) -> TokenProbabilities:
    try:
        return TokenProbabilities(
            doc_id=obj["doc_id"],
            scheme_version=obj["scheme_version"],
            label_order=tuple(obj["label_order"]),
            tokens=tuple(TokenSpan(int(t[0]), int(t[1])) for t in obj["tokens"]),
            probs=tuple(tuple(float(q) for q in row) for row in obj["probs"]),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaViolation(f"malformed prediction record: {exc}") from exc


def token_probabilities_to_json(p: TokenProbabilities) -> dict[str, Any]:
    return {
        "doc_id": p.doc_id,
        "scheme_version": p.scheme_version,
        "label_order": list(p.label_order),
        "tokens": [[t.start, t.end] for t in p.tokens],
        "probs": [list(row) for row in p.probs],
    }


class PredictionProvider(Protocol):
    """Anything that can produce raw prediction records for documents."""

    identity: str
    kind: str

    def predict(self, docs: Sequence[Document]) -> list[dict[str, Any]]:
        ...


class FilePredictionProvider:
    """Serves predictions from a JSON Lines file; deterministic by construction."""

    kind = "file"

    def __init__(self, path: str | Path, identity: str | None = None):
        self.path = Path(path)
        self.identity = identity or f"file:{self.path.stem}"

    def predict(self, docs: Sequence[Document]) -> list[dict[str, Any]]:
        if not self.path.exists():
            raise ProviderUnavailable(f"predictions file not found: {self.path}")
        wanted = {d.id for d in docs}
        records = [obj for obj in read_jsonl(self.path) if obj.get("doc_id") in wanted]
        return records


class RemotePredictionProvider:
    """POSTs documents to a model service; non-200 means unavailable."""

    kind = "remote"

    def __init__(self, url: str, identity: str | None = None, timeout: float = 30.0,
                 transport: httpx.BaseTransport | None = None):
        self.url = url.rstrip("/")
        self.identity = identity or f"remote:{self.url}"
        self._timeout = timeout
        self._transport = transport

    def predict(self, docs: Sequence[Document]) -> list[dict[str, Any]]:
        payload = {"documents": [{"id": d.id, "text": d.text} for d in docs]}
        try:
            with httpx.Client(timeout=self._timeout, transport=self._transport) as client:
                response = client.post(f"{self.url}/predict", json=payload)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"provider {self.url} unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ProviderUnavailable(f"provider {self.url} answered {response.status_code}")
        body = response.json()
        if not isinstance(body, list):
            raise SchemaViolation("provider response must be an array of prediction objects")
        return body


def fetch_predictions(
    provider: PredictionProvider,
    docs: Sequence[Document],
    scheme: LabelScheme | None = None,
) -> list[TokenProbabilities]:
    """Fetch and schema-validate one TokenProbabilities per requested document."""
    if not docs:
        raise ValidationError("no documents requested")
    raw = provider.predict(docs)
    by_doc: dict[str, dict[str, Any]] = {}
    for obj in raw:
        if not isinstance(obj, dict) or "doc_id" not in obj:
            raise SchemaViolation(f"prediction record without doc_id: {obj!r}")
        by_doc[obj["doc_id"]] = obj

    out: list[TokenProbabilities] = []
    for doc in docs:
        if doc.id not in by_doc:
            raise MissingDoc(f"provider {provider.identity!r} returned no predictions for {doc.id!r}")
        p = token_probabilities_from_json(by_doc[doc.id])
        if p.tokens and p.tokens[-1].end > len(doc.text):
            raise SchemaViolation(f"{doc.id!r}: token offsets exceed document length")
        if scheme is not None:
            p.validate_for_scheme(scheme)
        out.append(p)
    return out


def _argmax(row: Sequence[float]) -> int:
    best = 0
    for j in range(1, len(row)):
        if row[j] > row[best]:
            best = j
    return best


def predictions_to_draft(
    p: TokenProbabilities,
    min_entity_confidence: float = 0.0,
    author: str = "model",
) -> AnnotationSet:
    """Argmax-decode a draft annotation set from token probabilities.

    Ties pick the lowest index in label_order. Each span's confidence is
    the mean argmax probability of its tokens; spans below the threshold
    are dropped (default 0 keeps everything and leaves filtering to the
    operator).
    """
    if not 0.0 <= min_entity_confidence <= 1.0:
        raise ValidationError(f"min_entity_confidence {min_entity_confidence} outside [0, 1]")
    argmax = [_argmax(row) for row in p.probs]
    tags = [p.label_order[j] for j in argmax]
    spans: list[Span] = []
    for first, last, label in decode_bio_runs(tags):
        confidence = statistics.fmean(p.probs[i][argmax[i]] for i in range(first, last))
        if confidence < min_entity_confidence:
            continue
        spans.append(
            Span(
                start=p.tokens[first].start,
                end=p.tokens[last - 1].end,
                label=label,
                confidence=min(confidence, 1.0),
            )
        )
    return AnnotationSet(
        doc_id=p.doc_id,
        author=author,
        scheme_version=p.scheme_version,
        spans=tuple(spans),
    )
