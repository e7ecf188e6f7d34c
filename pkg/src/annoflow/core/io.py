"""JSON Lines readers/writers for the documented file formats.

Writers are canonical (fixed key order, compact separators, UTF-8, one
trailing newline per record) so that rewriting unchanged state yields
byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Iterator

from ..errors import SchemaViolation, StorageError
from .types import AnnotationSet, Document, Span


def dumps_line(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def read_jsonl(path: str | Path) -> Iterator[Any]:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaViolation(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc


def write_jsonl(path: str | Path, records: Iterable[Any]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            for record in records:
                fh.write(dumps_line(record))
                fh.write("\n")
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


# --- documents -------------------------------------------------------------

def document_to_json(doc: Document) -> dict[str, Any]:
    return {"id": doc.id, "text": doc.text, "meta": dict(doc.meta)}

def document_from_json(obj: dict[str, Any]) -> Document:
    try:
        return Document(id=obj["id"], text=obj["text"], meta=dict(obj.get("meta") or {}))
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaViolation(f"malformed document record: {obj!r}") from exc


def read_documents(path: str | Path) -> list[Document]:
    return [document_from_json(obj) for obj in read_jsonl(path)]


def write_documents(path: str | Path, docs: Iterable[Document]) -> None:
    write_jsonl(path, (document_to_json(d) for d in docs))


# --- annotation sets -------------------------------------------------------

def span_to_json(span: Span) -> dict[str, Any]:
    return {
        "start": span.start,
        "end": span.end,
        "label": span.label,
        "candidate_label": span.candidate_label,
        "origin": span.origin,
        "confidence": span.confidence,
    }


def span_from_json(obj: dict[str, Any]) -> Span:
    try:
        return Span(
            start=obj["start"],
            end=obj["end"],
            label=obj["label"],
            candidate_label=obj.get("candidate_label"),
            origin=obj.get("origin"),
            confidence=obj.get("confidence"),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaViolation(f"malformed span record: {obj!r}") from exc


def annotation_set_to_json(aset: AnnotationSet) -> dict[str, Any]:
    return {
        "doc_id": aset.doc_id,
        "author": aset.author,
        "scheme_version": aset.scheme_version,
        "spans": [span_to_json(s) for s in aset.spans],
    }


def annotation_set_from_json(obj: dict[str, Any]) -> AnnotationSet:
    try:
        return AnnotationSet(
            doc_id=obj["doc_id"],
            author=obj["author"],
            scheme_version=obj["scheme_version"],
            spans=tuple(span_from_json(s) for s in obj["spans"]),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaViolation(f"malformed annotation record: {obj!r}") from exc


def read_annotation_sets(path: str | Path) -> list[AnnotationSet]:
    return [annotation_set_from_json(obj) for obj in read_jsonl(path)]


def write_annotation_sets(path: str | Path, sets: Iterable[AnnotationSet]) -> None:
    write_jsonl(path, (annotation_set_to_json(a) for a in sets))
