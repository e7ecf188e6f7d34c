"""Entity- and token-level precision/recall/F1, micro-averages, confusion.

Entity matching is exact-boundary (standard for flat NER); token scores
strip BIO prefixes and exclude tokens that are O on both sides, so the
entity/token gap directly reflects boundary errors on multi-word
entities. Division-by-zero convention: P, R and F1 are 0 when their
denominators are 0; support-0 classes are shown but excluded from micro
pooling.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .core.bio import token_labels
from .core.tokenizer import tokenize
from .core.types import CONFLICT, OUTSIDE, AnnotationSet, Document, LabelScheme, doc_map
from .errors import DocSetMismatch, SchemeMismatch, ValidationError


@dataclass(frozen=True)
class ClassScores:
    entity_p: float
    entity_r: float
    entity_f1: float
    token_p: float
    token_r: float
    token_f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    label_order: tuple[str, ...]
    per_class: dict[str, ClassScores]
    micro_entity_p: float
    micro_entity_r: float
    micro_entity_f1: float
    micro_token_p: float
    micro_token_r: float
    micro_token_f1: float
    confusion: dict[str, dict[str, int]]
    doc_count: int


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def evaluate(
    gold: Sequence[AnnotationSet],
    pred: Sequence[AnnotationSet],
    scheme: LabelScheme,
    documents: Iterable[Document] | Mapping[str, Document],
) -> EvalReport:
    """Score predictions against gold at entity and token level."""
    docs = doc_map(documents)
    gold_by_doc = {s.doc_id: s for s in gold}
    pred_by_doc = {s.doc_id: s for s in pred}
    if len(gold_by_doc) != len(gold) or len(pred_by_doc) != len(pred):
        raise DocSetMismatch("duplicate doc_id within gold or pred")
    if gold_by_doc.keys() != pred_by_doc.keys():
        raise DocSetMismatch(
            f"gold and pred cover different documents "
            f"(only gold: {sorted(gold_by_doc.keys() - pred_by_doc.keys())}, "
            f"only pred: {sorted(pred_by_doc.keys() - gold_by_doc.keys())})"
        )

    ent_tp: Counter[str] = Counter()
    ent_fp: Counter[str] = Counter()
    ent_fn: Counter[str] = Counter()
    tok_tp: Counter[str] = Counter()
    tok_fp: Counter[str] = Counter()
    tok_fn: Counter[str] = Counter()
    confusion: dict[str, dict[str, int]] = {
        g: {p: 0 for p in (*scheme.labels, OUTSIDE)} for g in (*scheme.labels, OUTSIDE)
    }
    support: Counter[str] = Counter()

    for doc_id in sorted(gold_by_doc):
        g_set, p_set = gold_by_doc[doc_id], pred_by_doc[doc_id]
        for aset in (g_set, p_set):
            if aset.scheme_version != scheme.version:
                raise SchemeMismatch(
                    f"set {aset.doc_id!r}/{aset.author!r} is at scheme v{aset.scheme_version}, "
                    f"expected v{scheme.version}"
                )
            for span in aset.spans:
                if span.label == CONFLICT or span.label not in scheme:
                    raise ValidationError(f"label {span.label!r} not in scheme v{scheme.version}")
        if doc_id not in docs:
            raise DocSetMismatch(f"no document text for {doc_id!r}")

        g_triples = {s.triple for s in g_set.spans}
        p_triples = {s.triple for s in p_set.spans}
        for (_, _, label) in g_triples & p_triples:
            ent_tp[label] += 1
        for (_, _, label) in p_triples - g_triples:
            ent_fp[label] += 1
        for (_, _, label) in g_triples - p_triples:
            ent_fn[label] += 1
        for (_, _, label) in g_triples:
            support[label] += 1

        tokens = tokenize(docs[doc_id].text)
        g_tags = token_labels(tokens, g_set.spans)
        p_tags = token_labels(tokens, p_set.spans)
        for g_tag, p_tag in zip(g_tags, p_tags):
            confusion[g_tag][p_tag] += 1
            if g_tag == p_tag:
                if g_tag != OUTSIDE:
                    tok_tp[g_tag] += 1
            else:
                if p_tag != OUTSIDE:
                    tok_fp[p_tag] += 1
                if g_tag != OUTSIDE:
                    tok_fn[g_tag] += 1

    per_class: dict[str, ClassScores] = {}
    for label in scheme.labels:
        ep, er, ef = _prf(ent_tp[label], ent_fp[label], ent_fn[label])
        tp_, tr, tf = _prf(tok_tp[label], tok_fp[label], tok_fn[label])
        per_class[label] = ClassScores(ep, er, ef, tp_, tr, tf, support[label])

    mep, mer, mef = _prf(sum(ent_tp.values()), sum(ent_fp.values()), sum(ent_fn.values()))
    mtp, mtr, mtf = _prf(sum(tok_tp.values()), sum(tok_fp.values()), sum(tok_fn.values()))

    return EvalReport(
        label_order=tuple(scheme.labels),
        per_class=per_class,
        micro_entity_p=mep,
        micro_entity_r=mer,
        micro_entity_f1=mef,
        micro_token_p=mtp,
        micro_token_r=mtr,
        micro_token_f1=mtf,
        confusion=confusion,
        doc_count=len(gold_by_doc),
    )


# --- rendering ---------------------------------------------------------------

MICRO_ROW = "micro-average"


def _grid(report: EvalReport) -> list[tuple[str, str, str]]:
    rows = [(label, f"{report.per_class[label].entity_f1:.2f}", f"{report.per_class[label].token_f1:.2f}")
            for label in report.label_order]
    rows.append((MICRO_ROW, f"{report.micro_entity_f1:.2f}", f"{report.micro_token_f1:.2f}"))
    return rows


def _render_table(report: EvalReport) -> str:
    rows = _grid(report)
    header = ("Class", "entity", "token")
    width = max(len(r[0]) for r in rows + [header])
    lines = [f"{header[0]:<{width}}  {header[1]:>6}  {header[2]:>6}"]
    lines.append("-" * (width + 16))
    for name, entity, token in rows[:-1]:
        lines.append(f"{name:<{width}}  {entity:>6}  {token:>6}")
    lines.append("-" * (width + 16))
    name, entity, token = rows[-1]
    lines.append(f"{name:<{width}}  {entity:>6}  {token:>6}")
    return "\n".join(lines)


def _render_markdown(report: EvalReport) -> str:
    lines = ["| Class | entity | token |", "| --- | --- | --- |"]
    rows = _grid(report)
    for name, entity, token in rows[:-1]:
        lines.append(f"| {name} | {entity} | {token} |")
    name, entity, token = rows[-1]
    lines.append(f"| **{name}** | **{entity}** | **{token}** |")
    return "\n".join(lines)


def report_to_json(report: EvalReport) -> dict[str, Any]:
    return {
        "doc_count": report.doc_count,
        "label_order": list(report.label_order),
        "per_class": {
            label: {
                "entity_p": s.entity_p,
                "entity_r": s.entity_r,
                "entity_f1": s.entity_f1,
                "token_p": s.token_p,
                "token_r": s.token_r,
                "token_f1": s.token_f1,
                "support": s.support,
            }
            for label, s in report.per_class.items()
        },
        "micro": {
            "entity_p": report.micro_entity_p,
            "entity_r": report.micro_entity_r,
            "entity_f1": report.micro_entity_f1,
            "token_p": report.micro_token_p,
            "token_r": report.micro_token_r,
            "token_f1": report.micro_token_f1,
        },
        "confusion": {g: dict(row) for g, row in report.confusion.items()},
    }


def report_from_json(obj: dict[str, Any]) -> EvalReport:
    per_class = {
        label: ClassScores(
            entity_p=s["entity_p"],
            entity_r=s["entity_r"],
            entity_f1=s["entity_f1"],
            token_p=s["token_p"],
            token_r=s["token_r"],
            token_f1=s["token_f1"],
            support=s["support"],
        )
        for label, s in obj["per_class"].items()
    }
    micro = obj["micro"]
    return EvalReport(
        label_order=tuple(obj["label_order"]),
        per_class=per_class,
        micro_entity_p=micro["entity_p"],
        micro_entity_r=micro["entity_r"],
        micro_entity_f1=micro["entity_f1"],
        micro_token_p=micro["token_p"],
        micro_token_r=micro["token_r"],
        micro_token_f1=micro["token_f1"],
        confusion={g: dict(row) for g, row in obj["confusion"].items()},
        doc_count=obj["doc_count"],
    )


def render_report(report: EvalReport, format: str = "table") -> str:
    """Render as an aligned text table, lossless JSON, or a markdown grid."""
    if format == "table":
        return _render_table(report)
    if format == "markdown":
        return _render_markdown(report)
    if format == "json":
        return json.dumps(report_to_json(report), ensure_ascii=False, indent=2)
    raise ValidationError(f"unknown report format {format!r}")
