"""Inter-annotator agreement metrics, tracked per batch before merging.

Two complementary views: exact-match entity F1 (boundary-sensitive) and
Cohen's kappa over per-token labels including O (chance-corrected).
Kappa can be undefined on degenerate batches; that is reported as a
distinct value (None), never silently as 1.0.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .core.bio import token_labels
from .core.tokenizer import tokenize
from .core.types import AnnotationSet, Document, TokenSpan, doc_map
from .errors import DocSetMismatch


@dataclass(frozen=True)
class AgreementReport:
    doc_count: int
    pair: tuple[str, str]
    entity_f1: float
    token_kappa: float | None
    per_class_entity_f1: dict[str, float]


def _pair_by_doc(
    sets_a: Sequence[AnnotationSet], sets_b: Sequence[AnnotationSet]
) -> list[tuple[AnnotationSet, AnnotationSet]]:
    a_by_doc = {s.doc_id: s for s in sets_a}
    b_by_doc = {s.doc_id: s for s in sets_b}
    if len(a_by_doc) != len(sets_a) or len(b_by_doc) != len(sets_b):
        raise DocSetMismatch("duplicate doc_id within one side")
    if a_by_doc.keys() != b_by_doc.keys():
        only_a = sorted(a_by_doc.keys() - b_by_doc.keys())
        only_b = sorted(b_by_doc.keys() - a_by_doc.keys())
        raise DocSetMismatch(f"doc ids differ (only a: {only_a}, only b: {only_b})")
    return [(a_by_doc[d], b_by_doc[d]) for d in sorted(a_by_doc)]


def pairwise_entity_f1(
    sets_a: Sequence[AnnotationSet], sets_b: Sequence[AnnotationSet]
) -> float:
    """Micro-averaged exact-match F1 over all documents; symmetric in (a, b).

    Both sides empty is perfect agreement (1.0) by convention.
    """
    matched = total_a = total_b = 0
    for a, b in _pair_by_doc(sets_a, sets_b):
        triples_a = {s.triple for s in a.spans}
        triples_b = {s.triple for s in b.spans}
        matched += len(triples_a & triples_b)
        total_a += len(triples_a)
        total_b += len(triples_b)
    if total_a + total_b == 0:
        return 1.0
    return 2.0 * matched / (total_a + total_b)


def per_class_entity_f1(
    sets_a: Sequence[AnnotationSet], sets_b: Sequence[AnnotationSet]
) -> dict[str, float]:
    """Exact-match F1 per label, over labels either side used."""
    matched: Counter[str] = Counter()
    total: Counter[str] = Counter()
    for a, b in _pair_by_doc(sets_a, sets_b):
        triples_a = {s.triple for s in a.spans}
        triples_b = {s.triple for s in b.spans}
        for (_, _, label) in triples_a & triples_b:
            matched[label] += 1
        for (_, _, label) in list(triples_a) + list(triples_b):
            total[label] += 1
    return {label: 2.0 * matched[label] / total[label] for label in sorted(total)}


def pairwise_token_kappa(
    sets_a: Sequence[AnnotationSet],
    sets_b: Sequence[AnnotationSet],
    documents: Iterable[Document] | Mapping[str, Document],
    tokenizer: Callable[[str], list[TokenSpan]] = tokenize,
) -> float | None:
    """Cohen's kappa over pooled per-token labels (O included as a category).

    Returns None (undefined, not an error) when observed and expected
    agreement are both 1, i.e. both annotators used one single identical
    label for every token.
    """
    docs = doc_map(documents)
    xs: list[str] = []
    ys: list[str] = []
    for a, b in _pair_by_doc(sets_a, sets_b):
        if a.doc_id not in docs:
            raise DocSetMismatch(f"no document text for {a.doc_id!r}")
        tokens = tokenizer(docs[a.doc_id].text)
        xs.extend(token_labels(tokens, a.spans))
        ys.extend(token_labels(tokens, b.spans))
    n = len(xs)
    if n == 0:
        return None
    observed = sum(x == y for x, y in zip(xs, ys)) / n
    count_x = Counter(xs)
    count_y = Counter(ys)
    expected = sum(count_x[c] * count_y[c] for c in count_x.keys() | count_y.keys()) / (n * n)
    if expected == 1.0:
        return None
    return (observed - expected) / (1.0 - expected)


def build_report(
    pair: tuple[str, str],
    sets_a: Sequence[AnnotationSet],
    sets_b: Sequence[AnnotationSet],
    documents: Iterable[Document] | Mapping[str, Document],
) -> AgreementReport:
    return AgreementReport(
        doc_count=len(sets_a),
        pair=pair,
        entity_f1=pairwise_entity_f1(sets_a, sets_b),
        token_kappa=pairwise_token_kappa(sets_a, sets_b, documents),
        per_class_entity_f1=per_class_entity_f1(sets_a, sets_b),
    )


def report_to_json(report: AgreementReport) -> dict:
    return {
        "doc_count": report.doc_count,
        "pair": list(report.pair),
        "entity_f1": report.entity_f1,
        "token_kappa": report.token_kappa,
        "per_class_entity_f1": dict(report.per_class_entity_f1),
    }


def render_report_table(report: AgreementReport) -> str:
    """Aligned plain-text table: one row per class, aggregate footer."""
    rows = [("class", "entity_f1")]
    for label, f1 in report.per_class_entity_f1.items():
        rows.append((label, f"{f1:.2f}"))
    kappa = "undefined" if report.token_kappa is None else f"{report.token_kappa:.2f}"
    footer = [
        ("all classes", f"{report.entity_f1:.2f}"),
        ("token kappa", kappa),
    ]
    width = max(len(r[0]) for r in rows + footer)
    lines = [f"agreement {report.pair[0]} vs {report.pair[1]} ({report.doc_count} docs)"]
    lines += [f"{name:<{width}}  {value}" for name, value in rows]
    lines.append("-" * (width + 2 + max(len(v) for _, v in rows + footer)))
    lines += [f"{name:<{width}}  {value}" for name, value in footer]
    return "\n".join(lines)
