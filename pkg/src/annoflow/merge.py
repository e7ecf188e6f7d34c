"""Automatic merge of two annotators' sets and application of resolutions.

Merging keeps exactly-coinciding entities and turns everything else into
conflict variants under the ``???`` label. Variants are grouped into one
conflict per overlapping text region (transitive closure of pairwise
overlap), which is the unit a collective review session discusses.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core.types import (
    CONFLICT,
    GOLD_AUTHOR,
    MERGED_AUTHOR,
    AnnotationSet,
    LabelScheme,
    Span,
)
from .errors import (
    DocMismatch,
    OverlapAfterResolution,
    SchemeMismatch,
    UnknownConflict,
    UnresolvedConflict,
    ValidationError,
)

RESOLUTION_ACTIONS = ("accept_variant", "relabel", "reshape", "drop")


@dataclass(frozen=True)
class Conflict:
    """One disputed text region with every disagreeing variant kept."""

    conflict_id: str
    doc_id: str
    variants: tuple[Span, ...]
    status: str = "open"

    def __post_init__(self) -> None:
        if not self.variants:
            raise ValidationError(f"conflict {self.conflict_id!r} has no variants")
        for v in self.variants:
            if v.label != CONFLICT:
                raise ValidationError(f"conflict variant must carry the {CONFLICT} label, got {v.label!r}")
        if self.status not in ("open", "resolved"):
            raise ValidationError(f"invalid conflict status {self.status!r}")

    @property
    def region(self) -> tuple[int, int]:
        return (min(v.start for v in self.variants), max(v.end for v in self.variants))


@dataclass(frozen=True)
class Resolution:
    """One recorded decision for one conflict, with the resolver's identity."""

    conflict_id: str
    action: str
    variant_index: int | None = None
    label: str | None = None
    start: int | None = None
    end: int | None = None
    resolver: str = "collective"

    def __post_init__(self) -> None:
        if self.action not in RESOLUTION_ACTIONS:
            raise ValidationError(f"unknown resolution action {self.action!r}")
        if not self.conflict_id:
            raise ValidationError("resolution requires a conflict_id")
        if not self.resolver:
            raise ValidationError("resolution requires a resolver")
        if self.action == "accept_variant":
            if self.variant_index is None:
                raise ValidationError("accept_variant requires variant_index")
            if self.label is not None or self.start is not None or self.end is not None:
                raise ValidationError("accept_variant takes no label or offsets")
        elif self.action == "relabel":
            if not self.label:
                raise ValidationError("relabel requires a label")
            if self.start is not None or self.end is not None:
                raise ValidationError("relabel takes no offsets (use reshape)")
        elif self.action == "reshape":
            if self.start is None or self.end is None or not self.label:
                raise ValidationError("reshape requires start, end and label")
            if not 0 <= self.start < self.end:
                raise ValidationError(f"reshape offsets invalid ({self.start}, {self.end})")
        else:  # drop
            if any(v is not None for v in (self.variant_index, self.label, self.start, self.end)):
                raise ValidationError("drop takes no other fields")


def _as_variant(span: Span, author: str) -> Span:
    return replace(span, label=CONFLICT, candidate_label=span.label, origin=author)


def _group_variants(variants: list[Span]) -> list[list[Span]]:
    """Connected components of the overlap graph, via a start-ordered sweep."""
    groups: list[list[Span]] = []
    current: list[Span] = []
    max_end = -1
    for v in sorted(variants, key=lambda s: s.sort_key):
        if current and v.start >= max_end:
            groups.append(current)
            current = []
        current.append(v)
        max_end = max(max_end, v.end)
    if current:
        groups.append(current)
    return groups


def merge_pair(a: AnnotationSet, b: AnnotationSet) -> tuple[AnnotationSet, list[Conflict]]:
    """Merge two annotators' sets for one document.

    Spans present in both sets with identical (start, end, label) are kept
    once, unchanged. Every other span becomes a ``???`` variant carrying
    its original label and annotator. Returns the MERGED set plus the
    conflicts, ordered by text position.
    """
    if a.doc_id != b.doc_id:
        raise DocMismatch(f"{a.doc_id!r} vs {b.doc_id!r}")
    if a.scheme_version != b.scheme_version:
        raise SchemeMismatch(f"scheme {a.scheme_version} vs {b.scheme_version}")
    if a.author == b.author:
        raise ValidationError(f"merge requires two distinct annotators, both are {a.author!r}")
    for side in (a, b):
        if side.author == MERGED_AUTHOR:
            raise ValidationError("cannot merge an already-merged set")

    agreed_triples = {s.triple for s in a.spans} & {s.triple for s in b.spans}
    agreed = [Span(s, e, l) for (s, e, l) in sorted(agreed_triples)]
    variants = [_as_variant(s, a.author) for s in a.spans if s.triple not in agreed_triples]
    variants += [_as_variant(s, b.author) for s in b.spans if s.triple not in agreed_triples]

    conflicts = [
        Conflict(f"{a.doc_id}#c{i}", a.doc_id, tuple(group))
        for i, group in enumerate(_group_variants(variants))
    ]
    merged = AnnotationSet(
        doc_id=a.doc_id,
        author=MERGED_AUTHOR,
        scheme_version=a.scheme_version,
        spans=tuple(agreed) + tuple(variants),
    )
    return merged, conflicts


def resolution_span(conflict: Conflict, res: Resolution, scheme: LabelScheme | None = None) -> Span | None:
    """The gold span a resolution produces (None for drop), validated."""
    def _pick_variant(index: int) -> Span:
        if not 0 <= index < len(conflict.variants):
            raise ValidationError(
                f"{conflict.conflict_id}: variant_index {index} out of range "
                f"(has {len(conflict.variants)} variants)"
            )
        return conflict.variants[index]

    def _check_label(label: str) -> str:
        if scheme is not None and label not in scheme:
            raise ValidationError(f"{conflict.conflict_id}: label {label!r} not in scheme v{scheme.version}")
        return label

    if res.action == "drop":
        return None
    if res.action == "accept_variant":
        v = _pick_variant(res.variant_index)
        return Span(v.start, v.end, v.candidate_label, origin=v.origin, confidence=v.confidence)
    if res.action == "relabel":
        v = _pick_variant(res.variant_index if res.variant_index is not None else 0)
        return Span(v.start, v.end, _check_label(res.label), origin=res.resolver)
    # reshape
    return Span(res.start, res.end, _check_label(res.label), origin=res.resolver)


def apply_resolutions(
    merged: AnnotationSet,
    conflicts: list[Conflict],
    resolutions: list[Resolution],
    scheme: LabelScheme | None = None,
) -> AnnotationSet:
    """Turn a merged set plus resolution decisions into the GOLD set.

    Every conflict needs a resolution (when several target the same
    conflict the last one wins, matching the review session's
    last-write-wins contract). The result must satisfy the GOLD
    invariants; a resolved span colliding with an agreed span or another
    resolved span raises OverlapAfterResolution.
    """
    if merged.author != MERGED_AUTHOR:
        raise ValidationError(f"expected a MERGED set, got author {merged.author!r}")
    by_id = {c.conflict_id: c for c in conflicts}
    if len(by_id) != len(conflicts):
        raise ValidationError("duplicate conflict ids")

    chosen: dict[str, Resolution] = {}
    for res in resolutions:
        if res.conflict_id not in by_id:
            raise UnknownConflict(res.conflict_id)
        chosen[res.conflict_id] = res

    missing = [cid for cid in by_id if cid not in chosen]
    if missing:
        raise UnresolvedConflict(missing)

    resolved: list[Span] = []
    for cid, conflict in by_id.items():
        span = resolution_span(conflict, chosen[cid], scheme)
        if span is not None:
            resolved.append(span)

    gold_spans = sorted(list(merged.agreed_spans()) + resolved, key=lambda s: s.sort_key)
    max_end = -1
    prev: Span | None = None
    for span in gold_spans:
        if span.start < max_end:
            raise OverlapAfterResolution(
                f"resolved span {span.triple} overlaps {prev.triple}",
                colliding=(prev.triple, span.triple),
            )
        if span.end > max_end:
            max_end = span.end
            prev = span

    return AnnotationSet(
        doc_id=merged.doc_id,
        author=GOLD_AUTHOR,
        scheme_version=merged.scheme_version,
        spans=tuple(gold_spans),
    )


# --- resolution wire format --------------------------------------------------

def resolution_to_json(res: Resolution) -> dict:
    return {
        "conflict_id": res.conflict_id,
        "action": res.action,
        "variant_index": res.variant_index,
        "label": res.label,
        "start": res.start,
        "end": res.end,
        "resolver": res.resolver,
    }


def resolution_from_json(obj: dict) -> Resolution:
    try:
        return Resolution(
            conflict_id=obj["conflict_id"],
            action=obj["action"],
            variant_index=obj.get("variant_index"),
            label=obj.get("label"),
            start=obj.get("start"),
            end=obj.get("end"),
            resolver=obj.get("resolver") or "collective",
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed resolution record: {obj!r}") from exc


def conflict_to_json(conflict: Conflict) -> dict:
    from .core.io import span_to_json

    return {
        "conflict_id": conflict.conflict_id,
        "doc_id": conflict.doc_id,
        "status": conflict.status,
        "variants": [span_to_json(v) for v in conflict.variants],
    }


def conflict_from_json(obj: dict) -> Conflict:
    from .core.io import span_from_json

    try:
        return Conflict(
            conflict_id=obj["conflict_id"],
            doc_id=obj["doc_id"],
            status=obj.get("status", "open"),
            variants=tuple(span_from_json(v) for v in obj["variants"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed conflict record: {obj!r}") from exc
