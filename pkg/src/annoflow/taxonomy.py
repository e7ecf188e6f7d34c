"""Class-system adjustments: validated, logged, irreversible remaps.

An adjustment maps every old label to a new label or to O (drop). There
is deliberately no inverse operation anywhere in this API; the audit
trail records enough to explain an adjustment, never to undo it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Sequence

from .core.types import CONFLICT, OUTSIDE, AnnotationSet, LabelScheme
from .errors import (
    PartialMapping,
    UnresolvedConflictsPresent,
    ValidationError,
    VersionSkew,
)


@dataclass(frozen=True)
class ClassAdjustment:
    from_version: int
    to_version: int
    mapping: dict[str, str]
    rationale: str
    timestamp: str

    def __post_init__(self) -> None:
        if self.to_version != self.from_version + 1:
            raise ValidationError(
                f"to_version must be from_version + 1, got {self.from_version} -> {self.to_version}"
            )
        for old, new in self.mapping.items():
            if not old or old in (OUTSIDE, CONFLICT):
                raise ValidationError(f"illegal source label {old!r} in mapping")
            if not new or new == CONFLICT:
                raise ValidationError(f"illegal target label {new!r} in mapping")


def validate_adjustment(old: LabelScheme, adj: ClassAdjustment) -> LabelScheme:
    """Check an adjustment against the current scheme and build the new one.

    The new scheme keeps the old order: new labels appear in order of the
    first old label that maps onto them.
    """
    if adj.from_version != old.version:
        raise VersionSkew(f"adjustment is from v{adj.from_version}, scheme is v{old.version}")
    unmapped = [l for l in old.labels if l not in adj.mapping]
    if unmapped:
        raise PartialMapping(unmapped)
    unknown = sorted(set(adj.mapping) - set(old.labels))
    if unknown:
        raise ValidationError(f"mapping covers labels not in scheme v{old.version}: {', '.join(unknown)}")

    new_labels: list[str] = []
    for label in old.labels:
        image = adj.mapping[label]
        if image != OUTSIDE and image not in new_labels:
            new_labels.append(image)
    if not new_labels:
        raise ValidationError("adjustment would drop every class")
    return LabelScheme(version=adj.to_version, labels=tuple(new_labels))


def apply_adjustment(
    data: Sequence[AnnotationSet], adj: ClassAdjustment
) -> list[AnnotationSet]:
    """Remap every span's label; spans mapped to O are deleted.

    Adjacent same-label spans are kept separate: auto-merging would
    fabricate multi-word entities no annotator asserted. Only finalized
    or individual data is legal input; conflict spans are rejected.
    """
    out: list[AnnotationSet] = []
    for aset in data:
        if aset.scheme_version != adj.from_version:
            raise VersionSkew(
                f"set {aset.doc_id!r}/{aset.author!r} is at scheme v{aset.scheme_version}, "
                f"adjustment expects v{adj.from_version}"
            )
        new_spans = []
        for span in aset.spans:
            if span.label == CONFLICT:
                raise UnresolvedConflictsPresent(
                    f"set {aset.doc_id!r}/{aset.author!r} still contains conflict spans"
                )
            if span.label not in adj.mapping:
                raise ValidationError(
                    f"span label {span.label!r} in {aset.doc_id!r} is not covered by the mapping"
                )
            image = adj.mapping[span.label]
            if image == OUTSIDE:
                continue
            new_spans.append(replace(span, label=image))
        out.append(
            AnnotationSet(
                doc_id=aset.doc_id,
                author=aset.author,
                scheme_version=adj.to_version,
                spans=tuple(new_spans),
            )
        )
    return out


def adjustment_to_json(adj: ClassAdjustment) -> dict[str, Any]:
    return {
        "from_version": adj.from_version,
        "to_version": adj.to_version,
        "mapping": dict(adj.mapping),
        "rationale": adj.rationale,
        "timestamp": adj.timestamp,
    }


def adjustment_from_json(obj: dict[str, Any]) -> ClassAdjustment:
    try:
        return ClassAdjustment(
            from_version=obj["from_version"],
            to_version=obj["to_version"],
            mapping=dict(obj["mapping"]),
            rationale=obj.get("rationale", ""),
            timestamp=obj.get("timestamp", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed adjustment record: {obj!r}") from exc
