"""Domain types every other module builds on.

All types are immutable values validated on construction, so invalid
spans or annotation sets are unrepresentable downstream. Character
offsets count Unicode scalar values (Python string indices), never
bytes or UTF-16 units.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from ..errors import InvalidScheme, OverlappingSpans, ValidationError

#: Implicit "outside" label; any uncovered character is O. Never stored.
OUTSIDE = "O"
#: Sentinel label carried by spans the two annotators disagree on.
CONFLICT = "???"
#: Author of an automatically merged annotation set.
MERGED_AUTHOR = "MERGED"
#: Author of an adjudicated, ground-truth annotation set.
GOLD_AUTHOR = "GOLD"

RESERVED_LABELS = frozenset({OUTSIDE, CONFLICT})


@dataclass(frozen=True)
class Document:
    """One immutable text unit (e.g. a job ad), addressed by a stable id."""

    id: str
    text: str
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("document id must be nonempty")
        if len(self.text) < 1:
            raise ValidationError(f"document {self.id!r}: text must be nonempty")
        for k, v in self.meta.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValidationError(f"document {self.id!r}: meta must map str to str")


@dataclass(frozen=True)
class Span:
    """A labeled half-open character interval, the atom of all annotation logic.

    ``label == "???"`` marks a merge conflict; such spans always carry the
    original label in ``candidate_label`` and the disagreeing annotator in
    ``origin``.
    """

    start: int
    end: int
    label: str
    origin: str | None = None
    candidate_label: str | None = None
    confidence: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.start, int) and isinstance(self.end, int)):
            raise ValidationError("span offsets must be integers")
        if not 0 <= self.start < self.end:
            raise ValidationError(f"invalid span offsets ({self.start}, {self.end})")
        if not self.label or self.label == OUTSIDE:
            raise ValidationError("span label must be nonempty and not the implicit O")
        if self.label == CONFLICT:
            if self.candidate_label is None:
                raise ValidationError("conflict span requires candidate_label")
            if self.origin is None:
                raise ValidationError("conflict span requires origin")
        elif self.candidate_label is not None:
            raise ValidationError("candidate_label is only legal on conflict spans")
        if self.candidate_label is not None and (
            not self.candidate_label or self.candidate_label in RESERVED_LABELS
        ):
            raise ValidationError(f"invalid candidate_label {self.candidate_label!r}")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValidationError(f"confidence {self.confidence} outside [0, 1]")

    @property
    def triple(self) -> tuple[int, int, str]:
        return (self.start, self.end, self.label)

    @property
    def sort_key(self) -> tuple[int, int, str, str, str]:
        return (self.start, self.end, self.label, self.candidate_label or "", self.origin or "")

    def overlaps(self, other: "Span | TokenSpan") -> bool:
        return self.start < other.end and other.start < self.end

    def is_conflict(self) -> bool:
        return self.label == CONFLICT


@dataclass(frozen=True)
class TokenSpan:
    """Character extent of one token; tokens of a document are sorted and disjoint."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValidationError(f"invalid token offsets ({self.start}, {self.end})")

    def overlaps(self, other: "Span | TokenSpan") -> bool:
        return self.start < other.end and other.start < self.end


def _check_disjoint(spans: Iterable[Span], context: str) -> None:
    max_end = -1
    prev = None
    for span in spans:  # expects spans sorted by start
        if span.start < max_end:
            raise OverlappingSpans(f"{context}: {prev.triple} overlaps {span.triple}")
        if span.end > max_end:
            max_end = span.end
            prev = span


@dataclass(frozen=True)
class AnnotationSet:
    """One author's spans for one document.

    The author is an annotator id, a prediction provider identity, or one
    of the reserved values ``MERGED`` / ``GOLD``. Only MERGED sets may
    contain conflict spans, and their agreed (non-conflict) spans must
    still be pairwise disjoint. Spans are normalized to sorted order on
    construction; exact duplicates are rejected.
    """

    doc_id: str
    author: str
    scheme_version: int
    spans: tuple[Span, ...] = ()

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValidationError("doc_id must be nonempty")
        if not self.author:
            raise ValidationError("author must be nonempty")
        if not (isinstance(self.scheme_version, int) and self.scheme_version >= 1):
            raise ValidationError(f"scheme_version must be an integer >= 1, got {self.scheme_version!r}")
        ordered = tuple(sorted(self.spans, key=lambda s: s.sort_key))
        object.__setattr__(self, "spans", ordered)
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise ValidationError(f"duplicate span {a.triple} in {self.doc_id!r}/{self.author!r}")
        if self.author == MERGED_AUTHOR:
            _check_disjoint(
                (s for s in ordered if not s.is_conflict()),
                f"agreed spans of merged set {self.doc_id!r}",
            )
        else:
            for span in ordered:
                if span.is_conflict():
                    raise ValidationError(
                        f"set {self.doc_id!r}/{self.author!r}: conflict label only legal in MERGED sets"
                    )
            _check_disjoint(ordered, f"set {self.doc_id!r}/{self.author!r}")

    def agreed_spans(self) -> tuple[Span, ...]:
        return tuple(s for s in self.spans if not s.is_conflict())

    def conflict_spans(self) -> tuple[Span, ...]:
        return tuple(s for s in self.spans if s.is_conflict())

    def with_author(self, author: str) -> "AnnotationSet":
        return replace(self, author=author)


@dataclass(frozen=True)
class LabelScheme:
    """Versioned class system. ``O`` and ``???`` are implicit, never listed."""

    version: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.version, int) and self.version >= 1):
            raise InvalidScheme(f"scheme version must be an integer >= 1, got {self.version!r}")
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise InvalidScheme("scheme must define at least one label")
        seen: set[str] = set()
        for label in labels:
            if not label:
                raise InvalidScheme("empty label id")
            if label in RESERVED_LABELS:
                raise InvalidScheme(f"label {label!r} is reserved")
            if label in seen:
                raise InvalidScheme(f"duplicate label {label!r}")
            seen.add(label)

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def bio_tags(self) -> tuple[str, ...]:
        """Canonical tag vocabulary: O followed by B-/I- per label, scheme order."""
        tags = [OUTSIDE]
        for label in self.labels:
            tags.append(f"B-{label}")
            tags.append(f"I-{label}")
        return tuple(tags)


def doc_map(documents: Iterable[Document] | Mapping[str, Document]) -> dict[str, Document]:
    """Normalize a document collection to an id-keyed mapping."""
    if isinstance(documents, Mapping):
        return dict(documents)
    return {d.id: d for d in documents}
