"""Batch partitioning and dual-annotator duty assignment.

The batch splits into N parts (N = number of annotators, sizes differing
by at most one). Part i goes to annotators i and i+1 mod N over the
annotator order, so every part has two distinct annotators and every
annotator works exactly two parts. The order rotates with the iteration
index to vary partners across iterations.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import TooFewAnnotators, ValidationError


@dataclass(frozen=True)
class AssignmentPlan:
    parts: tuple[tuple[str, ...], ...]
    duties: tuple[tuple[str, int], ...]

    def part_of_doc(self, doc_id: str) -> int:
        for i, part in enumerate(self.parts):
            if doc_id in part:
                return i
        raise ValidationError(f"doc {doc_id!r} is not in this iteration")

    def annotators_for_part(self, part_index: int) -> tuple[str, str]:
        pair = tuple(a for a, p in self.duties if p == part_index)
        if len(pair) != 2:
            raise ValidationError(f"part {part_index} does not have exactly two annotators")
        return pair  # type: ignore[return-value]

    def annotators_for_doc(self, doc_id: str) -> tuple[str, str]:
        return self.annotators_for_part(self.part_of_doc(doc_id))

    def parts_for_annotator(self, annotator: str) -> tuple[int, ...]:
        return tuple(p for a, p in self.duties if a == annotator)

    def docs_for_annotator(self, annotator: str) -> tuple[str, ...]:
        docs: list[str] = []
        for part_index in self.parts_for_annotator(annotator):
            docs.extend(self.parts[part_index])
        return tuple(docs)


def build_assignment_plan(
    doc_ids: list[str] | tuple[str, ...],
    annotators: list[str] | tuple[str, ...],
    iteration_index: int = 0,
) -> AssignmentPlan:
    """Cyclic dual-assignment of a batch over the annotator pool."""
    n = len(annotators)
    if n < 2:
        raise TooFewAnnotators(f"need at least 2 annotators, got {n}")
    if len(set(annotators)) != n:
        raise ValidationError("annotator ids must be unique")
    if len(set(doc_ids)) != len(doc_ids):
        raise ValidationError("batch contains duplicate doc ids")

    shift = iteration_index % n
    order = sorted(annotators)
    rotated = order[shift:] + order[:shift]

    q, r = divmod(len(doc_ids), n)
    parts: list[tuple[str, ...]] = []
    cursor = 0
    for i in range(n):
        size = q + 1 if i < r else q
        parts.append(tuple(doc_ids[cursor : cursor + size]))
        cursor += size

    duties: list[tuple[str, int]] = []
    for i in range(n):
        duties.append((rotated[i], i))
        duties.append((rotated[(i + 1) % n], i))
    return AssignmentPlan(parts=tuple(parts), duties=tuple(duties))
