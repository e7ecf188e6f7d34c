from __future__ import annotations

import random

import pytest

from annoflow.core.types import AnnotationSet, Span
from annoflow.errors import (
    DocMismatch,
    OverlapAfterResolution,
    SchemeMismatch,
    UnknownConflict,
    UnresolvedConflict,
    ValidationError,
)
from annoflow.merge import Conflict, Resolution, apply_resolutions, merge_pair

from conftest import random_annotation_pair


def _set(author: str, spans: list[tuple[int, int, str]], doc_id: str = "d1") -> AnnotationSet:
    return AnnotationSet(doc_id, author, 1, tuple(Span(s, e, l) for s, e, l in spans))


class TestMergePair:
    def test_identical_inputs_no_conflicts(self):
        a = _set("annA", [(0, 4, "X"), (10, 15, "Y")])
        b = _set("annB", [(0, 4, "X"), (10, 15, "Y")])
        merged, conflicts = merge_pair(a, b)
        assert conflicts == []
        assert [s.triple for s in merged.spans] == [(0, 4, "X"), (10, 15, "Y")]
        assert merged.author == "MERGED"

    def test_one_sided_tag_becomes_conflict(self):
        a = _set("annA", [(0, 4, "SKILL_HARD")])
        b = _set("annB", [])
        merged, conflicts = merge_pair(a, b)
        assert len(conflicts) == 1
        (variant,) = conflicts[0].variants
        assert variant.triple == (0, 4, "???")
        assert variant.candidate_label == "SKILL_HARD"
        assert variant.origin == "annA"
        assert merged.agreed_spans() == ()

    def test_overlapping_annotations_both_kept(self):
        a = _set("annA", [(0, 14, "JOB_TITLE")])
        b = _set("annB", [(8, 14, "JOB_TITLE")])
        merged, conflicts = merge_pair(a, b)
        assert len(conflicts) == 1
        variants = conflicts[0].variants
        assert {v.triple for v in variants} == {(0, 14, "???"), (8, 14, "???")}
        assert {v.candidate_label for v in variants} == {"JOB_TITLE"}
        assert {v.origin for v in variants} == {"annA", "annB"}
        assert len(merged.conflict_spans()) == 2

    def test_partial_agreement_with_label_clash(self):
        a = _set("annA", [(0, 5, "X"), (10, 15, "Y")])
        b = _set("annB", [(0, 5, "X"), (10, 15, "Z")])
        merged, conflicts = merge_pair(a, b)
        assert [s.triple for s in merged.agreed_spans()] == [(0, 5, "X")]
        assert len(conflicts) == 1
        assert {(v.candidate_label, v.origin) for v in conflicts[0].variants} == {
            ("Y", "annA"),
            ("Z", "annB"),
        }

    def test_transitive_overlap_grouping(self):
        # chains (0,5)~(4,8)~(7,10) into one conflict, (20,22) alone
        a = _set("annA", [(0, 5, "X"), (7, 10, "X"), (20, 22, "X")])
        b = _set("annB", [(4, 8, "X")])
        _, conflicts = merge_pair(a, b)
        sizes = sorted(len(c.variants) for c in conflicts)
        assert sizes == [1, 3]

    def test_conflict_ids_stable_and_doc_scoped(self):
        a = _set("annA", [(0, 4, "X"), (10, 14, "Y")])
        b = _set("annB", [])
        _, conflicts = merge_pair(a, b)
        assert [c.conflict_id for c in conflicts] == ["d1#c0", "d1#c1"]

    def test_doc_mismatch(self):
        with pytest.raises(DocMismatch):
            merge_pair(_set("annA", [], doc_id="d1"), _set("annB", [], doc_id="d2"))

    def test_scheme_mismatch(self):
        a = AnnotationSet("d1", "annA", 1, ())
        b = AnnotationSet("d1", "annB", 2, ())
        with pytest.raises(SchemeMismatch):
            merge_pair(a, b)

    def test_same_author_rejected(self):
        with pytest.raises(ValidationError):
            merge_pair(_set("annA", []), _set("annA", []))


class TestMergeProperties:
    LABELS = ["W", "X", "Y", "Z"]

    def test_conservation_and_symmetry_randomized(self):
        rng = random.Random(42)
        for trial in range(300):
            a, b = random_annotation_pair(rng, f"doc{trial}")
            merged, conflicts = merge_pair(a, b)
            variants = merged.conflict_spans()
            agreed = merged.agreed_spans()
            # conservation: every input span lands exactly once
            assert 2 * len(agreed) + len(variants) == len(a.spans) + len(b.spans)
            # symmetry up to variant order
            merged_ba, conflicts_ba = merge_pair(b, a)
            assert set(merged_ba.agreed_spans()) == set(agreed)
            group = lambda cs: sorted(frozenset(c.variants) for c in cs)
            assert group(conflicts_ba) == group(conflicts)

    def test_gold_merge_idempotent(self):
        rng = random.Random(7)
        for trial in range(50):
            a, b = random_annotation_pair(rng, f"doc{trial}")
            merged, conflicts = merge_pair(a, b)
            resolutions = [
                Resolution(c.conflict_id, "accept_variant", variant_index=0) for c in conflicts
            ]
            gold = apply_resolutions(merged, conflicts, resolutions)
            again, again_conflicts = merge_pair(
                gold.with_author("annA"), gold.with_author("annB")
            )
            assert again_conflicts == []
            assert set(s.triple for s in again.spans) == set(s.triple for s in gold.spans)


class TestApplyResolutions:
    def test_no_conflicts_passthrough(self):
        a = _set("annA", [(0, 4, "X")])
        b = _set("annB", [(0, 4, "X")])
        merged, conflicts = merge_pair(a, b)
        gold = apply_resolutions(merged, conflicts, [])
        assert gold.author == "GOLD"
        assert [s.triple for s in gold.spans] == [(0, 4, "X")]

    def test_drop_leaves_agreed_only(self):
        a = _set("annA", [(0, 4, "X"), (10, 14, "Y")])
        b = _set("annB", [(0, 4, "X")])
        merged, conflicts = merge_pair(a, b)
        gold = apply_resolutions(merged, conflicts, [Resolution(conflicts[0].conflict_id, "drop")])
        assert [s.triple for s in gold.spans] == [(0, 4, "X")]

    def test_accept_variant_restores_label(self):
        a = _set("annA", [(0, 14, "JOB_TITLE")])
        b = _set("annB", [(8, 14, "JOB_TITLE")])
        merged, conflicts = merge_pair(a, b)
        gold = apply_resolutions(
            merged, conflicts, [Resolution(conflicts[0].conflict_id, "accept_variant", variant_index=0)]
        )
        assert [s.triple for s in gold.spans] == [(0, 14, "JOB_TITLE")]

    def test_relabel_uses_variant_boundaries(self):
        a = _set("annA", [(3, 9, "X")])
        b = _set("annB", [])
        merged, conflicts = merge_pair(a, b)
        gold = apply_resolutions(
            merged, conflicts, [Resolution(conflicts[0].conflict_id, "relabel", label="Y")]
        )
        assert [s.triple for s in gold.spans] == [(3, 9, "Y")]

    def test_reshape_builds_new_span(self):
        a = _set("annA", [(0, 5, "X")])
        b = _set("annB", [(2, 9, "X")])
        merged, conflicts = merge_pair(a, b)
        res = Resolution(conflicts[0].conflict_id, "reshape", start=0, end=9, label="X",
                         resolver="collective")
        gold = apply_resolutions(merged, conflicts, [res])
        assert [s.triple for s in gold.spans] == [(0, 9, "X")]
        assert gold.spans[0].origin == "collective"

    def test_unresolved_conflict_lists_ids(self):
        a = _set("annA", [(0, 4, "X"), (10, 14, "Y")])
        b = _set("annB", [])
        merged, conflicts = merge_pair(a, b)
        with pytest.raises(UnresolvedConflict) as excinfo:
            apply_resolutions(merged, conflicts, [Resolution("d1#c0", "drop")])
        assert excinfo.value.conflict_ids == ["d1#c1"]

    def test_unknown_conflict(self):
        a = _set("annA", [(0, 4, "X")])
        b = _set("annB", [(0, 4, "X")])
        merged, conflicts = merge_pair(a, b)
        with pytest.raises(UnknownConflict):
            apply_resolutions(merged, conflicts, [Resolution("d1#c99", "drop")])

    def test_overlap_after_resolution(self):
        a = _set("annA", [(0, 10, "X")])
        b = _set("annB", [(0, 10, "X"), (12, 20, "Y")])
        merged, conflicts = merge_pair(a, b)
        res = Resolution(conflicts[0].conflict_id, "reshape", start=5, end=15, label="Y")
        with pytest.raises(OverlapAfterResolution):
            apply_resolutions(merged, conflicts, [res])

    def test_last_resolution_wins(self):
        a = _set("annA", [(0, 4, "X")])
        b = _set("annB", [])
        merged, conflicts = merge_pair(a, b)
        cid = conflicts[0].conflict_id
        gold = apply_resolutions(
            merged,
            conflicts,
            [Resolution(cid, "drop"), Resolution(cid, "accept_variant", variant_index=0)],
        )
        assert [s.triple for s in gold.spans] == [(0, 4, "X")]

    def test_random_accepts_always_satisfy_gold_invariants(self):
        rng = random.Random(99)
        for trial in range(200):
            a, b = random_annotation_pair(rng, f"doc{trial}")
            merged, conflicts = merge_pair(a, b)
            resolutions = []
            for c in conflicts:
                action = rng.choice(["accept_variant", "drop"])
                if action == "accept_variant":
                    resolutions.append(
                        Resolution(c.conflict_id, "accept_variant",
                                   variant_index=rng.randrange(len(c.variants)))
                    )
                else:
                    resolutions.append(Resolution(c.conflict_id, "drop"))
            gold = apply_resolutions(merged, conflicts, resolutions)
            assert not any(s.is_conflict() for s in gold.spans)
            for x, y in zip(gold.spans, gold.spans[1:]):
                assert x.end <= y.start


class TestResolutionValidation:
    def test_action_field_rules(self):
        with pytest.raises(ValidationError):
            Resolution("c", "accept_variant")  # missing index
        with pytest.raises(ValidationError):
            Resolution("c", "relabel")  # missing label
        with pytest.raises(ValidationError):
            Resolution("c", "reshape", start=4, end=2, label="X")
        with pytest.raises(ValidationError):
            Resolution("c", "drop", label="X")
        with pytest.raises(ValidationError):
            Resolution("c", "explode")

    def test_conflict_requires_conflict_labels(self):
        with pytest.raises(ValidationError):
            Conflict("c1", "d1", (Span(0, 2, "X"),))
