from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annoflow.core.bio import (
    bio_to_spans,
    decode_bio_runs,
    spans_to_bio,
    strip_bio_prefix,
    token_labels,
)
from annoflow.core.tokenizer import tokenize
from annoflow.core.types import AnnotationSet, Document, LabelScheme, Span, TokenSpan
from annoflow.errors import (
    InvalidScheme,
    LengthMismatch,
    OverlappingSpans,
    ValidationError,
)

# Independent oracle: alnum == \w minus underscore in Python's re module.
_TOKEN_RE = re.compile(r"[^\W_]+|[^\s\w]|_", re.UNICODE)


def oracle_tokenize(text: str) -> list[tuple[int, int]]:
    return [(m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


class TestTokenize:
    def test_empty_text(self):
        assert tokenize("") == []

    def test_punctuation_heavy(self):
        text = "C++-utvecklare!"
        tokens = [(t.start, t.end) for t in tokenize(text)]
        assert tokens == oracle_tokenize(text)
        assert tokens == [(0, 1), (1, 2), (2, 3), (3, 4), (4, 14), (14, 15)]
        assert [text[s:e] for s, e in tokens] == ["C", "+", "+", "-", "utvecklare", "!"]

    def test_swedish_offsets(self):
        assert [(t.start, t.end) for t in tokenize("Vi söker dig")] == [(0, 2), (3, 8), (9, 12)]

    def test_matches_oracle_on_mixed_unicode(self):
        samples = [
            "Vi söker en C#-utvecklare (Java/Python) till Växjö!",
            "  leading and trailing  ",
            "emoji 💻 mitt i texten",
            "under_score splits",
            "åäö ÅÄÖ 123 a1b2",
        ]
        for text in samples:
            assert [(t.start, t.end) for t in tokenize(text)] == oracle_tokenize(text)

    def test_pure_function(self):
        text = "Vi söker dig!"
        assert tokenize(text) == tokenize(text)

    @given(st.text(max_size=120))
    @settings(max_examples=200, deadline=None)
    def test_oracle_equivalence_property(self, text):
        assert [(t.start, t.end) for t in tokenize(text)] == oracle_tokenize(text)

    @given(st.text(max_size=120))
    @settings(max_examples=100, deadline=None)
    def test_tokens_sorted_disjoint_nonspace(self, text):
        tokens = tokenize(text)
        for a, b in zip(tokens, tokens[1:]):
            assert a.end <= b.start
        for t in tokens:
            assert not any(ch.isspace() for ch in text[t.start : t.end])


class TestSpansToBio:
    def test_no_entities(self):
        assert spans_to_bio([TokenSpan(0, 2)], []) == ["O"]

    def test_aligned_span(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 8)]
        assert spans_to_bio(tokens, [Span(3, 8, "SKILL_HARD")]) == ["O", "B-SKILL_HARD"]

    def test_multitoken_span(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 8), TokenSpan(9, 12)]
        assert spans_to_bio(tokens, [Span(0, 8, "JOB_TITLE")]) == [
            "B-JOB_TITLE",
            "I-JOB_TITLE",
            "O",
        ]

    def test_partial_overlap_tags_token(self):
        # boundary inside a token still claims it (>= 1 char overlap)
        tokens = [TokenSpan(0, 5), TokenSpan(6, 10)]
        assert spans_to_bio(tokens, [Span(3, 9, "X")]) == ["B-X", "I-X"]

    def test_overlapping_spans_rejected(self):
        with pytest.raises(OverlappingSpans):
            spans_to_bio([TokenSpan(0, 5)], [Span(0, 4, "X"), Span(2, 5, "Y")])

    def test_conflict_spans_rejected(self):
        conflict = Span(0, 2, "???", origin="a", candidate_label="X")
        with pytest.raises(ValidationError):
            spans_to_bio([TokenSpan(0, 2)], [conflict])

    def test_adjacent_same_label_spans_restart_with_b(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 5)]
        tags = spans_to_bio(tokens, [Span(0, 2, "X"), Span(3, 5, "X")])
        assert tags == ["B-X", "B-X"]


class TestBioToSpans:
    def test_all_outside(self):
        assert bio_to_spans([TokenSpan(0, 2)], ["O"]) == []

    def test_basic_decode(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 8), TokenSpan(9, 12)]
        assert bio_to_spans(tokens, ["B-X", "I-X", "O"]) == [Span(0, 8, "X")]

    def test_orphan_i_repaired(self):
        assert bio_to_spans([TokenSpan(4, 9)], ["I-X"]) == [Span(4, 9, "X")]

    def test_i_after_other_label_repaired(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 5)]
        assert bio_to_spans(tokens, ["B-X", "I-Y"]) == [Span(0, 2, "X"), Span(3, 5, "Y")]

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            bio_to_spans([TokenSpan(0, 2)], ["O", "O"])

    def test_malformed_tag(self):
        with pytest.raises(ValidationError):
            bio_to_spans([TokenSpan(0, 2)], ["Q-X"])

    def test_decode_runs_repair_rule(self):
        assert decode_bio_runs(["I-X", "I-X", "B-X", "O", "I-Y"]) == [
            (0, 2, "X"),
            (2, 3, "X"),
            (4, 5, "Y"),
        ]


@st.composite
def tokens_and_aligned_spans(draw):
    n_tokens = draw(st.integers(min_value=1, max_value=12))
    tokens = []
    pos = 0
    for _ in range(n_tokens):
        pos += draw(st.integers(min_value=0, max_value=2))
        width = draw(st.integers(min_value=1, max_value=5))
        tokens.append(TokenSpan(pos, pos + width))
        pos += width
    spans = []
    i = 0
    while i < n_tokens:
        if draw(st.booleans()):
            j = min(n_tokens, i + draw(st.integers(min_value=1, max_value=3)))
            spans.append(Span(tokens[i].start, tokens[j - 1].end, draw(st.sampled_from(["X", "Y"]))))
            i = j
        else:
            i += 1
    return tokens, spans


class TestRoundTrip:
    @given(tokens_and_aligned_spans())
    @settings(max_examples=300, deadline=None)
    def test_token_aligned_spans_round_trip(self, case):
        # B- restarts at every span start, so even touching same-label
        # spans survive the round trip
        tokens, spans = case
        assert bio_to_spans(tokens, spans_to_bio(tokens, spans)) == spans

    def test_strip_prefix(self):
        assert strip_bio_prefix("B-X") == "X"
        assert strip_bio_prefix("I-LONG-NAME") == "LONG-NAME"
        assert strip_bio_prefix("O") == "O"

    def test_token_labels(self):
        tokens = [TokenSpan(0, 2), TokenSpan(3, 8), TokenSpan(9, 12)]
        assert token_labels(tokens, [Span(0, 8, "X")]) == ["X", "X", "O"]


class TestTypeInvariants:
    def test_document_requires_text(self):
        with pytest.raises(ValidationError):
            Document(id="d1", text="")
        with pytest.raises(ValidationError):
            Document(id="", text="hello")

    def test_span_offsets(self):
        with pytest.raises(ValidationError):
            Span(3, 3, "X")
        with pytest.raises(ValidationError):
            Span(-1, 2, "X")

    def test_span_label_rules(self):
        with pytest.raises(ValidationError):
            Span(0, 2, "O")
        with pytest.raises(ValidationError):
            Span(0, 2, "???")  # conflict without candidate/origin
        with pytest.raises(ValidationError):
            Span(0, 2, "X", candidate_label="Y")  # candidate on non-conflict
        ok = Span(0, 2, "???", origin="annA", candidate_label="X")
        assert ok.is_conflict()

    def test_span_confidence_range(self):
        with pytest.raises(ValidationError):
            Span(0, 2, "X", confidence=1.5)

    def test_annotation_set_sorts_spans(self):
        aset = AnnotationSet("d", "a", 1, (Span(5, 8, "X"), Span(0, 2, "Y")))
        assert [s.start for s in aset.spans] == [0, 5]

    def test_annotation_set_rejects_overlap(self):
        with pytest.raises(OverlappingSpans):
            AnnotationSet("d", "a", 1, (Span(0, 5, "X"), Span(3, 8, "Y")))

    def test_annotation_set_rejects_duplicates(self):
        with pytest.raises(ValidationError):
            AnnotationSet("d", "MERGED", 1, (
                Span(0, 2, "???", origin="a", candidate_label="X"),
                Span(0, 2, "???", origin="a", candidate_label="X"),
            ))

    def test_individual_set_rejects_conflict_label(self):
        with pytest.raises(ValidationError):
            AnnotationSet("d", "a", 1, (Span(0, 2, "???", origin="a", candidate_label="X"),))

    def test_merged_set_allows_overlapping_conflicts(self):
        aset = AnnotationSet("d", "MERGED", 1, (
            Span(0, 5, "???", origin="a", candidate_label="X"),
            Span(3, 8, "???", origin="b", candidate_label="Y"),
        ))
        assert len(aset.conflict_spans()) == 2

    def test_merged_set_agreed_spans_must_be_disjoint(self):
        with pytest.raises(OverlappingSpans):
            AnnotationSet("d", "MERGED", 1, (Span(0, 5, "X"), Span(3, 8, "Y")))

    def test_scheme_rules(self):
        with pytest.raises(InvalidScheme):
            LabelScheme(version=1, labels=("X", "X"))
        with pytest.raises(InvalidScheme):
            LabelScheme(version=1, labels=("O",))
        with pytest.raises(InvalidScheme):
            LabelScheme(version=0, labels=("X",))
        scheme = LabelScheme(version=1, labels=("X", "Y"))
        assert scheme.bio_tags() == ("O", "B-X", "I-X", "B-Y", "I-Y")
