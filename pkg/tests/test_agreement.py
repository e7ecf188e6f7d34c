from __future__ import annotations

import json
import random
from collections import Counter

import pytest

from annoflow.agreement import (
    build_report,
    pairwise_entity_f1,
    pairwise_token_kappa,
    per_class_entity_f1,
    render_report_table,
    report_to_json,
)
from annoflow.core.tokenizer import tokenize
from annoflow.core.types import AnnotationSet, Document, Span
from annoflow.errors import DocSetMismatch

from conftest import make_doc, random_annotation_pair


def _sets(doc_id: str, a_spans, b_spans):
    a = AnnotationSet(doc_id, "annA", 1, tuple(Span(*t) for t in a_spans))
    b = AnnotationSet(doc_id, "annB", 1, tuple(Span(*t) for t in b_spans))
    return [a], [b]


def oracle_kappa(xs: list[str], ys: list[str]) -> float | None:
    """Contingency-table kappa, computed the long way."""
    n = len(xs)
    categories = sorted(set(xs) | set(ys))
    table = {(g, p): 0 for g in categories for p in categories}
    for x, y in zip(xs, ys):
        table[(x, y)] += 1
    p_o = sum(table[(c, c)] for c in categories) / n
    row = Counter(xs)
    col = Counter(ys)
    p_e = sum((row[c] / n) * (col[c] / n) for c in categories)
    if p_e == 1.0:
        return None
    return (p_o - p_e) / (1 - p_e)


class TestEntityF1:
    def test_identical_nonempty(self):
        a, b = _sets("d1", [(0, 4, "X")], [(0, 4, "X")])
        assert pairwise_entity_f1(a, b) == 1.0

    def test_one_sided(self):
        a, b = _sets("d1", [(0, 4, "X")], [])
        assert pairwise_entity_f1(a, b) == 0.0

    def test_half_agreement(self):
        a, b = _sets("d1", [(0, 4, "X"), (6, 9, "Y")], [(0, 4, "X"), (6, 9, "Z")])
        assert pairwise_entity_f1(a, b) == pytest.approx(0.5)

    def test_both_empty_convention(self):
        a, b = _sets("d1", [], [])
        assert pairwise_entity_f1(a, b) == 1.0

    def test_doc_set_mismatch(self):
        a, _ = _sets("d1", [], [])
        _, b = _sets("d2", [], [])
        with pytest.raises(DocSetMismatch):
            pairwise_entity_f1(a, b)

    def test_symmetry_and_permutation_invariance(self):
        rng = random.Random(5)
        docs = [f"doc{i}" for i in range(6)]
        pairs = [random_annotation_pair(rng, d) for d in docs]
        sets_a = [p[0] for p in pairs]
        sets_b = [p[1] for p in pairs]
        forward = pairwise_entity_f1(sets_a, sets_b)
        assert pairwise_entity_f1(sets_b, sets_a) == pytest.approx(forward)
        shuffled = list(zip(sets_a, sets_b))
        rng.shuffle(shuffled)
        assert pairwise_entity_f1([x for x, _ in shuffled], [y for _, y in shuffled]) == pytest.approx(forward)

    def test_bounds(self):
        rng = random.Random(17)
        for trial in range(100):
            a, b = random_annotation_pair(rng, f"doc{trial}")
            assert 0.0 <= pairwise_entity_f1([a], [b]) <= 1.0

    def test_per_class(self):
        a, b = _sets("d1", [(0, 4, "X"), (6, 9, "Y")], [(0, 4, "X"), (6, 9, "Z")])
        by_class = per_class_entity_f1(a, b)
        assert by_class["X"] == 1.0
        assert by_class["Y"] == 0.0
        assert by_class["Z"] == 0.0


class TestTokenKappa:
    def test_identical_with_two_labels(self):
        doc = Document("d1", "aa bb cc dd")
        a, b = _sets("d1", [(0, 2, "X"), (3, 5, "Y")], [(0, 2, "X"), (3, 5, "Y")])
        assert pairwise_token_kappa(a, b, [doc]) == 1.0

    def test_all_outside_undefined(self):
        doc = Document("d1", "aa bb cc dd")
        a, b = _sets("d1", [], [])
        assert pairwise_token_kappa(a, b, [doc]) is None

    def test_half_vs_none_is_zero(self):
        # 10 tokens; a labels the first five X, b labels nothing:
        # p_o = 0.5 and p_e = 0.5, so kappa = 0
        text = "a b c d e f g h i j"
        doc = Document("d1", text)
        assert len(tokenize(text)) == 10
        a, b = _sets("d1", [(0, 9, "X")], [])
        kappa = pairwise_token_kappa(a, b, [doc])
        assert kappa == pytest.approx(0.0)

    def test_matches_contingency_oracle(self):
        rng = random.Random(23)
        from annoflow.core.bio import token_labels

        for trial in range(50):
            doc = make_doc("d1", 120)
            a, b = random_annotation_pair(rng, "d1", text_len=120)
            kappa = pairwise_token_kappa([a], [b], [doc])
            tokens = tokenize(doc.text)
            expected = oracle_kappa(token_labels(tokens, a.spans), token_labels(tokens, b.spans))
            if expected is None:
                assert kappa is None
            else:
                assert kappa == pytest.approx(expected, abs=1e-12)
                assert kappa <= 1.0

    def test_symmetry(self):
        rng = random.Random(31)
        doc = make_doc("d1", 150)
        a, b = random_annotation_pair(rng, "d1", text_len=150)
        assert pairwise_token_kappa([a], [b], [doc]) == pairwise_token_kappa([b], [a], [doc])


class TestReport:
    def test_build_and_render(self):
        doc = Document("d1", "aa bb cc dd")
        a, b = _sets("d1", [(0, 2, "X"), (3, 5, "Y")], [(0, 2, "X")])
        report = build_report(("annA", "annB"), a, b, [doc])
        assert report.doc_count == 1
        assert report.entity_f1 == pytest.approx(2 / 3)
        text = render_report_table(report)
        assert "annA vs annB" in text
        assert "X" in text and "token kappa" in text
        payload = json.loads(json.dumps(report_to_json(report)))
        assert payload["entity_f1"] == pytest.approx(2 / 3)

    def test_undefined_kappa_rendered_distinctly(self):
        doc = Document("d1", "aa bb")
        a, b = _sets("d1", [], [])
        report = build_report(("annA", "annB"), a, b, [doc])
        assert report.token_kappa is None
        assert "undefined" in render_report_table(report)
        assert report_to_json(report)["token_kappa"] is None
