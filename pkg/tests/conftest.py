from __future__ import annotations

import random

import pytest

from annoflow.core.types import AnnotationSet, Document, LabelScheme, Span


def random_disjoint_spans(
    rng: random.Random,
    text_len: int,
    max_spans: int,
    labels: list[str],
) -> list[Span]:
    """Sorted, pairwise-disjoint spans with random labels."""
    spans: list[Span] = []
    cursor = 0
    for _ in range(rng.randint(0, max_spans)):
        if cursor >= text_len:
            break
        start = rng.randint(cursor, text_len - 1)
        end = rng.randint(start + 1, min(text_len, start + 12))
        spans.append(Span(start, end, rng.choice(labels)))
        cursor = end + rng.randint(0, 4)
    return spans


def random_annotation_pair(
    rng: random.Random,
    doc_id: str,
    text_len: int = 200,
    max_spans: int = 6,
    labels: list[str] | None = None,
    scheme_version: int = 1,
) -> tuple[AnnotationSet, AnnotationSet]:
    labels = labels or ["W", "X", "Y", "Z"]
    a = AnnotationSet(
        doc_id, "annA", scheme_version,
        tuple(random_disjoint_spans(rng, text_len, max_spans, labels)),
    )
    b = AnnotationSet(
        doc_id, "annB", scheme_version,
        tuple(random_disjoint_spans(rng, text_len, max_spans, labels)),
    )
    return a, b


def make_doc(doc_id: str, length: int) -> Document:
    # repeatable filler text long enough for any span the generators emit
    filler = "abcdefghij klmnopqrst "
    text = (filler * (length // len(filler) + 1))[:length]
    return Document(id=doc_id, text=text)


@pytest.fixture
def scheme() -> LabelScheme:
    return LabelScheme(version=1, labels=("W", "X", "Y", "Z"))


REPORT_LABELS = (
    "ROLE", "HARD_SKILL", "SOFT_SKILL", "LOCATION", "EMPLOYER",
    "TASK", "DEGREE", "SCHEDULE", "DURATION", "BENEFIT",
)


def micro072_fixture():
    """25 gold vs 25 predicted entities with 18 exact matches.

    Entities sit on single 4-char tokens (gold on even tokens, the 7
    mismatched predictions shifted onto odd tokens), so TP=18, FP=7,
    FN=7 at BOTH levels and micro P=R=F1=18/25=0.72 is hand-checkable.
    """
    scheme = LabelScheme(version=1, labels=REPORT_LABELS)
    text = "aaaa bbbb cccc dddd eeee ffff gggg hhhh iiii jjjj"
    docs = [Document(f"doc{d}", text) for d in range(5)]
    gold, pred = [], []
    for d in range(5):
        g_spans, p_spans = [], []
        for i in range(5):
            j = 5 * d + i
            label = REPORT_LABELS[j % 10]
            g_spans.append(Span(10 * i, 10 * i + 4, label))
            if j < 18:
                p_spans.append(Span(10 * i, 10 * i + 4, label))
            else:
                p_spans.append(Span(10 * i + 5, 10 * i + 9, label))
        gold.append(AnnotationSet(f"doc{d}", "GOLD", 1, tuple(g_spans)))
        pred.append(AnnotationSet(f"doc{d}", "model", 1, tuple(p_spans)))
    return gold, pred, scheme, docs


@pytest.fixture
def demo_project_dir(tmp_path):
    from annoflow.demo import build_demo_project

    build_demo_project(tmp_path / "demo", stage="merged")
    return tmp_path / "demo" / "project"


_CRITERIA = {
    "test_ac01": "merge conservation & symmetry (1000 randomized pairs, exact, <10s)",
    "test_ac02": "merge rule fixtures (one-sided / overlap-kept / agreement-kept, exact)",
    "test_ac03": "evaluation oracle equivalence (500 instances, both levels, 1e-12, <30s)",
    "test_ac04": "report format: micro-average entity F1 prints 0.72 (exact snapshot)",
    "test_ac05": "boundary-error property: token F1 >= entity F1 in 100% of cases",
    "test_ac06": "uncertainty scoring closed forms, top-k tie-break, scale invariance",
    "test_ac07": "class adjustment 16->10, composition, one audit entry per adjustment",
    "test_ac08": "assignment topology for N in 2..10 and batch sizes N..10N (exact)",
    "test_ac09": "end-to-end pipeline to Finalized, clean gold, split, byte-identical store (<5s)",
    "test_ac10": "CLI contract: all subcommands exit 0; errors exit 1/2/3 with one-line stderr",
}


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].split("[")[0]
    key = name[:9]
    if key in _CRITERIA:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {verdict} {key[-4:].upper()}: {_CRITERIA[key]}")
