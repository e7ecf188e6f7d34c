"""Synthetic fixture projects for demos and end-to-end checks.

Generates a small job-ad-flavored corpus, a matching token-probability
file for the file-based prediction provider, two annotators' uploads
with seeded disagreements of every kind (one-sided tags, boundary
overlaps, label clashes), and scripted resolutions. Everything is
deterministic in the seed.
"""
from __future__ import annotations

import random
from pathlib import Path

from .core.bio import spans_to_bio
from .core.io import write_documents, write_jsonl
from .core.tokenizer import tokenize
from .core.types import AnnotationSet, Document, Span
from .merge import Resolution
from .predictions import FilePredictionProvider, token_probabilities_to_json
from .sampling import SamplingConfig
from .workflow.project import Project
from .workflow.store import ProjectStore

LABELS = ("JOB_TITLE", "SKILL_HARD", "SKILL_SOFT", "JOB_LOCATION")

_TITLES = ["utvecklare", "sjuksköterska", "projektledare", "ekonomiassistent",
           "lärare", "servitör", "butikschef", "systemarkitekt"]
_SKILLS = ["Python", "Java", "Excel", "SQL", "Linux", "Docker", "React", "Kubernetes"]
_SOFT = ["samarbete", "noggrannhet", "flexibilitet", "ansvar"]
_CITIES = ["Stockholm", "Göteborg", "Malmö", "Umeå", "Växjö", "Örebro"]


def _compose(parts: list[tuple[str, str | None]]) -> tuple[str, list[Span]]:
    text = ""
    spans: list[Span] = []
    for fragment, label in parts:
        if label is not None:
            spans.append(Span(len(text), len(text) + len(fragment), label))
        text += fragment
    return text, spans


def synthetic_corpus(n_docs: int = 20, seed: int = 7) -> tuple[list[Document], dict[str, list[Span]]]:
    """Corpus plus per-document reference spans.

    Document ad-001 always contains å/ö characters and one emoji so
    offset handling across encodings stays honest.
    """
    rng = random.Random(seed)
    docs: list[Document] = []
    truth: dict[str, list[Span]] = {}
    for i in range(n_docs):
        doc_id = f"ad-{i:03d}"
        title = rng.choice(_TITLES)
        skill_a, skill_b = rng.sample(_SKILLS, 2)
        soft = rng.choice(_SOFT)
        city = rng.choice(_CITIES)
        if i == 1:
            parts = [
                ("Vi söker en ", None),
                (title, "JOB_TITLE"),
                (" 💻 i ", None),
                ("Växjö", "JOB_LOCATION"),
                (". Ansök på vår hemsida. Du behärskar ", None),
                (skill_a, "SKILL_HARD"),
                (".", None),
            ]
        else:
            parts = [
                ("Vi söker en ", None),
                (title, "JOB_TITLE"),
                (" till vårt kontor i ", None),
                (city, "JOB_LOCATION"),
                (". Du behärskar ", None),
                (skill_a, "SKILL_HARD"),
                (" och ", None),
                (skill_b, "SKILL_HARD"),
                (". Vi värdesätter ", None),
                (soft, "SKILL_SOFT"),
                (".", None),
            ]
        text, spans = _compose(parts)
        docs.append(Document(id=doc_id, text=text, meta={"source": "synthetic"}))
        truth[doc_id] = spans
    return docs, truth


def _perturb(spans: list[Span], text: str, rng: random.Random) -> list[Span]:
    """One seeded disagreement per document (sometimes none)."""
    out = list(spans)
    mode = rng.choice(["agree", "drop", "shift", "relabel", "extra", "agree"])
    if mode == "drop" and out:
        out.pop(rng.randrange(len(out)))
    elif mode == "shift" and out:
        i = rng.randrange(len(out))
        s = out[i]
        new_end = min(s.end + 2, len(text))
        limit = out[i + 1].start if i + 1 < len(out) else len(text)
        if new_end <= limit and new_end > s.start:
            out[i] = Span(s.start, new_end, s.label)
    elif mode == "relabel" and out:
        i = rng.randrange(len(out))
        s = out[i]
        others = [l for l in LABELS if l != s.label]
        out[i] = Span(s.start, s.end, rng.choice(others))
    elif mode == "extra":
        anchor = text.find("kontor")
        if anchor >= 0 and not any(s.overlaps(Span(anchor, anchor + 6, "X")) for s in out):
            out.append(Span(anchor, anchor + 6, rng.choice(list(LABELS))))
    return out


def write_predictions_file(
    path: str | Path,
    docs: list[Document],
    truth: dict[str, list[Span]],
    labels: tuple[str, ...] = LABELS,
    scheme_version: int = 1,
    seed: int = 7,
) -> Path:
    """Token probabilities whose argmax reproduces the reference spans."""
    rng = random.Random(seed)
    label_order = ["O"]
    for label in labels:
        label_order += [f"B-{label}", f"I-{label}"]
    records = []
    for doc in docs:
        tokens = tokenize(doc.text)
        tags = spans_to_bio(tokens, truth[doc.id])
        rows = []
        for tag in tags:
            top = rng.choice([0.82, 0.88, 0.93])
            rest = (1.0 - top) / (len(label_order) - 1)
            row = [rest] * len(label_order)
            row[label_order.index(tag)] = top
            rows.append(row)
        records.append(
            token_probabilities_to_json(
                _probs(doc.id, scheme_version, label_order, tokens, rows)
            )
        )
    path = Path(path)
    write_jsonl(path, records)
    return path


def _probs(doc_id, scheme_version, label_order, tokens, rows):
    from .predictions import TokenProbabilities

    return TokenProbabilities(
        doc_id=doc_id,
        scheme_version=scheme_version,
        label_order=tuple(label_order),
        tokens=tuple(tokens),
        probs=tuple(tuple(r) for r in rows),
    )


def scripted_resolutions(project: Project, index: int) -> list[Resolution]:
    """Deterministic resolution per open conflict, cycling over the actions."""
    resolutions = []
    iteration = project.iteration(index)
    for i, conflict in enumerate(iteration.conflicts):
        kind = i % 4
        if kind == 0:
            res = Resolution(conflict.conflict_id, "accept_variant", variant_index=0)
        elif kind == 1:
            res = Resolution(
                conflict.conflict_id, "accept_variant", variant_index=len(conflict.variants) - 1
            )
        elif kind == 2:
            res = Resolution(conflict.conflict_id, "drop")
        else:
            res = Resolution(conflict.conflict_id, "relabel", label=project.scheme.labels[0])
        resolutions.append(res)
    return resolutions


def build_demo_project(
    root: str | Path,
    n_docs: int = 20,
    batch_size: int | None = None,
    annotators: tuple[str, ...] = ("anna", "bjorn"),
    seed: int = 7,
    stage: str = "merged",
) -> tuple[ProjectStore, Project]:
    """Create a fixture project advanced to the requested stage.

    ``stage`` is one of sampled, preannotated, assigned, annotated,
    merged, finalized. The predictions file lands at
    ``<root>/predictions.jsonl`` (it is an input, not a project
    artifact; the project itself lives in ``<root>/project``).
    """
    stage = stage.lower()
    order = ["sampled", "preannotated", "assigned", "annotated", "merged", "finalized"]
    if stage not in order:
        raise ValueError(f"unknown demo stage {stage!r}")
    want = order.index(stage)

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    docs, truth = synthetic_corpus(n_docs, seed)
    corpus_path = root / "corpus.jsonl"
    write_documents(corpus_path, docs)
    predictions_path = write_predictions_file(root / "predictions.jsonl", docs, truth, seed=seed)

    store = ProjectStore(root / "project")
    project = Project.create("demo", docs, list(LABELS), annotators)
    k = batch_size if batch_size is not None else n_docs

    config = SamplingConfig(strategy="random", batch_size=k, seed=seed)
    iteration = project.sample_iteration(config)
    if want >= 1:
        provider = FilePredictionProvider(predictions_path, identity="file:demo-model")
        project.bootstrap_iteration(iteration.index, provider)
    if want >= 2:
        project.assign_iteration(iteration.index)
    if want >= 3:
        rng = random.Random(seed + 1)
        uploads = []
        for doc in docs:
            if doc.id not in iteration.doc_ids:
                continue
            first, second = iteration.plan.annotators_for_doc(doc.id)
            uploads.append(
                AnnotationSet(doc.id, first, project.scheme.version, tuple(truth[doc.id]))
            )
            uploads.append(
                AnnotationSet(
                    doc.id,
                    second,
                    project.scheme.version,
                    tuple(_perturb(truth[doc.id], doc.text, rng)),
                )
            )
        project.ingest_individual_annotations(iteration.index, uploads)
    if want >= 4:
        project.merge_iteration(iteration.index)
    if want >= 5:
        project.finalize_iteration(iteration.index, scripted_resolutions(project, iteration.index))

    with store.lock():
        store.save(project)
    return store, project


def main(argv: list[str] | None = None) -> None:
    import argparse

    parser = argparse.ArgumentParser(description="Build a synthetic fixture project.")
    parser.add_argument("root", help="target directory")
    parser.add_argument("--docs", type=int, default=20)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--stage", default="merged",
                        choices=["sampled", "preannotated", "assigned", "annotated", "merged", "finalized"])
    args = parser.parse_args(argv)
    store, project = build_demo_project(args.root, n_docs=args.docs, seed=args.seed, stage=args.stage)
    info = project.status()
    print(f"fixture project at {store.root}: iteration stages "
          f"{[it['stage'] for it in info['iterations']]}, "
          f"{sum(it['conflicts_open'] for it in info['iterations'])} open conflicts")


if __name__ == "__main__":
    main()
