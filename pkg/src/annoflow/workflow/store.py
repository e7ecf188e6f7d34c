"""Project persistence: a directory of JSON Lines files plus one manifest.

No database; artifacts stay diffable and versionable. Writers are
canonical (stable ordering, fixed key order), so saving an unchanged
project rewrites byte-identical files. Mutations go through a file lock
(single-writer contract); reads need no lock.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from filelock import FileLock

from ..core.io import (
    annotation_set_from_json,
    annotation_set_to_json,
    document_from_json,
    document_to_json,
    dumps_line,
    read_jsonl,
    write_jsonl,
)
from ..core.types import AnnotationSet, LabelScheme
from ..errors import AnnoflowError, ProjectLoadError, StorageError, ValidationError
from ..merge import (
    Resolution,
    conflict_from_json,
    conflict_to_json,
    resolution_from_json,
    resolution_to_json,
)
from ..sampling import SamplingConfig
from ..taxonomy import adjustment_from_json, adjustment_to_json
from .assignment import AssignmentPlan
from .project import AuditEvent, Iteration, Project

MANIFEST = "project.json"


def _dump_json(path: Path, obj: Any) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


class ProjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def lock(self) -> FileLock:
        self.root.mkdir(parents=True, exist_ok=True)
        return FileLock(self.root / ".annoflow.lock")

    def exists(self) -> bool:
        return (self.root / MANIFEST).is_file()

    # --- paths -----------------------------------------------------------

    def _iter_dir(self, index: int) -> Path:
        return self.root / "annotations" / f"iter-{index}"

    def _conflicts_path(self, index: int) -> Path:
        return self.root / "conflicts" / f"iter-{index}.jsonl"

    def _resolutions_path(self, index: int) -> Path:
        return self.root / "resolutions" / f"iter-{index}.jsonl"

    # --- save --------------------------------------------------------------

    def save(self, project: Project) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        manifest = {
            "name": project.name,
            "annotators": list(project.annotators),
            "scheme_history": [
                {"version": s.version, "labels": list(s.labels)} for s in project.schemes
            ],
            "adjustments": [adjustment_to_json(a) for a in project.adjustments],
            "iterations": [self._iteration_record(it) for it in project.iterations],
            "splits_file": "splits.json" if project.splits is not None else None,
        }
        _dump_json(self.root / MANIFEST, manifest)
        write_jsonl(
            self.root / "corpus.jsonl",
            (document_to_json(project.documents[d]) for d in sorted(project.documents)),
        )
        write_jsonl(
            self.root / "audit.jsonl",
            (
                {"seq": e.seq, "timestamp": e.timestamp, "event": e.event, "details": e.details}
                for e in project.audit
            ),
        )
        if project.splits is not None:
            _dump_json(self.root / "splits.json", project.splits)

        for iteration in project.iterations:
            it_dir = self._iter_dir(iteration.index)
            if iteration.drafts:
                self._write_sets(it_dir / "drafts.jsonl", sorted_sets(iteration.drafts))
            for author in sorted({a for (_, a) in iteration.uploads}):
                sets = [
                    iteration.uploads[(d, a)]
                    for (d, a) in sorted(iteration.uploads)
                    if a == author
                ]
                self._write_sets(it_dir / f"{author}.jsonl", sets)
            if iteration.merged:
                self._write_sets(it_dir / "merged.jsonl", sorted_sets(iteration.merged))
            if iteration.gold:
                self._write_sets(it_dir / "gold.jsonl", sorted_sets(iteration.gold))
            if iteration.conflicts:
                write_jsonl(
                    self._conflicts_path(iteration.index),
                    (conflict_to_json(c) for c in iteration.conflicts),
                )
            if iteration.resolutions:
                write_jsonl(
                    self._resolutions_path(iteration.index),
                    (
                        resolution_to_json(iteration.resolutions[cid])
                        for cid in sorted(iteration.resolutions)
                    ),
                )

    @staticmethod
    def _write_sets(path: Path, sets: list[AnnotationSet]) -> None:
        write_jsonl(path, (annotation_set_to_json(s) for s in sets))

    @staticmethod
    def _iteration_record(iteration: Iteration) -> dict[str, Any]:
        return {
            "index": iteration.index,
            "doc_ids": list(iteration.doc_ids),
            "stage": iteration.stage,
            "sampling": {
                "strategy": iteration.sampling.strategy,
                "batch_size": iteration.sampling.batch_size,
                "seed": iteration.sampling.seed,
            },
            "scheme_version": iteration.scheme_version,
            "draft_author": iteration.draft_author,
            "assignment": {
                "parts": [list(p) for p in iteration.plan.parts],
                "duties": [[a, p] for a, p in iteration.plan.duties],
            },
            "uploaded_authors": sorted({a for (_, a) in iteration.uploads}),
        }

    # --- write-ahead log for live resolution sessions -------------------------

    def append_resolution(self, index: int, res: Resolution) -> None:
        path = self._resolutions_path(index)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as fh:
                fh.write(dumps_line(resolution_to_json(res)) + "\n")
        except OSError as exc:
            raise StorageError(f"cannot append to {path}: {exc}") from exc

    # --- load ------------------------------------------------------------------

    def load(self) -> Project:
        manifest_path = self.root / MANIFEST
        if not manifest_path.is_file():
            raise ProjectLoadError(f"no project manifest at {manifest_path}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProjectLoadError(f"cannot read {manifest_path}: {exc}") from exc
        try:
            return self._load_from_manifest(manifest)
        except ProjectLoadError:
            raise
        except (AnnoflowError, KeyError, TypeError, ValueError) as exc:
            raise ProjectLoadError(f"corrupt project at {self.root}: {exc}") from exc

    def _load_from_manifest(self, manifest: dict[str, Any]) -> Project:
        documents = {
            d.id: d
            for d in (document_from_json(obj) for obj in read_jsonl(self.root / "corpus.jsonl"))
        }
        schemes = [
            LabelScheme(version=s["version"], labels=tuple(s["labels"]))
            for s in manifest["scheme_history"]
        ]
        adjustments = [adjustment_from_json(a) for a in manifest["adjustments"]]
        audit = [
            AuditEvent(
                seq=obj["seq"],
                timestamp=obj["timestamp"],
                event=obj["event"],
                details=obj["details"],
            )
            for obj in read_jsonl(self.root / "audit.jsonl")
        ]
        splits = None
        if manifest.get("splits_file"):
            splits_path = self.root / manifest["splits_file"]
            try:
                splits = json.loads(splits_path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ProjectLoadError(f"cannot read {splits_path}: {exc}") from exc

        iterations = [self._load_iteration(record) for record in manifest["iterations"]]
        return Project(
            name=manifest["name"],
            documents=documents,
            annotators=tuple(manifest["annotators"]),
            schemes=schemes,
            adjustments=adjustments,
            iterations=iterations,
            audit=audit,
            splits=splits,
        )

    def _load_iteration(self, record: dict[str, Any]) -> Iteration:
        index = record["index"]
        it_dir = self._iter_dir(index)
        plan = AssignmentPlan(
            parts=tuple(tuple(p) for p in record["assignment"]["parts"]),
            duties=tuple((a, p) for a, p in record["assignment"]["duties"]),
        )
        iteration = Iteration(
            index=index,
            doc_ids=tuple(record["doc_ids"]),
            stage=record["stage"],
            sampling=SamplingConfig(**record["sampling"]),
            plan=plan,
            scheme_version=record["scheme_version"],
            draft_author=record.get("draft_author"),
        )
        drafts_path = it_dir / "drafts.jsonl"
        if drafts_path.is_file():
            iteration.drafts = {
                s.doc_id: s for s in self._read_sets(drafts_path)
            }
        for author in record.get("uploaded_authors", []):
            for aset in self._read_sets(it_dir / f"{author}.jsonl"):
                iteration.uploads[(aset.doc_id, aset.author)] = aset
        merged_path = it_dir / "merged.jsonl"
        if merged_path.is_file():
            iteration.merged = {s.doc_id: s for s in self._read_sets(merged_path)}
        gold_path = it_dir / "gold.jsonl"
        if gold_path.is_file():
            iteration.gold = {s.doc_id: s for s in self._read_sets(gold_path)}
        conflicts_path = self._conflicts_path(index)
        if conflicts_path.is_file():
            iteration.conflicts = [conflict_from_json(obj) for obj in read_jsonl(conflicts_path)]
        resolutions_path = self._resolutions_path(index)
        if resolutions_path.is_file():
            for obj in read_jsonl(resolutions_path):
                res = resolution_from_json(obj)
                iteration.resolutions[res.conflict_id] = res
        return iteration

    @staticmethod
    def _read_sets(path: Path) -> list[AnnotationSet]:
        if not path.is_file():
            raise ProjectLoadError(f"missing annotation file {path}")
        return [annotation_set_from_json(obj) for obj in read_jsonl(path)]


def sorted_sets(by_doc: dict[str, AnnotationSet]) -> list[AnnotationSet]:
    return [by_doc[d] for d in sorted(by_doc)]


def init_project_dir(
    root: str | Path,
    name: str,
    documents,
    labels,
    annotators,
) -> Project:
    """Create a fresh project directory; refuses to clobber an existing one."""
    store = ProjectStore(root)
    if store.exists():
        raise ValidationError(f"{store.root} already contains a project")
    project = Project.create(name, documents, labels, annotators)
    with store.lock():
        store.save(project)
    return project
