"""The iteration state machine tying sampling, bootstrap, merge and
resolution together, plus the project-level audit log and dataset split.

A batch moves Sampled -> PreAnnotated -> Assigned -> Annotated -> Merged
-> Resolved -> Finalized, strictly forward one step at a time;
PreAnnotated is optional (Sampled -> Assigned is legal when there is no
prediction provider). Exactly one iteration is in flight at any moment,
and a document is never sampled twice.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Iterable, Sequence

from ..agreement import AgreementReport, build_report
from ..core.types import (
    CONFLICT,
    GOLD_AUTHOR,
    MERGED_AUTHOR,
    AnnotationSet,
    Document,
    LabelScheme,
)
from ..errors import (
    CountMismatch,
    EmptyCorpus,
    InvalidScheme,
    IterationInFlight,
    PoolExhausted,
    SplitExists,
    TooFewAnnotators,
    UnknownConflict,
    UnknownDoc,
    UnresolvedConflict,
    ValidationError,
    VersionSkew,
    WrongAnnotator,
    WrongStage,
)
from ..errors import OverlapAfterResolution
from ..merge import Conflict, Resolution, apply_resolutions, merge_pair, resolution_span
from ..predictions import PredictionProvider, fetch_predictions, predictions_to_draft
from ..rng import SplitMix64, fisher_yates
from ..sampling import SamplingConfig, score_uncertainty, select_batch, select_random
from ..taxonomy import ClassAdjustment, apply_adjustment, validate_adjustment
from .assignment import AssignmentPlan, build_assignment_plan

STAGES = ("Sampled", "PreAnnotated", "Assigned", "Annotated", "Merged", "Resolved", "Finalized")

#: Annotator ids that would collide with reserved authors or store filenames.
RESERVED_IDS = frozenset({MERGED_AUTHOR, GOLD_AUTHOR, "merged", "gold", "drafts"})


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class AuditEvent:
    seq: int
    timestamp: str
    event: str
    details: dict[str, Any]


@dataclass
class Iteration:
    index: int
    doc_ids: tuple[str, ...]
    stage: str
    sampling: SamplingConfig
    plan: AssignmentPlan
    scheme_version: int
    draft_author: str | None = None
    drafts: dict[str, AnnotationSet] = field(default_factory=dict)
    uploads: dict[tuple[str, str], AnnotationSet] = field(default_factory=dict)
    merged: dict[str, AnnotationSet] = field(default_factory=dict)
    conflicts: list[Conflict] = field(default_factory=list)
    resolutions: dict[str, Resolution] = field(default_factory=dict)
    gold: dict[str, AnnotationSet] = field(default_factory=dict)

    def conflict_by_id(self, conflict_id: str) -> Conflict:
        for conflict in self.conflicts:
            if conflict.conflict_id == conflict_id:
                return conflict
        raise UnknownConflict(conflict_id)

    def open_conflicts(self) -> list[Conflict]:
        return [c for c in self.conflicts if c.status == "open"]

    def upload_complete(self) -> bool:
        return all(
            (doc_id, author) in self.uploads
            for doc_id in self.doc_ids
            for author in self.plan.annotators_for_doc(doc_id)
        )


class Project:
    """Mutable project state; persistence lives in :mod:`annoflow.workflow.store`.

    All mutating methods are meant to run under the store's single-writer
    lock; reads are safe against the last committed state.
    """

    def __init__(
        self,
        name: str,
        documents: dict[str, Document],
        annotators: tuple[str, ...],
        schemes: list[LabelScheme],
        adjustments: list[ClassAdjustment] | None = None,
        iterations: list[Iteration] | None = None,
        audit: list[AuditEvent] | None = None,
        splits: dict[str, Any] | None = None,
    ):
        self.name = name
        self.documents = documents
        self.annotators = annotators
        self.schemes = schemes
        self.adjustments = adjustments or []
        self.iterations = iterations or []
        self.audit = audit or []
        self.splits = splits

    # --- creation ---------------------------------------------------------

    @classmethod
    def create(
        cls,
        name: str,
        documents: Iterable[Document],
        scheme: LabelScheme | Sequence[str],
        annotators: Sequence[str],
    ) -> "Project":
        if not name:
            raise ValidationError("project name must be nonempty")
        if len(annotators) < 2:
            raise TooFewAnnotators(
                f"cross-checking needs at least 2 annotators, got {len(annotators)}"
            )
        if len(set(annotators)) != len(annotators):
            raise ValidationError("annotator ids must be unique")
        for annotator in annotators:
            if not annotator or annotator in RESERVED_IDS:
                raise ValidationError(f"annotator id {annotator!r} is reserved or empty")

        doc_list = list(documents)
        if not doc_list:
            raise EmptyCorpus("corpus has no documents")
        seen: set[str] = set()
        dupes: set[str] = set()
        for doc in doc_list:
            if doc.id in seen:
                dupes.add(doc.id)
            seen.add(doc.id)
        if dupes:
            raise EmptyCorpus(f"duplicate doc ids in corpus: {', '.join(sorted(dupes))}")

        if not isinstance(scheme, LabelScheme):
            try:
                scheme = LabelScheme(version=1, labels=tuple(scheme))
            except InvalidScheme:
                raise
        if scheme.version != 1:
            raise InvalidScheme("a new project's scheme must start at version 1")

        project = cls(
            name=name,
            documents={d.id: d for d in doc_list},
            annotators=tuple(annotators),
            schemes=[scheme],
        )
        project._audit(
            "project_created",
            {
                "name": name,
                "documents": len(doc_list),
                "annotators": list(annotators),
                "labels": list(scheme.labels),
            },
        )
        return project

    # --- pools and accessors ------------------------------------------------

    @property
    def scheme(self) -> LabelScheme:
        return self.schemes[-1]

    @property
    def sampled_doc_ids(self) -> set[str]:
        out: set[str] = set()
        for iteration in self.iterations:
            out.update(iteration.doc_ids)
        return out

    @property
    def unlabeled_pool(self) -> list[str]:
        sampled = self.sampled_doc_ids
        return sorted(d for d in self.documents if d not in sampled)

    @property
    def finalized_doc_ids(self) -> list[str]:
        out: list[str] = []
        for iteration in self.iterations:
            if iteration.stage == "Finalized":
                out.extend(iteration.doc_ids)
        return sorted(out)

    def gold_sets(self, split: str | None = None) -> list[AnnotationSet]:
        sets: dict[str, AnnotationSet] = {}
        for iteration in self.iterations:
            sets.update(iteration.gold)
        if split is not None:
            if not self.splits:
                raise ValidationError("no dataset split recorded; run split first")
            if split not in ("train", "val", "test"):
                raise ValidationError(f"unknown split {split!r}")
            wanted = set(self.splits[split])
            return [sets[d] for d in sorted(sets) if d in wanted]
        return [sets[d] for d in sorted(sets)]

    def iteration(self, index: int) -> Iteration:
        if not 0 <= index < len(self.iterations):
            raise ValidationError(f"no iteration {index} (project has {len(self.iterations)})")
        return self.iterations[index]

    # --- audit ---------------------------------------------------------------

    def _audit(self, event: str, details: dict[str, Any]) -> None:
        self.audit.append(
            AuditEvent(seq=len(self.audit), timestamp=_now(), event=event, details=details)
        )

    def _transition(
        self, iteration: Iteration, to_stage: str, event: str, extra: dict[str, Any] | None = None
    ) -> None:
        from_stage = iteration.stage
        allowed = (
            STAGES.index(to_stage) == STAGES.index(from_stage) + 1
            or (from_stage, to_stage) == ("Sampled", "Assigned")
        )
        if not allowed:
            raise WrongStage(f"iteration {iteration.index}: illegal transition {from_stage} -> {to_stage}")
        iteration.stage = to_stage
        details: dict[str, Any] = {"iteration": iteration.index, "from": from_stage, "to": to_stage}
        if extra:
            details.update(extra)
        self._audit(event, details)

    def stage_history(self, index: int) -> list[str]:
        """Stage names of one iteration as recorded in the audit log, in order."""
        history: list[str] = []
        for event in self.audit:
            d = event.details
            if d.get("iteration") == index and "to" in d:
                history.append(d["to"])
        return history

    def _check_no_inflight(self) -> None:
        for iteration in self.iterations:
            if iteration.stage != "Finalized":
                raise IterationInFlight(
                    f"iteration {iteration.index} is at stage {iteration.stage}; finalize it first"
                )

    # --- sampling / bootstrap / assignment -----------------------------------

    def _draw_batch(self, sampling: SamplingConfig, provider: PredictionProvider | None) -> list[str]:
        pool = self.unlabeled_pool
        if sampling.batch_size > len(pool):
            raise PoolExhausted(
                f"batch size {sampling.batch_size} exceeds unlabeled pool of {len(pool)}"
            )
        if sampling.strategy == "random":
            return select_random(pool, sampling.batch_size, sampling.seed)
        if provider is None:
            raise ValidationError(
                f"strategy {sampling.strategy!r} needs a prediction provider to score the pool"
            )
        probs = fetch_predictions(provider, [self.documents[d] for d in pool], self.scheme)
        scores = [score_uncertainty(p, sampling.strategy) for p in probs]
        return select_batch(scores, sampling.batch_size)

    def sample_iteration(
        self, sampling: SamplingConfig, provider: PredictionProvider | None = None
    ) -> Iteration:
        """Draw a batch from never-sampled documents; lands at stage Sampled."""
        self._check_no_inflight()
        batch = self._draw_batch(sampling, provider)
        index = len(self.iterations)
        iteration = Iteration(
            index=index,
            doc_ids=tuple(batch),
            stage="Sampled",
            sampling=sampling,
            plan=build_assignment_plan(batch, self.annotators, index),
            scheme_version=self.scheme.version,
        )
        self.iterations.append(iteration)
        self._audit(
            "iteration_sampled",
            {
                "iteration": index,
                "from": None,
                "to": "Sampled",
                "strategy": sampling.strategy,
                "batch_size": sampling.batch_size,
                "seed": sampling.seed,
                "doc_ids": list(batch),
            },
        )
        return iteration

    def bootstrap_iteration(
        self,
        index: int,
        provider: PredictionProvider,
        min_entity_confidence: float = 0.0,
    ) -> Iteration:
        """Attach model drafts to a freshly sampled batch; lands at PreAnnotated."""
        iteration = self.iteration(index)
        if iteration.stage != "Sampled":
            raise WrongStage(f"iteration {index} is at {iteration.stage}, bootstrap needs Sampled")
        docs = [self.documents[d] for d in iteration.doc_ids]
        probs = fetch_predictions(provider, docs, self.scheme)
        drafts = {
            p.doc_id: predictions_to_draft(p, min_entity_confidence, author=provider.identity)
            for p in probs
        }
        iteration.drafts = drafts
        iteration.draft_author = provider.identity
        self._transition(
            iteration,
            "PreAnnotated",
            "iteration_bootstrapped",
            {
                "provider": provider.identity,
                "draft_spans": sum(len(d.spans) for d in drafts.values()),
                "min_entity_confidence": min_entity_confidence,
            },
        )
        return iteration

    def assign_iteration(self, index: int) -> Iteration:
        """Publish the duty plan; annotators may start uploading."""
        iteration = self.iteration(index)
        if iteration.stage not in ("Sampled", "PreAnnotated"):
            raise WrongStage(f"iteration {index} is at {iteration.stage}, assign needs Sampled or PreAnnotated")
        self._transition(
            iteration,
            "Assigned",
            "iteration_assigned",
            {"parts": [len(p) for p in iteration.plan.parts]},
        )
        return iteration

    def plan_iteration(
        self,
        sampling: SamplingConfig,
        provider: PredictionProvider | None = None,
        min_entity_confidence: float = 0.0,
        skip_bootstrap_on_error: bool = False,
    ) -> Iteration:
        """Sample, optionally bootstrap, and build assignments in one call.

        Lands at PreAnnotated when a provider produced drafts, else at
        Assigned. Provider failures abort unless skipping is explicitly
        allowed, in which case the batch continues without drafts.
        """
        from ..errors import ProviderUnavailable

        iteration = self.sample_iteration(sampling, provider)
        if provider is not None:
            try:
                return self.bootstrap_iteration(iteration.index, provider, min_entity_confidence)
            except ProviderUnavailable as exc:
                if not skip_bootstrap_on_error:
                    raise
                self._audit(
                    "bootstrap_skipped",
                    {"iteration": iteration.index, "provider": provider.identity, "reason": str(exc)},
                )
        return self.assign_iteration(iteration.index)

    def task_sets(self, index: int) -> dict[str, list[AnnotationSet]]:
        """Starter sets per annotator: both copies of a part share the same draft."""
        iteration = self.iteration(index)
        out: dict[str, list[AnnotationSet]] = {}
        for annotator in sorted(self.annotators):
            sets: list[AnnotationSet] = []
            for doc_id in iteration.plan.docs_for_annotator(annotator):
                draft = iteration.drafts.get(doc_id)
                spans = draft.spans if draft else ()
                sets.append(
                    AnnotationSet(
                        doc_id=doc_id,
                        author=annotator,
                        scheme_version=iteration.scheme_version,
                        spans=spans,
                    )
                )
            out[annotator] = sets
        return out

    # --- ingestion ------------------------------------------------------------

    def _validate_upload(self, iteration: Iteration, aset: AnnotationSet) -> None:
        if aset.doc_id not in iteration.doc_ids:
            raise UnknownDoc(f"doc {aset.doc_id!r} is not part of iteration {iteration.index}")
        if aset.author not in self.annotators:
            raise WrongAnnotator(f"{aset.author!r} is not an annotator of this project")
        if aset.author not in iteration.plan.annotators_for_doc(aset.doc_id):
            raise WrongAnnotator(
                f"doc {aset.doc_id!r} is not assigned to annotator {aset.author!r}"
            )
        if aset.scheme_version != iteration.scheme_version:
            raise VersionSkew(
                f"upload at scheme v{aset.scheme_version}, iteration expects v{iteration.scheme_version}"
            )
        text = self.documents[aset.doc_id].text
        for span in aset.spans:
            if span.end > len(text):
                raise ValidationError(
                    f"span {span.triple} exceeds document {aset.doc_id!r} length {len(text)}"
                )
            if span.label not in self.scheme:
                raise ValidationError(f"label {span.label!r} not in scheme v{self.scheme.version}")

    def ingest_individual_annotations(
        self, index: int, sets: Sequence[AnnotationSet]
    ) -> Iteration:
        """Store uploaded individual annotations; replaces earlier uploads
        per (doc, author). Advances to Annotated once both copies of every
        document are present."""
        iteration = self.iteration(index)
        if iteration.stage not in ("Assigned", "PreAnnotated"):
            raise WrongStage(
                f"iteration {index} is at {iteration.stage}, ingest needs Assigned or PreAnnotated"
            )
        for aset in sets:
            self._validate_upload(iteration, aset)
        if iteration.stage == "PreAnnotated" and sets:
            # uploads prove the parts went out; record the implied assignment
            self._transition(iteration, "Assigned", "iteration_assigned", {"implicit": True})
        for aset in sets:
            iteration.uploads[(aset.doc_id, aset.author)] = aset
        self._audit(
            "annotations_ingested",
            {
                "iteration": index,
                "sets": len(sets),
                "authors": sorted({a.author for a in sets}),
            },
        )
        if iteration.stage == "Assigned" and iteration.upload_complete():
            self._transition(
                iteration,
                "Annotated",
                "iteration_annotated",
                {"uploads": len(iteration.uploads)},
            )
        return iteration

    # --- merge ------------------------------------------------------------------

    def merge_iteration(self, index: int) -> dict[str, Any]:
        """Run the automatic merge per document; lands at Merged."""
        iteration = self.iteration(index)
        if iteration.stage != "Annotated":
            raise WrongStage(f"iteration {index} is at {iteration.stage}, merge needs Annotated")
        merged: dict[str, AnnotationSet] = {}
        conflicts: list[Conflict] = []
        per_annotator: dict[str, int] = {a: 0 for a in sorted(self.annotators)}
        agreed_total = 0
        for doc_id in iteration.doc_ids:
            first, second = iteration.plan.annotators_for_doc(doc_id)
            set_a = iteration.uploads[(doc_id, first)]
            set_b = iteration.uploads[(doc_id, second)]
            merged_set, doc_conflicts = merge_pair(set_a, set_b)
            merged[doc_id] = merged_set
            conflicts.extend(doc_conflicts)
            agreed_total += len(merged_set.agreed_spans())
            per_annotator[first] += len(set_a.spans)
            per_annotator[second] += len(set_b.spans)
        iteration.merged = merged
        iteration.conflicts = conflicts
        summary = {
            "docs": len(iteration.doc_ids),
            "agreed_spans": agreed_total,
            "conflicts": len(conflicts),
            "per_annotator_span_counts": per_annotator,
        }
        self._transition(iteration, "Merged", "iteration_merged", summary)
        return summary

    # --- resolution and finalization ----------------------------------------------

    def _validate_resolution(self, iteration: Iteration, res: Resolution) -> Conflict:
        conflict = iteration.conflict_by_id(res.conflict_id)
        if res.action in ("accept_variant", "relabel") and res.variant_index is not None:
            if not 0 <= res.variant_index < len(conflict.variants):
                raise ValidationError(
                    f"{res.conflict_id}: variant_index {res.variant_index} out of range"
                )
        if res.action in ("relabel", "reshape") and res.label not in self.scheme:
            raise ValidationError(f"label {res.label!r} not in scheme v{self.scheme.version}")
        if res.action == "reshape":
            text = self.documents[conflict.doc_id].text
            if res.end > len(text):
                raise ValidationError(
                    f"{res.conflict_id}: reshape offsets exceed document length {len(text)}"
                )
        # reject a span that cannot coexist with the agreed spans or with
        # decisions already buffered for the same document, so a live
        # session gets the collision immediately rather than at finalize
        span = resolution_span(conflict, res, self.schemes[-1])
        if span is not None:
            merged = iteration.merged[conflict.doc_id]
            for other in merged.agreed_spans():
                if span.overlaps(other):
                    raise OverlapAfterResolution(
                        f"{res.conflict_id}: resolved span {span.triple} overlaps agreed span {other.triple}",
                        colliding=(other.triple, span.triple),
                    )
            for other_id, other_res in iteration.resolutions.items():
                if other_id == res.conflict_id:
                    continue
                other_conflict = iteration.conflict_by_id(other_id)
                if other_conflict.doc_id != conflict.doc_id:
                    continue
                other_span = resolution_span(other_conflict, other_res, self.schemes[-1])
                if other_span is not None and span.overlaps(other_span):
                    raise OverlapAfterResolution(
                        f"{res.conflict_id}: resolved span {span.triple} overlaps "
                        f"{other_id}'s resolved span {other_span.triple}",
                        colliding=(other_span.triple, span.triple),
                    )
        return conflict

    def record_resolution(self, index: int, res: Resolution) -> Conflict:
        """Buffer one resolution (last write per conflict wins) ahead of finalize."""
        iteration = self.iteration(index)
        if iteration.stage != "Merged":
            raise WrongStage(
                f"iteration {index} is at {iteration.stage}, resolutions need Merged"
            )
        conflict = self._validate_resolution(iteration, res)
        iteration.resolutions[res.conflict_id] = res
        updated = replace(conflict, status="resolved")
        iteration.conflicts[iteration.conflicts.index(conflict)] = updated
        self._audit(
            "resolution_recorded",
            {
                "iteration": index,
                "conflict_id": res.conflict_id,
                "action": res.action,
                "resolver": res.resolver,
            },
        )
        return updated

    def finalize_iteration(
        self, index: int, resolutions: Sequence[Resolution] = ()
    ) -> Iteration:
        """Apply all resolutions, store GOLD sets, move Resolved then Finalized."""
        iteration = self.iteration(index)
        if iteration.stage != "Merged":
            raise WrongStage(f"iteration {index} is at {iteration.stage}, finalize needs Merged")
        combined = dict(iteration.resolutions)
        for res in resolutions:
            self._validate_resolution(iteration, res)
            combined[res.conflict_id] = res

        missing = [c.conflict_id for c in iteration.conflicts if c.conflict_id not in combined]
        if missing:
            raise UnresolvedConflict(missing)

        gold: dict[str, AnnotationSet] = {}
        for doc_id in iteration.doc_ids:
            doc_conflicts = [c for c in iteration.conflicts if c.doc_id == doc_id]
            doc_resolutions = [combined[c.conflict_id] for c in doc_conflicts]
            gold[doc_id] = apply_resolutions(
                iteration.merged[doc_id], doc_conflicts, doc_resolutions, self.scheme
            )

        iteration.resolutions = combined
        iteration.conflicts = [replace(c, status="resolved") for c in iteration.conflicts]
        iteration.gold = gold
        self._transition(
            iteration, "Resolved", "iteration_resolved", {"resolutions": len(combined)}
        )
        self._transition(
            iteration,
            "Finalized",
            "iteration_finalized",
            {"gold_docs": len(gold), "gold_spans": sum(len(g.spans) for g in gold.values())},
        )
        return iteration

    # --- agreement -----------------------------------------------------------------

    def agreement_reports(self, index: int) -> list[AgreementReport]:
        """One report per annotator pair of the iteration, docs pooled."""
        iteration = self.iteration(index)
        if STAGES.index(iteration.stage) < STAGES.index("Annotated"):
            raise WrongStage(
                f"iteration {index} is at {iteration.stage}; agreement needs complete uploads"
            )
        docs_by_pair: dict[tuple[str, str], list[str]] = {}
        for i, part in enumerate(iteration.plan.parts):
            if not part:
                continue
            pair = tuple(sorted(iteration.plan.annotators_for_part(i)))
            docs_by_pair.setdefault(pair, []).extend(part)
        reports = []
        for pair in sorted(docs_by_pair):
            doc_ids = sorted(docs_by_pair[pair])
            sets_a = [iteration.uploads[(d, pair[0])] for d in doc_ids]
            sets_b = [iteration.uploads[(d, pair[1])] for d in doc_ids]
            reports.append(build_report(pair, sets_a, sets_b, self.documents))
        return reports

    # --- class-system adjustment ------------------------------------------------------

    def remap_scheme(
        self, mapping: dict[str, str], rationale: str, timestamp: str | None = None
    ) -> tuple[LabelScheme, ClassAdjustment]:
        """Apply an irreversible class-system adjustment to all existing data."""
        self._check_no_inflight()
        adjustment = ClassAdjustment(
            from_version=self.scheme.version,
            to_version=self.scheme.version + 1,
            mapping=dict(mapping),
            rationale=rationale,
            timestamp=timestamp or _now(),
        )
        new_scheme = validate_adjustment(self.scheme, adjustment)

        for iteration in self.iterations:
            if iteration.gold:
                remapped = apply_adjustment(list(iteration.gold.values()), adjustment)
                iteration.gold = {g.doc_id: g for g in remapped}
            if iteration.uploads:
                keys = list(iteration.uploads)
                remapped = apply_adjustment([iteration.uploads[k] for k in keys], adjustment)
                iteration.uploads = {k: g for k, g in zip(keys, remapped)}
            if iteration.drafts:
                remapped = apply_adjustment(list(iteration.drafts.values()), adjustment)
                iteration.drafts = {g.doc_id: g for g in remapped}

        self.schemes.append(new_scheme)
        self.adjustments.append(adjustment)
        self._audit(
            "scheme_adjusted",
            {
                "from_version": adjustment.from_version,
                "to_version": adjustment.to_version,
                "mapping": dict(adjustment.mapping),
                "rationale": rationale,
                "labels": list(new_scheme.labels),
            },
        )
        return new_scheme, adjustment

    # --- dataset split ------------------------------------------------------------------

    def split_dataset(
        self, train: int, val: int, test: int, seed: int, force: bool = False
    ) -> dict[str, Any]:
        """Disjoint, exhaustive, seeded split of the finalized gold documents."""
        for count in (train, val, test):
            if count < 0:
                raise CountMismatch(f"split counts must be >= 0, got ({train}, {val}, {test})")
        finalized = self.finalized_doc_ids
        if train + val + test != len(finalized):
            raise CountMismatch(
                f"split counts sum to {train + val + test}, but {len(finalized)} docs are finalized"
            )
        if self.splits is not None and not force:
            raise SplitExists("a split is already recorded; pass force to overwrite")
        order = fisher_yates(finalized, SplitMix64(seed))
        self.splits = {
            "train": sorted(order[:train]),
            "val": sorted(order[train : train + val]),
            "test": sorted(order[train + val :]),
            "seed": seed,
        }
        self._audit(
            "dataset_split",
            {"train": train, "val": val, "test": test, "seed": seed, "forced": force},
        )
        return self.splits

    # --- summaries -------------------------------------------------------------------------

    def status(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "documents": len(self.documents),
            "annotators": list(self.annotators),
            "scheme_version": self.scheme.version,
            "labels": list(self.scheme.labels),
            "adjustments": len(self.adjustments),
            "unlabeled": len(self.unlabeled_pool),
            "finalized": len(self.finalized_doc_ids),
            "iterations": [
                {
                    "index": it.index,
                    "stage": it.stage,
                    "docs": len(it.doc_ids),
                    "uploads": len(it.uploads),
                    "conflicts_open": len(it.open_conflicts()),
                    "conflicts_resolved": len(it.conflicts) - len(it.open_conflicts()),
                    "gold_docs": len(it.gold),
                }
                for it in self.iterations
            ],
            "splits": (
                {k: len(v) for k, v in self.splits.items() if k != "seed"} if self.splits else None
            ),
        }
