"""HTTP facade over a loaded project for the collective review session.

Reads are concurrent; every write funnels through one lock (the
workflow's single-writer contract) and is flushed to disk immediately,
so an interrupted session loses nothing. The server never touches
annotations or gold data except through finalize.
"""
from __future__ import annotations

import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..core.types import AnnotationSet
from ..errors import (
    AnnoflowError,
    StateError,
    StorageError,
    UnknownConflict,
    UnknownDoc,
    UnresolvedConflict,
    ValidationError,
)
from ..merge import Conflict, Resolution
from ..workflow.project import Project
from ..workflow.store import ProjectStore
from . import schemas

CONTEXT_CHARS = 120

_PLACEHOLDER = """<!doctype html>
<html><head><meta charset="utf-8"><title>annoflow</title></head>
<body><h1>annoflow review server</h1>
<p>No review UI build found. The JSON API is live under <code>/api</code>;
build the frontend and pass its directory via <code>--ui-dir</code>.</p>
</body></html>
"""


class ReviewSession:
    """Loaded project plus the resolution buffer for the active iteration."""

    def __init__(self, store: ProjectStore, project: Project):
        self.store = store
        self.project = project
        self._write_lock = threading.Lock()

    @property
    def active_iteration_index(self) -> int | None:
        for iteration in self.project.iterations:
            if iteration.stage != "Finalized":
                return iteration.index
        return None

    def record_resolution(self, index: int, res: Resolution) -> Conflict:
        with self._write_lock, self.store.lock():
            conflict = self.project.record_resolution(index, res)
            # write-ahead so an interrupted session keeps every decision
            self.store.append_resolution(index, res)
            self.store.save(self.project)
            return conflict

    def finalize(self, index: int):
        with self._write_lock, self.store.lock():
            iteration = self.project.finalize_iteration(index)
            self.store.save(self.project)
            return iteration


def _conflict_out(session: ReviewSession, conflict: Conflict) -> schemas.ConflictOut:
    text = session.project.documents[conflict.doc_id].text
    variants = []
    for v in conflict.variants:
        w_start = max(0, v.start - CONTEXT_CHARS)
        w_end = min(len(text), v.end + CONTEXT_CHARS)
        variants.append(
            schemas.VariantOut(
                start=v.start,
                end=v.end,
                candidate_label=v.candidate_label or "",
                origin=v.origin or "",
                confidence=v.confidence,
                context=schemas.TextWindow(start=w_start, end=w_end, text=text[w_start:w_end]),
            )
        )
    region = conflict.region
    iteration = _iteration_of_conflict(session, conflict)
    res = iteration.resolutions.get(conflict.conflict_id)
    return schemas.ConflictOut(
        conflict_id=conflict.conflict_id,
        doc_id=conflict.doc_id,
        status=conflict.status,
        region_start=region[0],
        region_end=region[1],
        variants=variants,
        resolution=schemas.ResolutionIn(
            conflict_id=res.conflict_id,
            action=res.action,
            variant_index=res.variant_index,
            label=res.label,
            start=res.start,
            end=res.end,
            resolver=res.resolver,
        )
        if res
        else None,
    )


def _iteration_of_conflict(session: ReviewSession, conflict: Conflict):
    for iteration in session.project.iterations:
        if any(c.conflict_id == conflict.conflict_id for c in iteration.conflicts):
            return iteration
    raise UnknownConflict(conflict.conflict_id)


def _span_out(span) -> schemas.SpanOut:
    return schemas.SpanOut(
        start=span.start,
        end=span.end,
        label=span.label,
        candidate_label=span.candidate_label,
        origin=span.origin,
        confidence=span.confidence,
    )


def _iteration_summary(iteration) -> schemas.IterationSummary:
    return schemas.IterationSummary(
        index=iteration.index,
        stage=iteration.stage,
        docs=len(iteration.doc_ids),
        uploads=len(iteration.uploads),
        agreed_spans=sum(len(m.agreed_spans()) for m in iteration.merged.values()),
        conflicts_open=len(iteration.open_conflicts()),
        conflicts_resolved=len(iteration.conflicts) - len(iteration.open_conflicts()),
        gold_docs=len(iteration.gold),
    )


def create_app(project_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = ProjectStore(project_dir)
    session = ReviewSession(store, store.load())
    app = FastAPI(title="annoflow review server")
    app.state.session = session

    @app.exception_handler(AnnoflowError)
    async def _annoflow_error(request, exc: AnnoflowError):
        status = 400
        if isinstance(exc, (UnknownConflict, UnknownDoc)):
            status = 404
        elif isinstance(exc, UnresolvedConflict):
            status = 409
        elif isinstance(exc, StateError):
            status = 409
        elif isinstance(exc, StorageError):
            status = 503
        detail: dict[str, Any] | None = None
        if isinstance(exc, UnresolvedConflict):
            detail = {"conflict_ids": exc.conflict_ids}
        elif isinstance(exc, UnknownConflict):
            detail = {"conflict_id": exc.conflict_id}
        body = schemas.ErrorBody(code=type(exc).__name__, message=str(exc), detail=detail)
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.get("/api/project", response_model=schemas.ProjectSummary)
    def project_summary() -> schemas.ProjectSummary:
        project = session.project
        return schemas.ProjectSummary(
            name=project.name,
            annotators=list(project.annotators),
            scheme_version=project.scheme.version,
            labels=list(project.scheme.labels),
            documents=len(project.documents),
            finalized=len(project.finalized_doc_ids),
            iterations=[_iteration_summary(it) for it in project.iterations],
        )

    @app.get("/api/iterations/{index}", response_model=schemas.IterationSummary)
    def iteration_summary(index: int) -> schemas.IterationSummary:
        return _iteration_summary(session.project.iteration(index))

    @app.get("/api/iterations/{index}/conflicts", response_model=list[schemas.ConflictOut])
    def iteration_conflicts(index: int, status: str = "all") -> list[schemas.ConflictOut]:
        if status not in ("open", "resolved", "all"):
            raise ValidationError(f"unknown status filter {status!r}")
        iteration = session.project.iteration(index)
        conflicts = iteration.conflicts
        if status != "all":
            conflicts = [c for c in conflicts if c.status == status]
        return [_conflict_out(session, c) for c in conflicts]

    @app.get("/api/docs/{doc_id}", response_model=schemas.DocOut)
    def doc_view(doc_id: str) -> schemas.DocOut:
        project = session.project
        if doc_id not in project.documents:
            raise UnknownDoc(f"unknown document {doc_id!r}")
        state = "none"
        spans: tuple = ()
        for iteration in project.iterations:
            if doc_id in iteration.gold:
                state, spans = "gold", iteration.gold[doc_id].spans
            elif doc_id in iteration.merged:
                state, spans = "merged", iteration.merged[doc_id].spans
        return schemas.DocOut(
            id=doc_id,
            text=project.documents[doc_id].text,
            state=state,
            spans=[_span_out(s) for s in spans],
        )

    @app.post("/api/iterations/{index}/resolutions", response_model=schemas.ConflictOut)
    def post_resolution(index: int, body: schemas.ResolutionIn) -> schemas.ConflictOut:
        res = Resolution(
            conflict_id=body.conflict_id,
            action=body.action,
            variant_index=body.variant_index,
            label=body.label,
            start=body.start,
            end=body.end,
            resolver=body.resolver,
        )
        conflict = session.record_resolution(index, res)
        return _conflict_out(session, conflict)

    @app.post("/api/iterations/{index}/finalize", response_model=schemas.FinalizeOut)
    def post_finalize(index: int) -> schemas.FinalizeOut:
        iteration = session.finalize(index)
        return schemas.FinalizeOut(
            index=iteration.index, stage=iteration.stage, gold_docs=len(iteration.gold)
        )

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path and ui_path.is_dir() and (ui_path / "index.html").is_file():
        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse, include_in_schema=False)
        def placeholder() -> str:
            return _PLACEHOLDER

    return app


def serve(
    project_dir: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | Path | None = None,
) -> None:
    """Run the review server until interrupted; exits cleanly on SIGTERM."""
    import signal
    import socket

    import uvicorn

    # surface an in-use address as a plain OSError before uvicorn's own
    # sys.exit(1) path can swallow it
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))

    app = create_app(project_dir, ui_dir=ui_dir)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="info"))

    def _absorb(signum, frame):
        # uvicorn re-raises the captured signal after graceful shutdown and
        # restores this handler first; absorbing it turns SIGTERM/SIGINT
        # into a clean exit 0
        server.should_exit = True

    if threading.current_thread() is threading.main_thread():
        signal.signal(signal.SIGTERM, _absorb)
        signal.signal(signal.SIGINT, _absorb)
    server.run()
