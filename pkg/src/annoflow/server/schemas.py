"""Pydantic request/response models for the review server."""
from __future__ import annotations

from pydantic import BaseModel, Field


class SpanOut(BaseModel):
    start: int
    end: int
    label: str
    candidate_label: str | None = None
    origin: str | None = None
    confidence: float | None = None


class TextWindow(BaseModel):
    start: int
    end: int
    text: str


class VariantOut(BaseModel):
    start: int
    end: int
    candidate_label: str
    origin: str
    confidence: float | None = None
    context: TextWindow


class ConflictOut(BaseModel):
    conflict_id: str
    doc_id: str
    status: str
    region_start: int
    region_end: int
    variants: list[VariantOut]
    resolution: ResolutionIn | None = None


class IterationSummary(BaseModel):
    index: int
    stage: str
    docs: int
    uploads: int
    agreed_spans: int
    conflicts_open: int
    conflicts_resolved: int
    gold_docs: int


class ProjectSummary(BaseModel):
    name: str
    annotators: list[str]
    scheme_version: int
    labels: list[str]
    documents: int
    finalized: int
    iterations: list[IterationSummary]


class DocOut(BaseModel):
    id: str
    text: str
    state: str = Field(description="which annotation layer the spans come from: gold, merged or none")
    spans: list[SpanOut]


class ResolutionIn(BaseModel):
    conflict_id: str
    action: str
    variant_index: int | None = None
    label: str | None = None
    start: int | None = None
    end: int | None = None
    resolver: str = "collective"


class FinalizeOut(BaseModel):
    index: int
    stage: str
    gold_docs: int


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: dict | None = None


ConflictOut.model_rebuild()
