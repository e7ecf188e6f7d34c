"""Exception hierarchy.

Three branches mirror the CLI exit-code contract: validation errors (bad
input data) exit 1, state errors (operation not legal in the current
project/iteration state) exit 2, storage errors (I/O, unreachable
services) exit 3.
"""
from __future__ import annotations


class AnnoflowError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ValidationError(AnnoflowError):
    exit_code = 1


class StateError(AnnoflowError):
    exit_code = 2


class StorageError(AnnoflowError):
    exit_code = 3


# --- validation (exit 1) -------------------------------------------------

class OverlappingSpans(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DocMismatch(ValidationError):
    pass


class SchemeMismatch(ValidationError):
    pass


class DocSetMismatch(ValidationError):
    pass


class EmptyDocument(ValidationError):
    pass


class BatchTooLarge(ValidationError):
    pass


class SchemaViolation(ValidationError):
    pass


class MissingDoc(ValidationError):
    pass


class PartialMapping(ValidationError):
    def __init__(self, unmapped: list[str]):
        super().__init__(f"mapping misses labels: {', '.join(sorted(unmapped))}")
        self.unmapped = sorted(unmapped)


class VersionSkew(ValidationError):
    pass


class UnresolvedConflictsPresent(ValidationError):
    pass


class TooFewAnnotators(ValidationError):
    pass


class EmptyCorpus(ValidationError):
    pass


class InvalidScheme(ValidationError):
    pass


class WrongAnnotator(ValidationError):
    pass


class UnknownDoc(ValidationError):
    pass


class UnknownConflict(ValidationError):
    def __init__(self, conflict_id: str):
        super().__init__(f"unknown conflict: {conflict_id}")
        self.conflict_id = conflict_id


class OverlapAfterResolution(ValidationError):
    def __init__(self, message: str, colliding: tuple | None = None):
        super().__init__(message)
        self.colliding = colliding


class CountMismatch(ValidationError):
    pass


# --- state (exit 2) -------------------------------------------------------

class IterationInFlight(StateError):
    pass


class PoolExhausted(StateError):
    pass


class WrongStage(StateError):
    pass


class UnresolvedConflict(StateError):
    def __init__(self, conflict_ids: list[str]):
        ids = ", ".join(sorted(conflict_ids))
        super().__init__(f"unresolved conflicts: {ids}")
        self.conflict_ids = sorted(conflict_ids)


class SplitExists(StateError):
    pass


# --- storage (exit 3) -----------------------------------------------------

class ProviderUnavailable(StorageError):
    pass


class ProjectLoadError(StorageError):
    pass
