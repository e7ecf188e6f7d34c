"""Batch selection: random (the default strategy) or query-by-uncertainty.

Document uncertainty is the mean of per-token uncertainties so long
documents are not favored over short ones. Everything is deterministic,
ties included: reproducible experiments outrank statistical purity at
this scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BatchTooLarge, EmptyDocument, ValidationError
from .predictions import TokenProbabilities
from .rng import SplitMix64, fisher_yates

STRATEGIES = ("random", "least_confidence", "margin", "entropy")
UNCERTAINTY_METHODS = ("least_confidence", "margin", "entropy")


@dataclass(frozen=True)
class SamplingConfig:
    strategy: str
    batch_size: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r} (choose from {', '.join(STRATEGIES)})")
        if not (isinstance(self.batch_size, int) and self.batch_size >= 1):
            raise ValidationError(f"batch_size must be an integer >= 1, got {self.batch_size!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed!r}")


@dataclass(frozen=True)
class UncertaintyScore:
    doc_id: str
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValidationError(f"score for {self.doc_id!r} is not finite")


def _token_uncertainty(row: Sequence[float], method: str) -> float:
    if method == "least_confidence":
        return 1.0 - max(row)
    if method == "margin":
        top = max(row)
        rest = list(row)
        rest.remove(top)
        second = max(rest) if rest else 0.0
        return 1.0 - (top - second)
    if method == "entropy":
        return -sum(q * math.log(q) for q in row if q > 0.0)
    raise ValidationError(f"unknown uncertainty method {method!r}")


def score_uncertainty(p: TokenProbabilities, method: str = "least_confidence") -> UncertaintyScore:
    """Document score = mean per-token uncertainty under the given method."""
    if method not in UNCERTAINTY_METHODS:
        raise ValidationError(f"unknown uncertainty method {method!r}")
    if not p.tokens:
        raise EmptyDocument(f"document {p.doc_id!r} has no tokens to score")
    total = sum(_token_uncertainty(row, method) for row in p.probs)
    return UncertaintyScore(doc_id=p.doc_id, value=total / len(p.tokens))


def select_batch(scores: Sequence[UncertaintyScore], k: int) -> list[str]:
    """The k most uncertain doc ids, descending; ties broken by ascending id."""
    ids = [s.doc_id for s in scores]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate doc ids in scores")
    if k > len(scores):
        raise BatchTooLarge(f"k={k} exceeds {len(scores)} scored documents")
    ranked = sorted(scores, key=lambda s: (-s.value, s.doc_id))
    return [s.doc_id for s in ranked[:k]]


def select_random(pool: Sequence[str], k: int, seed: int) -> list[str]:
    """Uniform sample without replacement; byte-stable across platforms.

    Fisher-Yates over the pool sorted by doc id, driven by SplitMix64.
    """
    if len(set(pool)) != len(pool):
        raise ValidationError("duplicate doc ids in pool")
    if k > len(pool):
        raise BatchTooLarge(f"k={k} exceeds pool of {len(pool)}")
    return fisher_yates(sorted(pool), SplitMix64(seed), k)


def scores_to_json(scores: Sequence[UncertaintyScore], method: str) -> list[dict]:
    return [{"doc_id": s.doc_id, "value": s.value, "method": method} for s in scores]
