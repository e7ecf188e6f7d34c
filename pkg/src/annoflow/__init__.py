"""annoflow: a dual-annotator NER annotation workflow engine.

Batches of documents move through sampling (random or
query-by-uncertainty), optional model-bootstrapped pre-annotation, dual
individual annotation, automatic merge with conflict marking, collective
resolution, and finalization into ground truth, with inter-annotator
agreement tracking, class-system adjustments and entity/token-level
evaluation along the way.
"""

__version__ = "0.1.0"
