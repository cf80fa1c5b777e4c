"""Configuration space, cross-validation, metrics and the search itself."""
from .space import (
    TransformConfig,
    config_at,
    iter_space,
    neighbors,
    sample_random,
    space_size,
    tokenizer_neighbors,
    tokenizer_space_size,
)
from .metrics import METRICS, ClassScores, ScoreReport, metric_value, score
from .crossval import FoldError, SearchRecord, cross_validate, stratified_folds
from .search import SearchMemory, SelectionResult, TraceEntry, hill_climb, random_search, select_model, write_trace

__all__ = [
    "TransformConfig", "config_at", "iter_space", "neighbors", "sample_random", "space_size",
    "tokenizer_neighbors", "tokenizer_space_size",
    "METRICS", "ClassScores", "ScoreReport", "metric_value", "score",
    "FoldError", "SearchRecord", "cross_validate", "stratified_folds",
    "SearchMemory", "SelectionResult", "TraceEntry", "hill_climb", "random_search", "select_model", "write_trace",
]
