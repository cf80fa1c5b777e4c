"""Stratified k-fold cross-validation of a whole configuration."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..corpus import LabeledDocument
from ..langpack import LanguagePack
from ..textproc import EmoticonMap
from ..vectorize import transform
from .metrics import METRICS, metric_value
from .space import TransformConfig

__all__ = ["SearchRecord", "FoldError", "stratified_folds", "cross_validate"]


class FoldError(ValueError):
    """A fold cannot be trained on (its training part has one class)."""


@dataclass(frozen=True)
class SearchRecord:
    fingerprint: str
    score: float
    fold_scores: tuple

    @classmethod
    def from_folds(cls, fingerprint: str, fold_scores: Sequence[float]) -> "SearchRecord":
        fold_scores = tuple(float(s) for s in fold_scores)
        return cls(fingerprint, sum(fold_scores) / len(fold_scores), fold_scores)


def stratified_folds(labels: Sequence, k: int, seed: int = 0) -> list[int]:
    """Fold number of each document.

    Each class is shuffled (seeded) and dealt round-robin; the dealing
    continues across classes so fold sizes differ by at most one.
    """
    n = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of documents ({n})")
    rng = random.Random(seed)
    by_class: dict = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    fold_of = [0] * n
    dealt = 0
    for label in sorted(by_class, key=str):
        members = by_class[label]
        rng.shuffle(members)
        for i in members:
            fold_of[i] = dealt % k
            dealt += 1
    return fold_of


def cross_validate(
    corpus: Sequence[LabeledDocument],
    config: TransformConfig,
    k: int = 5,
    metric: str = "accuracy",
    seed: int = 0,
    *,
    pack: LanguagePack | None = None,
    emoticons: EmoticonMap | None = None,
    C: float = 1.0,
) -> SearchRecord:
    """Mean held-out ``metric`` over ``k`` stratified folds.

    The text transformations do not depend on the training data, so term
    bags are computed once; vocabulary and classifier are refitted per fold.
    """
    from ..pipeline import PolarityModel, TextPipeline

    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")
    labels = [doc.label for doc in corpus]
    folds = stratified_folds(labels, k, seed)
    for f in range(k):
        train_classes = {l for l, g in zip(labels, folds) if g != f}
        if len(train_classes) < 2:
            raise FoldError(f"fold {f}: training part has a single class {sorted(train_classes, key=str)}")
    pipe = TextPipeline(config, pack, emoticons)
    bags = pipe.bags([doc.text for doc in corpus])
    scores = []
    for f in range(k):
        train_idx = [i for i, g in enumerate(folds) if g != f]
        test_idx = [i for i, g in enumerate(folds) if g == f]
        model = PolarityModel.fit_bags([bags[i] for i in train_idx], [labels[i] for i in train_idx],
                                       pipe, C=C, seed=seed)
        X = transform([bags[i] for i in test_idx], model.vocabulary)
        predicted = model.linear.predict(X)
        scores.append(metric_value(metric, predicted, [labels[i] for i in test_idx]))
    return SearchRecord.from_folds(config.fingerprint, scores)
