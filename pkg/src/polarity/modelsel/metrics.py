"""Classification scores: accuracy, per-class F1, macro-F1, (F1pos + F1neg) / 2."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

__all__ = ["ClassScores", "ScoreReport", "score", "METRICS", "metric_value"]


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ScoreReport:
    accuracy: float
    per_class: dict  # label -> ClassScores, for every label present in the truth
    macro_f1: float
    pos_neg_f1: float

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "pos_neg_f1": self.pos_neg_f1,
            "per_class": {
                str(k): {"precision": v.precision, "recall": v.recall, "f1": v.f1, "support": v.support}
                for k, v in self.per_class.items()
            },
        }


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _class_scores(label, predicted, truth) -> ClassScores:
    tp = sum(1 for p, t in zip(predicted, truth) if p == label and t == label)
    n_pred = sum(1 for p in predicted if p == label)
    n_true = sum(1 for t in truth if t == label)
    precision = _ratio(tp, n_pred)
    recall = _ratio(tp, n_true)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScores(precision, recall, f1, n_true)


def score(predicted: Sequence[Hashable], truth: Sequence[Hashable], positive="pos", negative="neg") -> ScoreReport:
    """Score predictions against gold labels.

    Macro-F1 averages over the classes present in ``truth``; F1 is 0 whenever
    precision and recall are both 0.
    """
    predicted = list(predicted)
    truth = list(truth)
    if len(predicted) != len(truth):
        raise ValueError(f"length mismatch: {len(predicted)} predictions, {len(truth)} gold labels")
    if not truth:
        raise ValueError("cannot score an empty prediction list")
    accuracy = sum(1 for p, t in zip(predicted, truth) if p == t) / len(truth)
    labels = sorted(set(truth), key=str)
    per_class = {label: _class_scores(label, predicted, truth) for label in labels}
    macro = sum(c.f1 for c in per_class.values()) / len(per_class)
    f1_pos = _class_scores(positive, predicted, truth).f1
    f1_neg = _class_scores(negative, predicted, truth).f1
    return ScoreReport(accuracy, per_class, macro, (f1_pos + f1_neg) / 2)


METRICS = {
    "accuracy": lambda r: r.accuracy,
    "macro-f1": lambda r: r.macro_f1,
    "pos-neg-f1": lambda r: r.pos_neg_f1,
}


def metric_value(metric: str, predicted, truth) -> float:
    try:
        pick = METRICS[metric]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}") from None
    return pick(score(predicted, truth))
