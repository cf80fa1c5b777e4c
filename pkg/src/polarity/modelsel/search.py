"""Random search followed by hill climbing with memory.

The memory maps configuration fingerprints to their records, so no
configuration is ever evaluated twice within a run.  Evaluation order is the
fingerprint order of each batch and ties are broken the same way, which
makes the outcome independent of how evaluations are scheduled.
"""
from __future__ import annotations

import logging
import os
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..corpus import LabeledDocument
from ..langpack import LanguagePack, get_pack
from ..textproc import EmoticonMap, default_emoticons
from .crossval import SearchRecord, cross_validate
from .space import TransformConfig, neighbors, sample_random

__all__ = [
    "TraceEntry",
    "SearchMemory",
    "random_search",
    "hill_climb",
    "SelectionResult",
    "select_model",
    "write_trace",
]

log = logging.getLogger(__name__)

Evaluate = Callable[[TransformConfig], "SearchRecord | float"]


@dataclass(frozen=True)
class TraceEntry:
    fingerprint: str
    score: float
    phase: str  # "random" or "climb"
    seq: int  # evaluation ordinal; used as the trace timestamp

    def line(self) -> str:
        return f"{self.fingerprint}\t{self.score!r}\t{self.phase}\t{self.seq}"


class SearchMemory:
    """Fingerprint -> record, with check-and-insert claiming."""

    def __init__(self):
        self._lock = threading.Lock()
        self._claimed: set[str] = set()
        self._records: dict[str, SearchRecord] = {}
        self.trace: list[TraceEntry] = []

    def __contains__(self, fingerprint: str) -> bool:
        with self._lock:
            return fingerprint in self._claimed

    def __len__(self) -> int:
        return len(self._claimed)

    def claim(self, fingerprint: str) -> bool:
        """Reserve ``fingerprint`` for evaluation; False if already taken."""
        with self._lock:
            if fingerprint in self._claimed:
                return False
            self._claimed.add(fingerprint)
            return True

    def record(self, record: SearchRecord, phase: str) -> None:
        with self._lock:
            self._claimed.add(record.fingerprint)
            self._records[record.fingerprint] = record
            self.trace.append(TraceEntry(record.fingerprint, record.score, phase, len(self.trace)))

    def get(self, fingerprint: str) -> SearchRecord | None:
        return self._records.get(fingerprint)

    def score(self, fingerprint: str) -> float:
        return self._records[fingerprint].score


def _as_record(config: TransformConfig, result) -> SearchRecord:
    if isinstance(result, SearchRecord):
        return result
    return SearchRecord(config.fingerprint, float(result), (float(result),))


def _evaluate_batch(configs, evaluate, memory, phase, map_fn) -> None:
    fresh = sorted((c for c in configs if memory.claim(c.fingerprint)), key=lambda c: c.fingerprint)
    for config, result in zip(fresh, map_fn(evaluate, fresh)):
        memory.record(_as_record(config, result), phase)


def _best(configs: Iterable[TransformConfig], memory: SearchMemory) -> tuple[TransformConfig, float]:
    # Highest score; ties go to the smallest fingerprint.
    return min(((c, memory.score(c.fingerprint)) for c in configs),
               key=lambda cs: (-cs[1], cs[0].fingerprint))


def random_search(
    configs: Sequence[TransformConfig],
    evaluate: Evaluate,
    memory: SearchMemory,
    *,
    map_fn=map,
) -> tuple[TransformConfig, float]:
    """Evaluate every sampled configuration and return the best one."""
    if not configs:
        raise ValueError("random search needs at least one configuration")
    _evaluate_batch(configs, evaluate, memory, "random", map_fn)
    return _best(configs, memory)


def hill_climb(
    start: TransformConfig,
    evaluate: Evaluate,
    memory: SearchMemory,
    *,
    swap: bool = True,
    map_fn=map,
) -> tuple[TransformConfig, float]:
    """Greedy best-neighbour ascent from an already evaluated ``start``.

    Each sweep evaluates the pivot's neighbours not yet in ``memory`` and
    moves to the best neighbour only if it strictly beats the pivot.
    """
    if memory.get(start.fingerprint) is None:
        raise ValueError("the starting configuration must already be evaluated")
    pivot, pivot_score = start, memory.score(start.fingerprint)
    while True:
        around = neighbors(pivot, swap=swap)
        _evaluate_batch(around, evaluate, memory, "climb", map_fn)
        best, best_score = _best(around, memory)
        if best_score <= pivot_score:
            return pivot, pivot_score
        log.info("climb %.6f -> %.6f: %s", pivot_score, best_score, best.fingerprint)
        pivot, pivot_score = best, best_score


@dataclass
class SelectionResult:
    config: TransformConfig
    model: object  # PolarityModel fitted on the whole corpus
    record: SearchRecord  # cross-validation of the winner at the reporting fold count
    search_record: SearchRecord  # the winner's record from the search itself
    random_best: tuple  # (config, score) that seeded the climb
    memory: SearchMemory = field(repr=False)


# Worker-process state for parallel evaluation.
_CONTEXT: dict = {}


def _init_worker(context: dict) -> None:
    _CONTEXT.clear()
    _CONTEXT.update(context)


def _cv_worker(config: TransformConfig) -> SearchRecord:
    ctx = _CONTEXT
    return cross_validate(ctx["corpus"], config, ctx["k"], ctx["metric"], ctx["seed"],
                          pack=ctx["pack"], emoticons=ctx["emoticons"], C=ctx["C"])


def select_model(
    corpus: Sequence[LabeledDocument],
    sample_size: int = 32,
    include_lang: bool = False,
    k: int = 5,
    metric: str = "accuracy",
    seed: int = 0,
    *,
    pack: LanguagePack | None = None,
    emoticons: EmoticonMap | None = None,
    C: float = 1.0,
    swap: bool = True,
    jobs: int | None = 1,
    report_k: int | None = None,
    evaluate: Evaluate | None = None,
) -> SelectionResult:
    """Random search, hill climbing from its winner, then a full-corpus refit.

    ``evaluate`` replaces cross-validation as the objective (handy for
    surrogate objectives).  ``report_k`` re-runs cross-validation of the
    winner with a different fold count for the returned ``record``.
    """
    from ..pipeline import PolarityModel

    if not corpus:
        raise ValueError("the corpus is empty")
    if len({doc.label for doc in corpus}) < 2:
        raise ValueError("the corpus needs at least two classes")
    pack = pack if pack is not None else get_pack(None)
    emoticons = emoticons if emoticons is not None else default_emoticons()
    context = dict(corpus=list(corpus), k=k, metric=metric, seed=seed, pack=pack, emoticons=emoticons, C=C)
    jobs = jobs or os.cpu_count() or 1
    memory = SearchMemory()
    configs = sample_random(sample_size, include_lang, seed)

    executor = None
    if evaluate is None and jobs > 1:
        executor = ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(context,))
        objective, map_fn = _cv_worker, executor.map
    else:
        if evaluate is None:
            _init_worker(context)
            objective = _cv_worker
        else:
            objective = evaluate
        map_fn = map
    try:
        rs_config, rs_score = random_search(configs, objective, memory, map_fn=map_fn)
        best, _ = hill_climb(rs_config, objective, memory, swap=swap, map_fn=map_fn)
    finally:
        if executor is not None:
            executor.shutdown()
    search_record = memory.get(best.fingerprint)
    record = search_record
    if report_k is not None and report_k != k and evaluate is None:
        record = cross_validate(corpus, best, report_k, metric, seed, pack=pack, emoticons=emoticons, C=C)
    model = PolarityModel.fit([d.text for d in corpus], [d.label for d in corpus], best,
                              pack=pack, emoticons=emoticons, C=C, seed=seed)
    return SelectionResult(best, model, record, search_record, (rs_config, rs_score), memory)


def write_trace(trace: Sequence[TraceEntry], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# fingerprint\tscore\tphase\tseq\n")
        for entry in trace:
            fh.write(entry.line() + "\n")
