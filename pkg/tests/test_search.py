import math
import random
from collections import Counter

import pytest

from corpora import separable_corpus
from polarity.modelsel import (
    FoldError,
    SearchMemory,
    SearchRecord,
    cross_validate,
    hill_climb,
    neighbors,
    random_search,
    sample_random,
    select_model,
    stratified_folds,
    write_trace,
)
from polarity.modelsel.space import TransformConfig, config_at, space_size
from polarity.textproc import CrossLangParams
from polarity.tokenizer import TokenType

T = TokenType


class Spy:
    """Wraps an objective and counts calls per fingerprint."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = Counter()

    def __call__(self, config):
        self.calls[config.fingerprint] += 1
        return self.fn(config)


def flags_enabled(config):
    return sum(getattr(config.cross, f) for f in ("del_d1", "del_diac", "lc"))


def seeded_memory(config, evaluate):
    memory = SearchMemory()
    memory.record(SearchRecord(config.fingerprint, evaluate(config), ()), "random")
    return memory


def test_constant_objective_stops_after_one_sweep():
    start = config_at(12345)
    spy = Spy(lambda c: 0.5)
    memory = seeded_memory(start, spy)
    best, value = hill_climb(start, spy, memory)
    assert best == start and value == 0.5
    assert sum(spy.calls.values()) == 1 + len(neighbors(start))


def test_monotone_flags_climb_to_all_enabled():
    rng = random.Random(0)
    for _ in range(20):
        start = config_at(rng.randrange(space_size(False)))
        memory = seeded_memory(start, flags_enabled)
        best, value = hill_climb(start, flags_enabled, memory)
        assert value == 3
        assert best.cross.del_d1 and best.cross.del_diac and best.cross.lc


def test_global_optimum_is_returned_unchanged():
    start = TransformConfig(CrossLangParams(del_d1=True, del_diac=True, lc=True), {T.W1})
    memory = seeded_memory(start, flags_enabled)
    assert hill_climb(start, flags_enabled, memory) == (start, 3)


def test_climb_needs_an_evaluated_start():
    with pytest.raises(ValueError):
        hill_climb(config_at(0), flags_enabled, SearchMemory())


def test_memory_prevents_reevaluation():
    spy = Spy(lambda c: hash(c.fingerprint) % 1000 / 1000)
    memory = SearchMemory()
    configs = sample_random(32, seed=1)
    start, _ = random_search(configs + configs[:5], spy, memory)
    hill_climb(start, spy, memory)
    assert max(spy.calls.values()) == 1
    assert len(memory.trace) == len(spy.calls)
    assert [e.seq for e in memory.trace] == list(range(len(memory.trace)))


def test_ties_break_by_fingerprint():
    configs = sample_random(10, seed=2)
    best, _ = random_search(configs, lambda c: 1.0, SearchMemory())
    assert best.fingerprint == min(c.fingerprint for c in configs)


def test_write_trace(tmp_path):
    memory = SearchMemory()
    random_search(sample_random(3, seed=0), lambda c: 0.25, memory)
    path = tmp_path / "trace.tsv"
    write_trace(memory.trace, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 4
    fp, value, phase, seq = lines[1].split("\t")
    assert (float(value), phase, seq) == (0.25, "random", "0")
    assert "tokenizer=" in fp


def test_stratified_folds_preserve_proportions():
    labels = ["a"] * 30 + ["b"] * 10 + ["c"] * 7
    folds = stratified_folds(labels, 5, seed=3)
    assert folds == stratified_folds(labels, 5, seed=3)
    sizes = Counter(folds)
    assert max(sizes.values()) - min(sizes.values()) <= 1
    for label, total in Counter(labels).items():
        per_fold = Counter(f for f, l in zip(folds, labels) if l == label)
        assert max(per_fold.values()) - min(per_fold.get(f, 0) for f in range(5)) <= 1
        assert sum(per_fold.values()) == total


W1_CONFIG = TransformConfig(CrossLangParams(), {T.W1})


def test_cross_validation_on_separable_corpus():
    corpus = separable_corpus(100, seed=1)
    record = cross_validate(corpus, W1_CONFIG, k=5)
    assert record.score == 1.0 and record.fold_scores == (1.0,) * 5
    assert cross_validate(corpus, W1_CONFIG, k=5) == record


def test_any_config_with_words_separates_the_corpus():
    corpus = separable_corpus(60, seed=2)
    for c in sample_random(6, seed=4):
        c = TransformConfig(c.cross, c.types | {T.W1})
        assert cross_validate(corpus, c, k=3).score == 1.0


def test_shuffled_labels_score_near_the_majority_rate():
    corpus = separable_corpus(200, seed=3)
    labels = [d.label for d in corpus]
    random.Random(0).shuffle(labels)
    shuffled = [type(d)(d.text, l, d.id) for d, l in zip(corpus, labels)]
    score = cross_validate(shuffled, W1_CONFIG, k=10).score
    rate = max(Counter(labels).values()) / len(labels)
    sigma = math.sqrt(rate * (1 - rate) / len(labels))
    assert abs(score - rate) <= 3 * sigma


def test_leave_one_out():
    corpus = separable_corpus(20, seed=4)
    record = cross_validate(corpus, W1_CONFIG, k=len(corpus))
    assert len(record.fold_scores) == 20
    assert set(record.fold_scores) <= {0.0, 1.0}
    assert record.score == sum(record.fold_scores) / 20


def test_cross_validation_errors():
    corpus = separable_corpus(10)
    with pytest.raises(ValueError):
        cross_validate(corpus, W1_CONFIG, k=2, metric="auc")
    lopsided = corpus[:1] + [d for d in corpus if d.label == "neg"]
    with pytest.raises(FoldError, match=r"fold \d+: training part has a single class"):
        cross_validate(lopsided, W1_CONFIG, k=len(lopsided))
    with pytest.raises(ValueError):
        cross_validate(corpus, W1_CONFIG, k=1)


def test_select_model_on_constant_surrogate():
    corpus = separable_corpus(20)
    spy = Spy(lambda c: 0.7)
    result = select_model(corpus, sample_size=1, evaluate=spy)
    (only,) = sample_random(1, seed=0)
    assert result.config == only and result.record.score == 0.7
    assert sum(spy.calls.values()) == 1 + len(neighbors(only))


def test_select_model_on_separable_corpus():
    corpus = separable_corpus(100, seed=5)
    result = select_model(corpus, sample_size=32, k=5, seed=0)
    assert result.record.score == 1.0
    assert result.record.score >= result.random_best[1]
    assert result.model.predict([d.text for d in corpus]) == [d.label for d in corpus]


def test_select_model_requires_two_classes():
    corpus = [d for d in separable_corpus(10) if d.label == "pos"]
    with pytest.raises(ValueError):
        select_model(corpus, sample_size=2)
