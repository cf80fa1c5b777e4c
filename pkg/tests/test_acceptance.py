"""Acceptance criteria, one group of tests per criterion.

``conftest.py`` prints a PASS/FAIL line per criterion after the run.
"""
import contextlib
import io
import math
import random
import re
import statistics
import time
from collections import Counter
from dataclasses import replace

import numpy as np
import pytest

from corpora import separable_corpus, write_jsonl
from polarity.classify import train
from polarity.cli.main import main
from polarity.langpack import LangParams, get_pack
from polarity.modelsel import neighbors, sample_random, select_model, space_size, tokenizer_neighbors
from polarity.modelsel.metrics import score
from polarity.modelsel.space import TransformConfig, config_at
from polarity.pipeline import PolarityModel, TextPipeline
from polarity.textproc import CrossLangParams, EntityAction, map_emoticons, normalize
from polarity.tokenizer import ALL_TOKEN_TYPES, TokenType, build_term_bag, char_qgrams, word_ngrams
from polarity.vectorize import build_vocabulary, tfidf

T = TokenType
criterion = pytest.mark.criterion


@criterion(1, "space sizes 331,128 / 3,973,536 in < 1 ms")
def test_ac01_space_size():
    best = math.inf
    for _ in range(5):
        start = time.perf_counter()
        small, large = space_size(False), space_size(True)
        best = min(best, time.perf_counter() - start)
    assert (small, large) == (331_128, 3_973_536)
    assert best < 1e-3


@criterion(2, "word bigrams and q-grams by definition")
def test_ac02_word_bigrams_verbatim():
    assert word_ngrams("the lights and shadows of your future".split(), 2) == [
        "the lights", "lights and", "and shadows", "shadows of", "of your", "your future",
    ]


@criterion(2, "word bigrams and q-grams by definition")
def test_ac02_qgrams_by_definition_aca_listed_in_source_is_an_erratum():
    grams = char_qgrams("abra_cadabra", 3)
    assert grams == ["abr", "bra", "ra_", "a_c", "_ca", "cad", "ada", "dab", "abr", "bra"]
    assert "aca" not in grams


@criterion(3, "nine reference emoticons grouped exactly")
@pytest.mark.parametrize("emoticon, tag", [
    (":)", "_pos"), (":D", "_pos"), (":P", "_pos"),
    (":(", "_neg"), (":-(", "_neg"), (":'(", "_neg"),
    (":-|", "_neu"), ("U_U", "_neu"), ("-.-", "_neu"),
])
def test_ac03_emoticon_groups(emoticon, tag):
    assert map_emoticons(emoticon, EntityAction.GROUP) == tag
    assert map_emoticons(f"ok {emoticon} ok", EntityAction.GROUP).split() == ["ok", tag, "ok"]


NEG_ONLY = LangParams(stem=False, neg=True, sw=EntityAction.NONE)


@criterion(4, "negation worked examples (es, en)")
@pytest.mark.parametrize("lang, text, token", [
    ("es", "El coche no es bonito", "no_bonito"),
    ("en", "The car is not nice", "not_nice"),
])
def test_ac04_negation(lang, text, token):
    config = TransformConfig(CrossLangParams(lc=True), {T.W1}, NEG_ONLY)
    pipe = TextPipeline(config, get_pack(lang))
    assert token in pipe.words(pipe.normalize(text))
    assert f"W1:{token}" in pipe.bag(text)


def surrogate(config):
    """Structured part plus a deterministic per-configuration jitter."""
    jitter = random.Random(config.fingerprint).random()
    structured = sum(getattr(config.cross, f) for f in ("del_d1", "del_diac", "lc"))
    structured += (config.cross.emo is EntityAction.GROUP) + (T.W1 in config.types) - 0.1 * len(config.types)
    return structured + 0.5 * jitter


@criterion(5, "hill climbing >= random best in every run, no repeated evaluation, < 30 s")
def test_ac05_climb_never_loses_and_never_repeats():
    corpus = separable_corpus(20)
    start = time.perf_counter()
    runs = 0
    for seed in range(50):
        for sample_size in (32, 64):
            calls = Counter()

            def spy(config):
                calls[config.fingerprint] += 1
                return surrogate(config)

            result = select_model(corpus, sample_size=sample_size, seed=seed, evaluate=spy)
            assert result.search_record.score >= result.random_best[1]
            assert max(calls.values()) == 1
            assert len(calls) == len(result.memory)
            runs += 1
    assert runs == 100
    assert time.perf_counter() - start < 30


def is_set_neighbor(t, s):
    return bool(s) and s != t and len(t | s) in (len(t), len(t) + 1) and len(t & s) in (len(t), len(t) - 1)


@criterion(6, "tokenizer neighbourhood set algebra, 27 neighbours for |t|=1, < 5 s")
def test_ac06_neighborhood_algebra():
    rng = random.Random(6)
    start = time.perf_counter()
    for _ in range(1000):
        c = config_at(rng.randrange(space_size(False)))
        t = c.types
        for s in tokenizer_neighbors(t):
            assert is_set_neighbor(t, s)
        if len(t) == 1:
            assert len(neighbors(c)) == 27
    for x in ALL_TOKEN_TYPES:
        c = TransformConfig(CrossLangParams(), {x})
        assert len(neighbors(c)) == 27
    assert time.perf_counter() - start < 5


@criterion(7, "optimize --sample-size 8 reaches 10-fold CV accuracy 1.0 in < 60 s")
def test_ac07_end_to_end(tmp_path):
    train_path = write_jsonl(separable_corpus(200, seed=7), tmp_path / "train.jsonl")
    out = io.StringIO()
    start = time.perf_counter()
    with contextlib.redirect_stdout(out):
        code = main(["optimize", str(train_path), "-o", str(tmp_path / "m"), "--sample-size", "8", "-k", "10"])
    elapsed = time.perf_counter() - start
    assert code == 0
    assert float(re.search(r"reported accuracy \(10-fold CV\): ([\d.]+)", out.getvalue()).group(1)) == 1.0
    assert elapsed < 60


@criterion(8, "classifier: separable fit, determinism across --jobs, unit norm, idf(N)=0")
def test_ac08_separable_training_accuracy():
    rng = np.random.default_rng(8)
    for _ in range(10):
        dim = int(rng.integers(2, 10))
        w = rng.normal(size=dim)
        X = rng.normal(size=(150, dim))
        X = X[np.abs(X @ w) > 0.3 * np.linalg.norm(w)]
        y = ["pos" if v > 0 else "neg" for v in X @ w]
        assert train(X, y).predict(X) == y


@criterion(8, "classifier: separable fit, determinism across --jobs, unit norm, idf(N)=0")
def test_ac08_determinism_across_jobs():
    corpus = separable_corpus(60, seed=8)
    texts = [d.text for d in corpus] + ["zorblat gribnek", "unknown words"]
    runs = [select_model(corpus, sample_size=4, k=3, seed=3, jobs=j) for j in (1, 2, 1)]
    predictions = [r.model.predict(texts) for r in runs]
    assert predictions[0] == predictions[1] == predictions[2]
    assert runs[0].config == runs[1].config
    assert [e.line() for e in runs[0].memory.trace] == [e.line() for e in runs[1].memory.trace]
    np.testing.assert_array_equal(runs[0].model.linear.weights, runs[1].model.linear.weights)


@criterion(8, "classifier: separable fit, determinism across --jobs, unit norm, idf(N)=0")
def test_ac08_tfidf_norm_and_zero_idf():
    rng = random.Random(8)
    for _ in range(300):
        bags = [Counter({f"t{rng.randrange(20)}": rng.randint(1, 4) for _ in range(rng.randint(1, 8))})
                for _ in range(rng.randint(2, 10))]
        vocab = build_vocabulary(bags)
        for bag in bags:
            norm = tfidf(bag, vocab).norm()
            assert norm == 0.0 or abs(norm - 1.0) <= 1e-9
    vocab = build_vocabulary([{"a": 1, "b": 1}, {"a": 2}])
    assert vocab.idf("a") == 0.0


@criterion(9, "metric example at 1e-12, macro-F1 = mean per-class F1")
def test_ac09_hand_example():
    r = score(["pos", "neg", "neg", "neg"], ["pos", "pos", "neg", "neg"])
    assert abs(r.accuracy - 0.75) <= 1e-12
    assert abs(r.per_class["pos"].f1 - 2 / 3) <= 1e-12
    assert abs(r.per_class["neg"].f1 - 0.8) <= 1e-12
    assert abs(r.pos_neg_f1 - (2 / 3 + 0.8) / 2) <= 1e-12


@criterion(9, "metric example at 1e-12, macro-F1 = mean per-class F1")
def test_ac09_macro_is_mean():
    rng = random.Random(9)
    for _ in range(1000):
        n = rng.randint(1, 40)
        truth = [rng.choice("abcd") for _ in range(n)]
        predicted = [rng.choice("abcde") for _ in range(n)]
        r = score(predicted, truth)
        assert abs(r.macro_f1 - statistics.fmean(c.f1 for c in r.per_class.values())) <= 1e-12


FRAGMENTS = [
    "http://", "https://x.co/a", "HTTP://", "@", "@@", "user", ":", ")", "(", "-", "--", "D", "P", "'",
    "U", "_", ".", "!", "?", "á", "É", "ñ", "ü", "aa", "A", "1", "2.5", "-3", "+", " ", "  ", "\t",
    "😀", "<3", "x", "X", "o", "O", "İ", "ß", "é", "́", ":)", ":-(", "-.-", "U_U", "xD", "no", "es",
]
N_RANDOM = 10_000


@criterion(10, "idempotence, count formulas, bag additivity over >= 10,000 inputs each")
def test_ac10_normalization_idempotence():
    rng = random.Random(10)
    configs = [c.cross for c in sample_random(500, seed=10)]
    for i in range(N_RANDOM):
        text = "".join(rng.choice(FRAGMENTS) for _ in range(rng.randint(0, 20)))
        params = configs[i % len(configs)]
        if rng.random() < 0.5:
            params = replace(params, del_punc=True)
        once = normalize(text, params)
        assert normalize(once, params) == once, (text, params)


@criterion(10, "idempotence, count formulas, bag additivity over >= 10,000 inputs each")
def test_ac10_count_formulas():
    rng = random.Random(11)
    for _ in range(N_RANDOM):
        words = [rng.choice(["a", "bb", "c"]) for _ in range(rng.randint(0, 12))]
        text = "".join(rng.choice("ab c_") for _ in range(rng.randint(0, 30)))
        n, q = rng.randint(1, 2), rng.randint(1, 7)
        assert len(word_ngrams(words, n)) == max(0, len(words) - n + 1)
        assert len(char_qgrams(text, q)) == max(0, len(text) - q + 1)


@criterion(10, "idempotence, count formulas, bag additivity over >= 10,000 inputs each")
def test_ac10_bag_additivity():
    rng = random.Random(12)
    for _ in range(N_RANDOM):
        words = [rng.choice(["a", "bb", "c", "no_a"]) for _ in range(rng.randint(0, 8))]
        text = " ".join(words)
        a = frozenset(rng.sample(ALL_TOKEN_TYPES, rng.randint(1, 9)))
        b = frozenset(rng.sample(ALL_TOKEN_TYPES, rng.randint(1, 9)))
        union = build_term_bag(text, words, a | b)
        left = build_term_bag(text, words, a - b) if a - b else Counter()
        assert union == left + build_term_bag(text, words, b)
