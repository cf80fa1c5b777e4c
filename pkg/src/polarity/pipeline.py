"""Text -> term bag -> TF-IDF -> linear model, for one configuration."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classify import LinearModel, train
from .langpack import LanguagePack, get_pack, process_words
from .modelsel.space import TransformConfig
from .textproc import EmoticonMap, default_emoticons, normalize
from .tokenizer import TermBag, build_term_bag
from .vectorize import Vocabulary, build_vocabulary, transform

__all__ = ["TextPipeline", "PolarityModel"]


class TextPipeline:
    """Turns raw text into a :data:`TermBag` under one configuration."""

    def __init__(self, config: TransformConfig, pack: LanguagePack | None = None,
                 emoticons: EmoticonMap | None = None):
        self.config = config
        self.pack = pack if pack is not None else get_pack(None)
        self.emoticons = emoticons if emoticons is not None else default_emoticons()

    def normalize(self, text: str) -> str:
        return normalize(text, self.config.cross, self.emoticons)

    def words(self, normalized: str) -> list[str]:
        words = normalized.split()
        if self.config.lang is not None:
            words = process_words(words, self.config.lang, self.pack)
        return words

    def bag(self, text: str) -> TermBag:
        normalized = self.normalize(text)
        return build_term_bag(normalized, self.words(normalized), self.config.types)

    def bags(self, texts: Sequence[str]) -> list[TermBag]:
        return [self.bag(t) for t in texts]


@dataclass(frozen=True, eq=False)
class PolarityModel:
    """A fitted classifier bundled with everything needed to apply it."""

    config: TransformConfig
    vocabulary: Vocabulary
    linear: LinearModel
    pack: LanguagePack
    emoticons: EmoticonMap

    @classmethod
    def fit(
        cls,
        texts: Sequence[str],
        labels: Sequence[str],
        config: TransformConfig,
        *,
        pack: LanguagePack | None = None,
        emoticons: EmoticonMap | None = None,
        C: float = 1.0,
        seed: int = 0,
    ) -> "PolarityModel":
        pipe = TextPipeline(config, pack, emoticons)
        return cls.fit_bags(pipe.bags(texts), labels, pipe, C=C, seed=seed)

    @classmethod
    def fit_bags(cls, bags, labels, pipe: TextPipeline, *, C: float = 1.0, seed: int = 0) -> "PolarityModel":
        vocab = build_vocabulary(bags)
        linear = train(transform(bags, vocab), labels, C, seed=seed)
        return cls(pipe.config, vocab, linear, pipe.pack, pipe.emoticons)

    @property
    def classes(self) -> tuple:
        return self.linear.classes

    @property
    def pipeline(self) -> TextPipeline:
        return TextPipeline(self.config, self.pack, self.emoticons)

    def decision_function(self, texts: Sequence[str]) -> np.ndarray:
        bags = self.pipeline.bags(texts)
        if not bags:
            return np.zeros((0, len(self.classes)))
        return self.linear.decision_function(transform(bags, self.vocabulary))

    def predict(self, texts: Sequence[str]) -> list:
        scores = self.decision_function(texts)
        return [self.classes[i] for i in np.argmax(scores, axis=1)]
