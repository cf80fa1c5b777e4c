"""TF-IDF vocabulary and sparse document vectors.

Weighting: ``tf = count / total count in the bag``, ``idf = ln(N / df)``,
then the vector is scaled to unit Euclidean norm.  A term present in every
training document keeps its index but always weighs 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

__all__ = ["EmptyCorpusError", "Vocabulary", "TermVector", "build_vocabulary", "tfidf", "transform", "stack"]


class EmptyCorpusError(ValueError):
    """Training input has no documents."""


class Vocabulary:
    """Term -> (index, document frequency), plus the corpus size ``N``.

    Indices follow lexicographic term order.
    """

    __slots__ = ("_terms", "_index", "_df", "_n_docs")

    def __init__(self, doc_freq: Mapping[str, int], n_docs: int):
        if n_docs < 1:
            raise EmptyCorpusError("a vocabulary needs at least one document")
        terms = sorted(doc_freq)
        df = np.array([doc_freq[t] for t in terms], dtype=np.int64)
        if df.size and (df.min() < 1 or df.max() > n_docs):
            raise ValueError("document frequencies must lie in [1, N]")
        self._terms = tuple(terms)
        self._index = {t: i for i, t in enumerate(terms)}
        self._df = df
        self._df.setflags(write=False)
        self._n_docs = int(n_docs)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: object) -> bool:
        return term in self._index

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self._n_docs == other._n_docs
            and self._terms == other._terms
            and np.array_equal(self._df, other._df)
        )

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)}, n_docs={self._n_docs})"

    @property
    def n_docs(self) -> int:
        return self._n_docs

    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def doc_freqs(self) -> np.ndarray:
        return self._df

    def index(self, term: str) -> int:
        return self._index[term]

    def df(self, term: str) -> int:
        return int(self._df[self._index[term]])

    def idf(self, term: str) -> float:
        return math.log(self._n_docs / self.df(term))

    def get(self, term: str) -> tuple[int, int] | None:
        i = self._index.get(term)
        return None if i is None else (i, int(self._df[i]))


@dataclass(frozen=True)
class TermVector:
    """Sparse vector as strictly increasing ``indices`` and their ``weights``."""

    indices: np.ndarray
    weights: np.ndarray
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.float64)
        if idx.shape != w.shape or idx.ndim != 1:
            raise ValueError("indices and weights must be 1-d arrays of equal length")
        if idx.size:
            if np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.dim:
                raise ValueError("indices must be strictly increasing and below dim")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, dim: int) -> "TermVector":
        return cls(np.empty(0, np.int64), np.empty(0, np.float64), dim)

    @classmethod
    def from_dense(cls, values: Sequence[float]) -> "TermVector":
        values = np.asarray(values, dtype=np.float64)
        idx = np.flatnonzero(values)
        return cls(idx, values[idx], values.size)

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, index: int) -> float:
        pos = np.searchsorted(self.indices, index)
        if pos < self.indices.size and self.indices[pos] == index:
            return float(self.weights[pos])
        return 0.0

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.weights, self.weights)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.weights
        return out

    def scaled(self, alpha: float) -> "TermVector":
        return TermVector(self.indices, self.weights * alpha, self.dim)


def build_vocabulary(bags: Iterable[Mapping[str, int]]) -> Vocabulary:
    """Document frequencies over ``bags``; the result ignores bag order."""
    doc_freq: dict[str, int] = {}
    n_docs = 0
    for bag in bags:
        n_docs += 1
        for term, count in bag.items():
            if count > 0:
                doc_freq[term] = doc_freq.get(term, 0) + 1
    if n_docs == 0:
        raise EmptyCorpusError("cannot build a vocabulary from an empty corpus")
    return Vocabulary(doc_freq, n_docs)


def tfidf(bag: Mapping[str, int], vocab: Vocabulary) -> TermVector:
    total = sum(c for c in bag.values() if c > 0)
    if total == 0:
        return TermVector.zeros(len(vocab))
    entries = []
    n = vocab.n_docs
    for term, count in bag.items():
        hit = vocab.get(term)
        if hit is None or count <= 0:
            continue
        index, df = hit
        weight = (count / total) * math.log(n / df)
        if weight != 0.0:
            entries.append((index, weight))
    if not entries:
        return TermVector.zeros(len(vocab))
    entries.sort()
    idx = np.fromiter((i for i, _ in entries), dtype=np.int64, count=len(entries))
    w = np.fromiter((x for _, x in entries), dtype=np.float64, count=len(entries))
    w /= np.sqrt(np.dot(w, w))
    return TermVector(idx, w, len(vocab))


def transform(bags: Iterable[Mapping[str, int]], vocab: Vocabulary) -> sparse.csr_matrix:
    """Stack the TF-IDF vectors of ``bags`` into a CSR matrix (one row each)."""
    return stack([tfidf(bag, vocab) for bag in bags], len(vocab))


def stack(vectors: Sequence[TermVector], dim: int | None = None) -> sparse.csr_matrix:
    if dim is None:
        if not vectors:
            raise ValueError("dim is required for an empty batch")
        dim = vectors[0].dim
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        if v.dim != dim:
            raise ValueError(f"vector {i} has dimension {v.dim}, expected {dim}")
        indptr[i + 1] = indptr[i] + v.indices.size
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.empty(0, np.int64)
    data = np.concatenate([v.weights for v in vectors]) if vectors else np.empty(0)
    return sparse.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))
