"""One-vs-rest linear SVM trained by dual coordinate descent.

Each binary subproblem minimises the L2-regularised hinge loss::

    0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))

with the intercept folded in as an extra constant feature (so it is
regularised too).  The dual is solved one coordinate at a time with exact
line minimisation over a seeded random permutation per pass; training stops
once the spread of the projected gradient falls below ``tol``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numba
import numpy as np
from scipy import sparse

from .vectorize import TermVector, stack

__all__ = [
    "DegenerateTrainingError",
    "BinarySolution",
    "LinearModel",
    "solve_binary",
    "train",
    "decision_values",
    "predict",
]


log = logging.getLogger(__name__)


class DegenerateTrainingError(ValueError):
    """Training data cannot define a classifier (e.g. a single class)."""


@numba.njit(cache=True)
def _dcd_hinge(indptr, indices, data, y, dim, C, bias, tol, max_iter, seed):
    n = y.size
    w = np.zeros(dim + 1)
    alpha = np.zeros(n)
    qdiag = np.empty(n)
    for i in range(n):
        acc = bias * bias
        for k in range(indptr[i], indptr[i + 1]):
            acc += data[k] * data[k]
        qdiag[i] = acc
    order = np.arange(n)
    dual = np.empty(max_iter)
    np.random.seed(seed)
    passes = 0
    converged = False
    for it in range(max_iter):
        np.random.shuffle(order)
        pg_max = -np.inf
        pg_min = np.inf
        for s in range(n):
            i = order[s]
            if qdiag[i] <= 0.0:
                continue
            g = w[dim] * bias
            for k in range(indptr[i], indptr[i + 1]):
                g += w[indices[k]] * data[k]
            grad = y[i] * g - 1.0
            if alpha[i] <= 0.0:
                pg = min(grad, 0.0)
            elif alpha[i] >= C:
                pg = max(grad, 0.0)
            else:
                pg = grad
            pg_max = max(pg_max, pg)
            pg_min = min(pg_min, pg)
            if abs(pg) > 1e-12:
                old = alpha[i]
                new = min(max(old - grad / qdiag[i], 0.0), C)
                alpha[i] = new
                step = (new - old) * y[i]
                for k in range(indptr[i], indptr[i + 1]):
                    w[indices[k]] += step * data[k]
                w[dim] += step * bias
        obj = 0.5 * np.dot(w, w) - alpha.sum()
        dual[it] = obj
        passes = it + 1
        if pg_max - pg_min < tol:
            converged = True
            break
    return w, alpha, dual[:passes], converged


@dataclass(frozen=True)
class BinarySolution:
    weights: np.ndarray
    intercept: float
    alpha: np.ndarray
    dual_objective: np.ndarray  # one value per pass
    converged: bool


def _as_matrix(vectors) -> sparse.csr_matrix:
    if sparse.issparse(vectors):
        return sparse.csr_matrix(vectors, dtype=np.float64)
    vectors = list(vectors)
    if vectors and isinstance(vectors[0], TermVector):
        return stack(vectors)
    return sparse.csr_matrix(np.asarray(vectors, dtype=np.float64))


def solve_binary(
    X: sparse.csr_matrix,
    y: np.ndarray,
    C: float = 1.0,
    *,
    tol: float = 1e-4,
    max_iter: int = 10000,
    seed: int = 0,
    bias: float = 1.0,
) -> BinarySolution:
    """Solve one +1/-1 hinge-loss problem."""
    X = sparse.csr_matrix(X, dtype=np.float64)
    X.sort_indices()
    y = np.asarray(y, dtype=np.float64)
    w, alpha, dual, converged = _dcd_hinge(
        X.indptr.astype(np.int64),
        X.indices.astype(np.int64),
        X.data,
        y,
        X.shape[1],
        float(C),
        float(bias),
        float(tol),
        int(max_iter),
        int(seed) % (2**32),
    )
    return BinarySolution(w[:-1].copy(), float(w[-1] * bias), alpha, dual, bool(converged))


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Per-class weight rows and intercepts; ``classes`` fixes the row order."""

    classes: tuple
    weights: np.ndarray  # shape (n_classes, dim)
    intercepts: np.ndarray  # shape (n_classes,)
    C: float = 1.0
    converged: tuple = field(default=())

    def __post_init__(self):
        W = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.intercepts, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != len(self.classes) or b.shape != (len(self.classes),):
            raise ValueError("need one weight row and one intercept per class")
        if self.C <= 0:
            raise ValueError("C must be positive")
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "intercepts", b)

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def decision_function(self, X) -> np.ndarray:
        """Decision values for a batch, shape ``(n_docs, n_classes)``."""
        X = _as_matrix(X)
        if X.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: model has {self.dim}, input has {X.shape[1]}")
        return np.asarray(X @ self.weights.T) + self.intercepts

    def predict(self, X) -> list:
        scores = self.decision_function(X)
        return [self.classes[i] for i in np.argmax(scores, axis=1)]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinearModel)
            and self.classes == other.classes
            and self.C == other.C
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.intercepts, other.intercepts)
        )


def train(
    vectors,
    labels: Sequence[Hashable],
    C: float = 1.0,
    *,
    seed: int = 0,
    tol: float = 1e-4,
    max_iter: int = 10000,
) -> LinearModel:
    """Fit one binary hinge-loss SVM per class (one-vs-rest).

    ``vectors`` may be a CSR matrix, a list of :class:`TermVector` or a dense
    array-like.  Classes are ordered by sorting the distinct labels.
    """
    X = _as_matrix(vectors)
    labels = list(labels)
    if X.shape[0] != len(labels):
        raise ValueError(f"{X.shape[0]} vectors but {len(labels)} labels")
    if len(labels) < 2:
        raise DegenerateTrainingError("need at least two training examples")
    if not np.all(np.isfinite(X.data)):
        raise ValueError("training vectors contain non-finite values")
    if not (C > 0 and np.isfinite(C)):
        raise ValueError("C must be a positive finite number")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise DegenerateTrainingError(f"training set has a single class: {classes[0]!r}")
    W = np.zeros((len(classes), X.shape[1]))
    b = np.zeros(len(classes))
    converged = []
    labels_arr = np.array(labels, dtype=object)
    for c, klass in enumerate(classes):
        y = np.where(labels_arr == klass, 1.0, -1.0)
        sol = solve_binary(X, y, C, tol=tol, max_iter=max_iter, seed=seed)
        if not sol.converged:
            log.warning("class %r: no convergence to tol=%g within %d passes", klass, tol, max_iter)
        W[c] = sol.weights
        b[c] = sol.intercept
        converged.append(sol.converged)
    return LinearModel(classes, W, b, float(C), tuple(converged))


def decision_values(model: LinearModel, x: TermVector) -> np.ndarray:
    """``w_c . x + b_c`` for every class, in ``model.classes`` order."""
    if isinstance(x, TermVector):
        if x.dim != model.dim:
            raise ValueError(f"dimension mismatch: model has {model.dim}, vector has {x.dim}")
        return model.weights[:, x.indices] @ x.weights + model.intercepts
    return model.decision_function(np.atleast_2d(np.asarray(x, dtype=np.float64)))[0]


def predict(model: LinearModel, x: TermVector):
    """Label with the largest decision value; ties go to the earlier class."""
    return model.classes[int(np.argmax(decision_values(model, x)))]
