"""Classic baselines: multinomial Naive Bayes and one-vs-rest linear SVM.

Naive Bayes consumes raw term counts; the SVM consumes L2-normalized
TF-IDF vectors and is trained with the Pegasos stochastic subgradient
schedule (step size 1/(lambda*t)) with iterate averaging.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import SparseVector
from .rng import Xorshift64Star

logger = logging.getLogger(__name__)

NB_FORMAT_VERSION = 1
SVM_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NaiveBayesModel:
    class_log_prior: np.ndarray  # [C]
    token_log_likelihood: np.ndarray  # [C, V]
    alpha: float

    @property
    def num_classes(self) -> int:
        return len(self.class_log_prior)

    def to_json(self, vocab_hash: str = "") -> str:
        return json.dumps(
            {
                "version": NB_FORMAT_VERSION,
                "vocab_hash": vocab_hash,
                "alpha": self.alpha,
                "class_log_prior": [float(x) for x in self.class_log_prior],
                "token_log_likelihood": [[float(x) for x in row] for row in self.token_log_likelihood],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> tuple["NaiveBayesModel", str]:
        raw = json.loads(text)
        if raw.get("version") != NB_FORMAT_VERSION:
            raise ValueError(f"unsupported naive-bayes model version {raw.get('version')!r}")
        model = cls(
            class_log_prior=np.asarray(raw["class_log_prior"], dtype=np.float64),
            token_log_likelihood=np.asarray(raw["token_log_likelihood"], dtype=np.float64),
            alpha=float(raw["alpha"]),
        )
        return model, str(raw.get("vocab_hash", ""))

    def save(self, path: str | Path, vocab_hash: str = "") -> None:
        Path(path).write_text(self.to_json(vocab_hash), encoding="utf-8")


def nb_fit(
    train: list[tuple[SparseVector, int]], num_classes: int, alpha: float = 1.0
) -> NaiveBayesModel:
    """Fit smoothed multinomial Naive Bayes from (counts, class-id) pairs.

    log P(t|c) = ln((count(t,c) + alpha) / (total_count(c) + alpha*V)).
    A class with zero training documents gets a -inf prior (it can never
    win the argmax) and a warning.
    """
    if not train:
        raise ValueError("empty training set")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")

    dim = train[0][0].dim
    doc_counts = np.zeros(num_classes, dtype=np.float64)
    token_counts = np.zeros((num_classes, dim), dtype=np.float64)
    for vec, cls_id in train:
        if not (0 <= cls_id < num_classes):
            raise ValueError(f"class id {cls_id} out of range for {num_classes} classes")
        doc_counts[cls_id] += 1.0
        token_counts[cls_id, vec.indices] += vec.values

    with np.errstate(divide="ignore"):
        log_prior = np.log(doc_counts / len(train))
    empty = [c for c in range(num_classes) if doc_counts[c] == 0]
    if empty:
        logger.warning("classes %s have no training documents; they will never be predicted", empty)

    totals = token_counts.sum(axis=1, keepdims=True)
    log_likelihood = np.log(token_counts + alpha) - np.log(totals + alpha * dim)
    return NaiveBayesModel(class_log_prior=log_prior, token_log_likelihood=log_likelihood, alpha=alpha)


def nb_predict(model: NaiveBayesModel, counts: SparseVector) -> tuple[int, np.ndarray]:
    """Argmax of log P(c) + sum_t count(t) * log P(t|c); ties to the smaller id."""
    scores = model.class_log_prior + model.token_log_likelihood[:, counts.indices] @ counts.values
    return int(np.argmax(scores)), scores


@dataclass
class LinearSvmModel:
    weights: np.ndarray  # [C, V]
    bias: np.ndarray  # [C]
    lam: float
    epochs: int
    objective_history: list[list[float]] = field(default_factory=list)

    @property
    def num_classes(self) -> int:
        return len(self.bias)

    def to_json(self, vocab_hash: str = "") -> str:
        return json.dumps(
            {
                "version": SVM_FORMAT_VERSION,
                "vocab_hash": vocab_hash,
                "lambda": self.lam,
                "epochs": self.epochs,
                "weights": [[float(x) for x in row] for row in self.weights],
                "bias": [float(x) for x in self.bias],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> tuple["LinearSvmModel", str]:
        raw = json.loads(text)
        if raw.get("version") != SVM_FORMAT_VERSION:
            raise ValueError(f"unsupported svm model version {raw.get('version')!r}")
        model = cls(
            weights=np.asarray(raw["weights"], dtype=np.float64),
            bias=np.asarray(raw["bias"], dtype=np.float64),
            lam=float(raw["lambda"]),
            epochs=int(raw["epochs"]),
        )
        return model, str(raw.get("vocab_hash", ""))

    def save(self, path: str | Path, vocab_hash: str = "") -> None:
        Path(path).write_text(self.to_json(vocab_hash), encoding="utf-8")


def svm_objective(
    weights: np.ndarray, bias: float, data: list[tuple[SparseVector, float]], lam: float
) -> float:
    """lam/2 ||w||^2 + mean hinge loss for one binary problem."""
    reg = 0.5 * lam * float(np.dot(weights, weights))
    hinge = 0.0
    for vec, y in data:
        margin = y * (vec.dot_dense(weights) + bias)
        hinge += max(0.0, 1.0 - margin)
    return reg + hinge / len(data)


def svm_fit(
    train: list[tuple[SparseVector, int]],
    num_classes: int,
    lam: float = 1e-4,
    epochs: int = 20,
    seed: int = 0,
) -> LinearSvmModel:
    """One-vs-rest Pegasos with the 1/(lam*t) step schedule.

    Weights use the scale-factor representation so the per-step decay is
    O(1); the returned model holds the average of all iterates, which is
    what the convergence guarantee covers. Deterministic for a fixed seed.
    """
    if not train:
        raise ValueError("empty training set")
    if lam <= 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    for vec, _ in train:
        if not np.all(np.isfinite(vec.values)):
            raise ValueError("non-finite feature values in training data")

    dim = train[0][0].dim
    n = len(train)
    weights = np.zeros((num_classes, dim), dtype=np.float64)
    bias = np.zeros(num_classes, dtype=np.float64)
    history: list[list[float]] = []

    for cls_id in range(num_classes):
        rng = Xorshift64Star(seed * 1_000_003 + cls_id)
        labels = np.array([1.0 if y == cls_id else -1.0 for _, y in train])

        v = np.zeros(dim, dtype=np.float64)  # w = scale * v
        scale = 1.0
        b = 0.0
        w_avg = np.zeros(dim, dtype=np.float64)
        b_avg = 0.0
        t = 0
        cls_history = []

        for _ in range(epochs):
            for _ in range(n):
                t += 1
                i = rng.below(n)
                vec, y = train[i][0], labels[i]
                eta = 1.0 / (lam * t)

                margin = y * (scale * vec.dot_dense(v) + b)
                scale *= 1.0 - eta * lam
                if scale < 1e-9:
                    # Re-absorb the scale before it underflows.
                    v *= scale
                    scale = 1.0
                if margin < 1.0:
                    v[vec.indices] += (eta * y / scale) * vec.values
                    b += eta * y
                w_avg += (scale * v - w_avg) / t
                b_avg += (b - b_avg) / t
            cls_history.append(svm_objective(w_avg, b_avg, [(vec, labels[j]) for j, (vec, _) in enumerate(train)], lam))

        weights[cls_id] = w_avg
        bias[cls_id] = b_avg
        history.append(cls_history)

    return LinearSvmModel(weights=weights, bias=bias, lam=lam, epochs=epochs, objective_history=history)


def svm_predict(model: LinearSvmModel, x: SparseVector) -> tuple[int, np.ndarray]:
    """Argmax over per-class decision scores w_c . x + b_c; ties to smaller id."""
    if x.dim != model.weights.shape[1]:
        raise ValueError(f"feature dim {x.dim} does not match model dim {model.weights.shape[1]}")
    scores = model.weights[:, x.indices] @ x.values + model.bias
    return int(np.argmax(scores)), scores
