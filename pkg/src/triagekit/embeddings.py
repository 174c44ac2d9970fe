"""Skip-gram word embeddings trained with negative sampling.

Center vectors are the published embeddings; context vectors are training
scaffolding and are discarded. Row 0 (padding) is pinned to zero and never
updated. Negatives are drawn from the unigram distribution raised to 0.75.
"""

from __future__ import annotations

import hashlib
import logging
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .preprocess import OOV_ID, PAD_ID, Vocabulary
from .rng import Xorshift64Star

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkipGramConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    seed: int = 0

    def __post_init__(self):
        if min(self.dim, self.window, self.negatives, self.epochs) < 1 or self.learning_rate <= 0:
            raise ValueError(f"invalid skip-gram config: {self}")


def _tokens_hash(tokens: tuple[str, ...]) -> str:
    h = hashlib.sha256()
    for token in tokens:
        h.update(token.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


class EmbeddingTable:
    """V x d embedding matrix aligned with a vocabulary's token ids."""

    def __init__(self, matrix: np.ndarray, tokens: tuple[str, ...], loss_history: tuple[float, ...] = ()):
        if matrix.shape[0] != len(tokens):
            raise ValueError(f"matrix has {matrix.shape[0]} rows for {len(tokens)} tokens")
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.tokens = tokens
        self.loss_history = loss_history

    @property
    def vocab_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def content_hash(self) -> str:
        return _tokens_hash(self.tokens)


def lookup(table: EmbeddingTable, ids: list[int]) -> np.ndarray:
    """Row gather, [T, d]; padding rows come back as zeros."""
    idx = np.asarray(ids, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= table.vocab_size):
        raise ValueError(f"token id out of range for vocabulary of {table.vocab_size}")
    return table.matrix[idx]


class NegativeSampler:
    """Seedable draws from unigram^0.75 over a fixed count vector."""

    def __init__(self, counts: np.ndarray):
        weights = np.asarray(counts, dtype=np.float64) ** 0.75
        total = weights.sum()
        if total <= 0:
            raise ValueError("negative sampler needs at least one positive count")
        self.probabilities = weights / total
        self._cumulative = np.cumsum(self.probabilities).tolist()
        self._cumulative[-1] = 1.0

    def draw(self, rng: Xorshift64Star) -> int:
        return bisect_right(self._cumulative, rng.uniform())


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -40.0, 40.0)))


def train_skipgram(
    docs: list[list[list[int]]], vocab: Vocabulary, config: SkipGramConfig
) -> EmbeddingTable:
    """Train embeddings over encoded documents (context windows stay within a sentence).

    For every (center, context) pair the negative-sampling objective
    log sigma(v_c . u_o) + sum_k log sigma(-v_c . u_neg) is ascended by SGD
    with a linearly decaying learning rate. Padding and the OOV placeholder
    never serve as centers. Deterministic for a fixed seed.
    """
    if not docs or not any(sent for doc in docs for sent in doc):
        raise ValueError("empty corpus")
    vocab_size = len(vocab)
    if vocab_size < config.negatives + 2:
        raise ValueError(f"vocabulary of {vocab_size} is too small for {config.negatives} negatives")

    counts = np.zeros(vocab_size, dtype=np.float64)
    total_centers = 0
    for doc in docs:
        for sent in doc:
            for tid in sent:
                counts[tid] += 1.0
                if tid not in (PAD_ID, OOV_ID):
                    total_centers += 1
    counts[PAD_ID] = 0.0
    if total_centers == 0:
        raise ValueError("corpus holds no trainable tokens")

    sampler = NegativeSampler(counts)
    rng = Xorshift64Star(config.seed)

    dim = config.dim
    bound = 0.5 / dim
    size = vocab_size * dim
    flat = np.fromiter((rng.uniform() for _ in range(size)), dtype=np.float64, count=size)
    center_vecs = ((flat * 2.0 - 1.0) * bound).reshape(vocab_size, dim)
    center_vecs[PAD_ID] = 0.0
    context_vecs = np.zeros((vocab_size, dim), dtype=np.float64)

    total_steps = config.epochs * total_centers
    done = 0
    history = []

    for epoch in range(config.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for doc in docs:
            for sent in doc:
                length = len(sent)
                for pos, center in enumerate(sent):
                    if center in (PAD_ID, OOV_ID):
                        continue
                    lr = config.learning_rate * max(1e-4, 1.0 - done / total_steps)
                    done += 1
                    lo = max(0, pos - config.window)
                    hi = min(length, pos + config.window + 1)
                    for ctx_pos in range(lo, hi):
                        if ctx_pos == pos:
                            continue
                        context = sent[ctx_pos]
                        if context == PAD_ID:
                            continue

                        targets = [context]
                        for _ in range(config.negatives):
                            neg = sampler.draw(rng)
                            for _ in range(8):
                                if neg != context:
                                    break
                                neg = sampler.draw(rng)
                            targets.append(neg)

                        v = center_vecs[center]
                        u = context_vecs[targets]  # [k+1, d]
                        scores = _sigmoid(u @ v)
                        labels = np.zeros(len(targets))
                        labels[0] = 1.0

                        epoch_loss += -np.log(max(scores[0], 1e-12)) - np.log(
                            np.maximum(1.0 - scores[1:], 1e-12)
                        ).sum()
                        epoch_pairs += 1

                        coeffs = lr * (labels - scores)  # [k+1]
                        dv = coeffs @ u
                        context_vecs[targets] += np.outer(coeffs, v)
                        center_vecs[center] += dv

        history.append(epoch_loss / max(epoch_pairs, 1))
        logger.info("skip-gram epoch %d/%d: mean pair loss %.4f", epoch + 1, config.epochs, history[-1])

    return EmbeddingTable(
        matrix=center_vecs, tokens=vocab.id_to_token, loss_history=tuple(history)
    )


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write word2vec text format: header "V d", then one token row per line."""
    with Path(path).open("w", encoding="utf-8") as f:
        f.write(f"{table.vocab_size} {table.dim}\n")
        for token, row in zip(table.tokens, table.matrix):
            f.write(token + " " + " ".join(f"{v:.8f}" for v in row) + "\n")


def load_embeddings(path: str | Path) -> EmbeddingTable:
    p = Path(path)
    with p.open("r", encoding="utf-8") as f:
        header = f.readline().strip().split()
        if len(header) != 2:
            raise ValueError(f"{p}:1: header must be 'V d'")
        try:
            vocab_size, dim = int(header[0]), int(header[1])
        except ValueError as e:
            raise ValueError(f"{p}:1: header must hold two integers") from e

        tokens = []
        rows = np.zeros((vocab_size, dim), dtype=np.float64)
        line_no = 1
        for i in range(vocab_size):
            line = f.readline()
            line_no += 1
            if not line:
                raise ValueError(f"{p}:{line_no}: expected {vocab_size} rows, file ended after {i}")
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ValueError(f"{p}:{line_no}: expected token + {dim} values, got {len(parts)} fields")
            tokens.append(parts[0])
            try:
                rows[i] = [float(x) for x in parts[1:]]
            except ValueError as e:
                raise ValueError(f"{p}:{line_no}: non-numeric component") from e
        if f.readline():
            raise ValueError(f"{p}: trailing content after {vocab_size} rows")

    return EmbeddingTable(matrix=rows, tokens=tuple(tokens))
