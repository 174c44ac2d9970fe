"""Term-count and TF-IDF document representations for the classic baselines."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .preprocess import ProcessedDocument, Vocabulary

TFIDF_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse vector; zero values are never stored."""

    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray  # float64
    dim: int

    @classmethod
    def from_dict(cls, entries: dict[int, float], dim: int) -> "SparseVector":
        items = sorted((i, v) for i, v in entries.items() if v != 0.0)
        indices = np.array([i for i, _ in items], dtype=np.int64)
        values = np.array([v for _, v in items], dtype=np.float64)
        if len(indices) and (indices[0] < 0 or indices[-1] >= dim):
            raise ValueError(f"index out of range for dim {dim}")
        return cls(indices=indices, values=values, dim=dim)

    def to_dict(self) -> dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector(indices=self.indices, values=self.values * factor, dim=self.dim)

    def dot_dense(self, dense: np.ndarray) -> float:
        return float(np.dot(dense[self.indices], self.values))


def term_counts(doc: ProcessedDocument, vocab: Vocabulary) -> SparseVector:
    """Occurrence counts over the flattened document; unknowns land on OOV."""
    counts: dict[int, float] = {}
    for tok in doc.tokens():
        tid = vocab.encode_token(tok)
        counts[tid] = counts.get(tid, 0.0) + 1.0
    return SparseVector.from_dict(counts, dim=len(vocab))


@dataclass(frozen=True)
class TfidfModel:
    vocab: Vocabulary
    idf: np.ndarray  # float64, one weight per vocabulary id
    doc_count: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": TFIDF_FORMAT_VERSION,
                "doc_count": self.doc_count,
                "vocab_hash": self.vocab.content_hash(),
                "idf": [float(w) for w in self.idf],
            }
        )

    @classmethod
    def from_json(cls, text: str, vocab: Vocabulary) -> "TfidfModel":
        raw = json.loads(text)
        if raw.get("version") != TFIDF_FORMAT_VERSION:
            raise ValueError(f"unsupported tf-idf model version {raw.get('version')!r}")
        stored_hash = raw.get("vocab_hash", "")
        if stored_hash and stored_hash != vocab.content_hash():
            raise ValueError("tf-idf model was fitted against a different vocabulary")
        return cls(vocab=vocab, idf=np.asarray(raw["idf"], dtype=np.float64), doc_count=int(raw["doc_count"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path, vocab: Vocabulary) -> "TfidfModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"), vocab)


def fit_tfidf(docs: list[ProcessedDocument], vocab: Vocabulary) -> TfidfModel:
    """Fit smoothed inverse document frequencies over the corpus.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1, which stays positive and finite
    even for terms never seen during fitting.
    """
    if not docs:
        raise ValueError("cannot fit tf-idf on an empty corpus")
    n = len(docs)
    df = np.zeros(len(vocab), dtype=np.float64)
    for doc in docs:
        for tid in {vocab.encode_token(tok) for tok in doc.tokens()}:
            df[tid] += 1.0
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return TfidfModel(vocab=vocab, idf=idf, doc_count=n)


def transform_tfidf(doc: ProcessedDocument, model: TfidfModel) -> SparseVector:
    """count(t) * idf(t), L2-normalized; an all-zero vector stays all-zero."""
    counts = term_counts(doc, model.vocab)
    raw = counts.values * model.idf[counts.indices]
    norm = math.sqrt(float(np.sum(raw**2)))
    if norm > 0.0:
        raw = raw / norm
    return SparseVector(indices=counts.indices, values=raw, dim=counts.dim)
