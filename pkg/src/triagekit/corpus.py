"""Dataset loading, label bookkeeping and seeded train/test splitting.

Datasets are UTF-8 JSON-lines files, one record per line with keys
``id``, ``title``, ``content`` and ``labels`` (a string-to-string object).
Records may omit individual label fields; such documents are simply
excluded from splits on that field.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .rng import Xorshift64Star

logger = logging.getLogger(__name__)


class DatasetError(ValueError):
    """Raised for malformed dataset files or invalid split requests."""


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    body: str
    labels: dict[str, str]


@dataclass(frozen=True)
class ClassSet:
    """Ordered class names for one label field, with 0-based integer ids."""

    names: tuple[str, ...]
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise DatasetError(f"duplicate class names: {self.names}")
        object.__setattr__(self, "index", {name: i for i, name in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class Dataset:
    documents: tuple[Document, ...]
    fields: dict[str, ClassSet]

    def __len__(self) -> int:
        return len(self.documents)

    def by_id(self, doc_id: str) -> Document:
        return self._id_map[doc_id]

    @property
    def _id_map(self) -> dict[str, Document]:
        cached = getattr(self, "_id_map_cache", None)
        if cached is None:
            cached = {d.id: d for d in self.documents}
            object.__setattr__(self, "_id_map_cache", cached)
        return cached

    def labeled_for(self, field_name: str) -> list[Document]:
        """Documents carrying a label for the given field, in load order."""
        return [d for d in self.documents if field_name in d.labels]


@dataclass(frozen=True)
class Split:
    train: tuple[str, ...]
    test: tuple[str, ...]
    seed: int
    test_fraction: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "test_fraction": self.test_fraction,
                "train": list(self.train),
                "test": list(self.test),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Split":
        raw = json.loads(text)
        return cls(
            train=tuple(raw["train"]),
            test=tuple(raw["test"]),
            seed=int(raw["seed"]),
            test_fraction=float(raw["test_fraction"]),
        )


def load_dataset(path: str | Path, schema: list[str] | None = None) -> Dataset:
    """Load a JSON-lines dataset, building class sets from observed labels.

    ``schema`` optionally restricts which label fields are kept; by default
    every field observed in the file gets a ClassSet. Class names are sorted
    lexicographically. Label values are stripped of surrounding whitespace
    but otherwise kept verbatim (case-sensitive).
    """
    p = Path(path)
    if not p.exists():
        raise DatasetError(f"dataset file not found: {p}")

    documents: list[Document] = []
    seen_ids: set[str] = set()
    observed: dict[str, set[str]] = {}

    with p.open("r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"{p}:{line_no}: malformed JSON ({e.msg})") from e
            if not isinstance(raw, dict):
                raise DatasetError(f"{p}:{line_no}: record is not a JSON object")
            missing = {"id", "title", "content", "labels"} - raw.keys()
            if missing:
                raise DatasetError(f"{p}:{line_no}: missing keys: {sorted(missing)}")

            doc_id = str(raw["id"])
            if not doc_id:
                raise DatasetError(f"{p}:{line_no}: empty document id")
            if doc_id in seen_ids:
                raise DatasetError(f"{p}:{line_no}: duplicate document id {doc_id!r}")
            seen_ids.add(doc_id)

            raw_labels = raw["labels"]
            if not isinstance(raw_labels, dict):
                raise DatasetError(f"{p}:{line_no}: labels must be an object")
            labels = {}
            for name, value in raw_labels.items():
                if schema is not None and name not in schema:
                    continue
                value = str(value).strip()
                labels[name] = value
                observed.setdefault(name, set()).add(value)

            documents.append(
                Document(id=doc_id, title=str(raw["title"]), body=str(raw["content"]), labels=labels)
            )

    if not documents:
        raise DatasetError(f"{p}: empty dataset file")

    if schema is not None:
        absent = [name for name in schema if name not in observed]
        if absent:
            raise DatasetError(f"{p}: no document carries label field(s) {absent}")

    fields = {name: ClassSet(names=tuple(sorted(values))) for name, values in observed.items()}
    return Dataset(documents=tuple(documents), fields=fields)


def _round_half_up(x: float) -> int:
    # Pinned rounding rule so split sizes are identical across platforms.
    return int(x + 0.5)


def make_split(dataset: Dataset, field_name: str, test_fraction: float, seed: int) -> Split:
    """Seeded random split of the documents labeled for ``field_name``.

    Documents missing the field label are excluded before shuffling. The
    shuffle is Fisher-Yates over the xorshift64* stream, so the same inputs
    give the same split everywhere. No stratification is applied; class
    distributions of both halves are logged for diagnosis.
    """
    if field_name not in dataset.fields:
        raise DatasetError(f"unknown label field {field_name!r}")
    if not (0.0 < test_fraction < 1.0):
        raise DatasetError(f"test_fraction must lie in (0, 1), got {test_fraction}")

    labeled = dataset.labeled_for(field_name)
    if len(labeled) < 2:
        raise DatasetError(f"need at least 2 documents labeled for {field_name!r}, have {len(labeled)}")

    ids = [d.id for d in labeled]
    rng = Xorshift64Star(seed)
    rng.shuffle(ids)

    n_test = _round_half_up(test_fraction * len(ids))
    if n_test < 1:
        raise DatasetError(f"test fraction {test_fraction} yields an empty test set over {len(ids)} documents")
    if n_test >= len(ids):
        raise DatasetError(f"test fraction {test_fraction} leaves an empty train set over {len(ids)} documents")

    split = Split(
        train=tuple(ids[n_test:]),
        test=tuple(ids[:n_test]),
        seed=seed,
        test_fraction=test_fraction,
    )

    for part_name, part_ids in (("train", split.train), ("test", split.test)):
        counts = Counter(dataset.by_id(i).labels[field_name] for i in part_ids)
        logger.info(
            "split %s/%s: %d documents, class distribution %s",
            field_name,
            part_name,
            len(part_ids),
            dict(sorted(counts.items())),
        )
    return split
