"""Text cleaning pipeline shared by every classifier.

A document runs through, in order: garbage-rule deletion (regexes aimed at
stack traces, hex addresses, HTML and similar tracker noise), lowercasing,
sentence segmentation, tokenization, stopword removal, and truncation to
the configured sentence/token caps. The title always becomes sentence 1.

Stemming is deliberately absent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import Document

PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"
PAD_ID = 0
OOV_ID = 1

# Tokens are maximal runs of Unicode letters/digits; underscore splits, so
# "i2o_scsi" becomes ["i2o", "scsi"].
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Sentence boundary: '.', '!', '?' or newline followed by whitespace or
# end-of-text. A bare newline glued to the next word does not split.
_SENTENCE_RE = re.compile(r"[.!?\n](?=\s|$)")


@dataclass(frozen=True)
class GarbageRule:
    name: str
    pattern: re.Pattern

    @classmethod
    def make(cls, name: str, pattern: str) -> "GarbageRule":
        return cls(name=name, pattern=re.compile(pattern))


def default_garbage_rules() -> list[GarbageRule]:
    """Stand-in noise filters for bug-tracker text; override per dataset."""
    return [
        GarbageRule.make("hex_address", r"0x[0-9a-fA-F]{4,}"),
        GarbageRule.make("stack_frame", r"(?m)^\s*(?:#\d+|at )\s*\S*/\S*.*$"),
        GarbageRule.make("html_tag", r"<[^>]+>"),
        GarbageRule.make("long_digit_run", r"\d{8,}"),
    ]


def load_garbage_rules(path: str | Path) -> list[GarbageRule]:
    """Load rules from a JSON list of {"name": str, "pattern": regex-string}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise ValueError(f"{path}: garbage rule file must hold a JSON list")
    rules = []
    for i, entry in enumerate(raw):
        try:
            rules.append(GarbageRule.make(str(entry["name"]), str(entry["pattern"])))
        except re.error as e:
            raise ValueError(f"{path}: rule {i} ({entry.get('name')!r}) does not compile: {e}") from e
        except (KeyError, TypeError) as e:
            raise ValueError(f"{path}: rule {i} must have 'name' and 'pattern'") from e
    return rules


def default_stopwords() -> frozenset[str]:
    """The bundled English stopword list (one token per line, versioned in-repo)."""
    text = resources.files("triagekit.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(line.strip() for line in lines if line.strip())


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    garbage_rules: tuple[GarbageRule, ...] = field(default_factory=lambda: tuple(default_garbage_rules()))
    max_sentences: int = 30
    max_tokens_per_sentence: int = 60

    def __post_init__(self):
        if self.max_sentences < 1 or self.max_tokens_per_sentence < 1:
            raise ValueError("sentence/token caps must be >= 1")


@dataclass(frozen=True)
class ProcessedDocument:
    doc_id: str
    sentences: tuple[tuple[str, ...], ...]

    def tokens(self) -> list[str]:
        """All tokens in order, sentence structure flattened."""
        return [tok for sent in self.sentences for tok in sent]


def _clean(text: str, rules: tuple[GarbageRule, ...]) -> str:
    for rule in rules:
        text = rule.pattern.sub(" ", text)
    return text.lower()


def _tokenize(sentence: str, stopwords: frozenset[str], cap: int) -> tuple[str, ...]:
    kept = [t for t in _TOKEN_RE.findall(sentence) if t not in stopwords]
    return tuple(kept[:cap])


def preprocess_document(doc: Document, config: PipelineConfig) -> ProcessedDocument:
    """Run the full pipeline; total over any input.

    A document left with zero tokens yields a single sentence holding the
    out-of-vocabulary placeholder, so downstream encoders never see an
    empty document.
    """
    sentences: list[tuple[str, ...]] = []

    title = _clean(doc.title, config.garbage_rules)
    title_tokens = _tokenize(title, config.stopwords, config.max_tokens_per_sentence)
    if title_tokens:
        sentences.append(title_tokens)

    body = _clean(doc.body, config.garbage_rules)
    for chunk in _SENTENCE_RE.split(body):
        if len(sentences) >= config.max_sentences:
            break
        tokens = _tokenize(chunk, config.stopwords, config.max_tokens_per_sentence)
        if tokens:
            sentences.append(tokens)

    if not sentences:
        sentences.append((OOV_TOKEN,))
    return ProcessedDocument(doc_id=doc.id, sentences=tuple(sentences[: config.max_sentences]))


@dataclass(frozen=True)
class Vocabulary:
    id_to_token: tuple[str, ...]
    token_to_id: dict[str, int]
    frequencies: dict[str, int]
    min_frequency: int

    def __len__(self) -> int:
        return len(self.id_to_token)

    def encode_token(self, token: str) -> int:
        return self.token_to_id.get(token, OOV_ID)

    def content_hash(self) -> str:
        """Stable fingerprint used to guard checkpoints against vocab drift."""
        import hashlib

        h = hashlib.sha256()
        for token in self.id_to_token:
            h.update(token.encode("utf-8"))
            h.update(b"\x00")
        return h.hexdigest()


def build_vocabulary(
    docs: list[ProcessedDocument], min_frequency: int = 1, max_size: int = 50_000
) -> Vocabulary:
    """Rank tokens by (frequency desc, token asc), keep the top ``max_size``.

    Ids 0 and 1 are reserved for the padding and out-of-vocabulary tokens;
    the placeholder strings themselves never count as corpus tokens.
    """
    if not docs:
        raise ValueError("cannot build a vocabulary from an empty document list")
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")

    counts: dict[str, int] = {}
    for doc in docs:
        for tok in doc.tokens():
            if tok in (PAD_TOKEN, OOV_TOKEN):
                continue
            counts[tok] = counts.get(tok, 0) + 1

    eligible = [(tok, n) for tok, n in counts.items() if n >= min_frequency]
    eligible.sort(key=lambda item: (-item[1], item[0]))
    kept = eligible[:max_size]

    id_to_token = (PAD_TOKEN, OOV_TOKEN) + tuple(tok for tok, _ in kept)
    return Vocabulary(
        id_to_token=id_to_token,
        token_to_id={tok: i for i, tok in enumerate(id_to_token)},
        frequencies={tok: n for tok, n in kept},
        min_frequency=min_frequency,
    )


def encode(doc: ProcessedDocument, vocab: Vocabulary) -> list[list[int]]:
    """Map tokens to ids, unknown tokens to the OOV id; structure preserved."""
    return [[vocab.encode_token(tok) for tok in sent] for sent in doc.sentences]
