"""Affine, softmax, cross-entropy and inverted dropout with explicit backward passes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import Xorshift64Star
from .tensor import Parameter


def affine_forward(x: np.ndarray, w: Parameter, b: Parameter) -> tuple[np.ndarray, tuple]:
    """y = x @ W + b for x of shape [B, n], W [n, m], b [m]."""
    if x.ndim != 2 or x.shape[1] != w.value.shape[0]:
        raise ValueError(f"affine shape mismatch: x {x.shape} vs W {w.value.shape}")
    if b.value.shape != (w.value.shape[1],):
        raise ValueError(f"affine shape mismatch: W {w.value.shape} vs b {b.value.shape}")
    y = x @ w.value + b.value
    return y, (x, w, b)


def affine_backward(upstream: np.ndarray, cache: tuple) -> np.ndarray:
    """Accumulate W.grad and b.grad; return the gradient w.r.t. the input."""
    x, w, b = cache
    w.grad += x.T @ upstream
    b.grad += upstream.sum(axis=0)
    return upstream @ w.value.T


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction for overflow safety."""
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def cross_entropy(probs: np.ndarray, true_classes) -> tuple[float, np.ndarray]:
    """Mean negative log-likelihood and its gradient w.r.t. pre-softmax logits.

    The logit gradient of softmax followed by this loss collapses to
    (probs - onehot) / B, which is what the second return value holds.
    Probabilities are clamped to >= 1e-12 before the log.
    """
    batch, num_classes = probs.shape
    labels = np.asarray(true_classes, dtype=np.int64)
    if labels.shape != (batch,):
        raise ValueError(f"expected {batch} labels, got shape {labels.shape}")
    if labels.min() < 0 or labels.max() >= num_classes:
        raise ValueError(f"class id out of range for {num_classes} classes: {labels}")

    clamped = np.maximum(probs, 1e-12)
    loss = float(-np.log(clamped[np.arange(batch), labels]).mean())

    dlogits = probs.copy()
    dlogits[np.arange(batch), labels] -= 1.0
    dlogits /= batch
    return loss, dlogits


@dataclass
class DropoutSpec:
    p: float = 0.5
    mode: str = "train"  # train | eval
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p < 1.0):
            raise ValueError(f"dropout probability must lie in [0, 1), got {self.p}")
        if self.mode not in ("train", "eval"):
            raise ValueError(f"dropout mode must be 'train' or 'eval', got {self.mode!r}")


def dropout_forward(
    x: np.ndarray, p: float, mode: str, rng: Xorshift64Star | None
) -> tuple[np.ndarray, np.ndarray | None]:
    """Inverted dropout: survivors are scaled by 1/(1-p) at train time.

    Returns the output and the scaled mask (None in eval mode or at p=0),
    which doubles as the backward multiplier.
    """
    if p >= 1.0:
        raise ValueError("dropout probability 1 would zero every unit")
    if mode == "eval" or p == 0.0:
        return x, None
    if rng is None:
        raise ValueError("train-mode dropout needs a PRNG stream")
    size = x.size
    draws = np.fromiter((rng.uniform() for _ in range(size)), dtype=np.float64, count=size)
    mask = (draws >= p).astype(np.float64).reshape(x.shape) / (1.0 - p)
    return x * mask, mask


def dropout_backward(upstream: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    return upstream if mask is None else upstream * mask


def dropout(x: np.ndarray, spec: DropoutSpec) -> np.ndarray:
    """One-shot functional form; the mask comes from the spec's own seed."""
    rng = Xorshift64Star(spec.seed) if spec.mode == "train" else None
    out, _ = dropout_forward(x, spec.p, spec.mode, rng)
    return out
