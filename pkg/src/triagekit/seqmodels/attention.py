"""Dot-product attention pooling over encoder outputs.

The learned context vector u scores each unmasked step by a plain dot
product; the softmax of those scores weights the step outputs into one
summary vector. An optional tanh projection ahead of the scoring dot
product is available but off by default.
"""

from __future__ import annotations

import numpy as np

from ..nncore.tensor import Parameter, glorot_uniform, uniform_array
from ..rng import Xorshift64Star


class AttentionPool:
    """Pools [T, B, k] encoder outputs into [B, k] summaries."""

    def __init__(
        self,
        dim: int,
        rng: Xorshift64Star,
        name: str,
        projection: bool = False,
    ):
        self.dim = dim
        self.name = name
        self.projection = projection
        bound = np.sqrt(3.0 / dim)
        self.u = Parameter(uniform_array(rng, (dim,), -bound, bound), f"{name}.u")
        if projection:
            self.W_p = glorot_uniform(rng, (dim, dim), dim, dim, f"{name}.W_p")
            self.b_p = Parameter(np.zeros(dim), f"{name}.b_p")

    def parameters(self) -> list[Parameter]:
        if self.projection:
            return [self.u, self.W_p, self.b_p]
        return [self.u]

    def forward(
        self, outputs: np.ndarray, mask: np.ndarray, allow_empty_rows: bool = False
    ) -> tuple[np.ndarray, np.ndarray, tuple]:
        """Returns (pooled [B, k], weights [T, B], cache).

        Masked steps get weight exactly 0. A fully masked batch row is an
        error unless ``allow_empty_rows`` is set, in which case it pools to
        the zero vector (used for structurally padded sentences).
        """
        steps, batch, dim = outputs.shape
        if mask.shape != (steps, batch):
            raise ValueError(f"mask shape {mask.shape} does not match outputs {outputs.shape[:2]}")
        live = mask.sum(axis=0)
        if not allow_empty_rows and np.any(live == 0):
            raise ValueError("attention pool saw a fully masked row")

        if self.projection:
            keys = np.tanh(outputs @ self.W_p.value + self.b_p.value)
        else:
            keys = outputs
        scores = keys @ self.u.value  # [T, B]

        shifted = np.where(mask > 0, scores, -np.inf)
        peak = np.where(live > 0, shifted.max(axis=0), 0.0)
        exp = np.where(mask > 0, np.exp(np.where(mask > 0, shifted - peak, 0.0)), 0.0)
        total = exp.sum(axis=0)
        weights = exp / np.where(total > 0, total, 1.0)  # empty rows stay all-zero

        pooled = np.einsum("tb,tbk->bk", weights, outputs)
        cache = (outputs, keys, mask, weights)
        return pooled, weights, cache

    def backward(self, dpooled: np.ndarray, cache: tuple) -> np.ndarray:
        """Accumulate grads for u (and the projection); return doutputs [T, B, k]."""
        outputs, keys, mask, weights = cache

        dweights = np.einsum("bk,tbk->tb", dpooled, outputs)
        doutputs = weights[:, :, None] * dpooled[None, :, :]

        # Softmax backward per batch column; masked/empty rows have weight 0.
        inner = (weights * dweights).sum(axis=0)
        dscores = weights * (dweights - inner)

        if self.projection:
            dkeys = dscores[:, :, None] * self.u.value[None, None, :]
            self.u.grad += np.einsum("tb,tbk->k", dscores, keys)
            dpre = dkeys * (1.0 - keys**2)
            steps, batch, dim = outputs.shape
            flat_out = outputs.reshape(steps * batch, dim)
            flat_pre = dpre.reshape(steps * batch, dim)
            self.W_p.grad += flat_out.T @ flat_pre
            self.b_p.grad += flat_pre.sum(axis=0)
            doutputs += (flat_pre @ self.W_p.value.T).reshape(steps, batch, dim)
        else:
            self.u.grad += np.einsum("tb,tbk->k", dscores, outputs)
            doutputs += dscores[:, :, None] * self.u.value[None, None, :]
        return doutputs


def attention_pool(
    outputs: np.ndarray, mask: np.ndarray, pool: AttentionPool
) -> tuple[np.ndarray, np.ndarray]:
    """Forward-only convenience returning (pooled, weights)."""
    pooled, weights, _ = pool.forward(outputs, mask)
    return pooled, weights
