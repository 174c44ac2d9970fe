"""Dense tensors and trainable parameters.

Tensors are plain numpy float64 arrays in row-major order; ``tensor`` is
the canonical constructor. A Parameter pairs a value with a same-shaped
gradient buffer that layers accumulate into.
"""

from __future__ import annotations

import numpy as np

from ..rng import Xorshift64Star


def tensor(data, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Build a float64 array; with ``shape`` given, zeros of that shape."""
    if shape is not None:
        return np.zeros(shape, dtype=np.float64)
    return np.asarray(data, dtype=np.float64)


class Parameter:
    """A named trainable value with its gradient accumulator."""

    def __init__(self, value: np.ndarray, name: str):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.shape})"


def uniform_array(rng: Xorshift64Star, shape: tuple[int, ...], low: float, high: float) -> np.ndarray:
    """Array of seeded uniforms in [low, high), drawn in row-major order."""
    size = int(np.prod(shape)) if shape else 1
    flat = np.fromiter((rng.uniform() for _ in range(size)), dtype=np.float64, count=size)
    return (low + (high - low) * flat).reshape(shape)


def glorot_uniform(rng: Xorshift64Star, shape: tuple[int, ...], fan_in: int, fan_out: int, name: str) -> Parameter:
    """Parameter initialized uniformly in +-sqrt(6/(fan_in+fan_out))."""
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return Parameter(uniform_array(rng, shape, -bound, bound), name=name)
