"""RMSprop with a per-parameter running cache of squared gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import Parameter


@dataclass
class RmsPropState:
    learning_rate: float = 0.001
    rho: float = 0.9
    epsilon: float = 1e-8
    cache: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")
        if not (0.0 < self.rho < 1.0):
            raise ValueError(f"decay rho must lie in (0, 1), got {self.rho}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")


def rmsprop_step(params: list[Parameter], state: RmsPropState) -> None:
    """cache <- rho*cache + (1-rho)*g^2; value <- value - lr*g/(sqrt(cache)+eps).

    Parameter names key the cache, so they must be unique within a model.
    Gradients are zeroed after the update.
    """
    seen = set()
    for p in params:
        if p.name in seen:
            raise ValueError(f"duplicate parameter name {p.name!r}")
        seen.add(p.name)
        if not np.all(np.isfinite(p.grad)):
            raise ValueError(f"non-finite gradient in parameter {p.name!r}")

        cache = state.cache.get(p.name)
        if cache is None:
            cache = np.zeros_like(p.value)
            state.cache[p.name] = cache
        cache *= state.rho
        cache += (1.0 - state.rho) * p.grad**2
        p.value -= state.learning_rate * p.grad / (np.sqrt(cache) + state.epsilon)
        p.zero_grad()
