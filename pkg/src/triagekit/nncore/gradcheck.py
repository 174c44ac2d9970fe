"""Finite-difference verification of analytic gradients.

A checkable fragment is anything with ``parameters() -> list[Parameter]``,
``loss() -> float`` (pure forward evaluation) and ``loss_and_grad() ->
float`` (forward plus backward, accumulating into the parameter grads).
"""

from __future__ import annotations

import numpy as np


def gradient_check(fragment, h: float = 1e-4) -> tuple[float, dict[str, float]]:
    """Compare analytic gradients against central differences.

    Returns the maximum relative error over every parameter component and
    a per-parameter breakdown. Relative error for analytic value a and
    numeric value n is |a - n| / max(|a|, |n|, 1e-8).
    """
    params = fragment.parameters()
    for p in params:
        p.zero_grad()
    fragment.loss_and_grad()
    analytic = {p.name: p.grad.copy() for p in params}
    for p in params:
        p.zero_grad()

    per_param: dict[str, float] = {}
    worst = 0.0
    for p in params:
        flat = p.value.reshape(-1)
        grad_flat = analytic[p.name].reshape(-1)
        param_worst = 0.0
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            loss_plus = fragment.loss()
            flat[i] = original - h
            loss_minus = fragment.loss()
            flat[i] = original

            numeric = (loss_plus - loss_minus) / (2.0 * h)
            a = grad_flat[i]
            rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            param_worst = max(param_worst, rel)
        per_param[p.name] = param_worst
        worst = max(worst, param_worst)
    return worst, per_param


def assert_gradients_close(fragment, tolerance: float = 1e-4, h: float = 1e-4) -> float:
    worst, per_param = gradient_check(fragment, h=h)
    if worst >= tolerance:
        offenders = {k: v for k, v in per_param.items() if v >= tolerance}
        raise AssertionError(f"gradient check failed: max rel err {worst:.3e}, offenders {offenders}")
    return worst


class _CallableFragment:
    """Adapter turning (params, loss_fn, loss_and_grad_fn) into a fragment."""

    def __init__(self, params, loss_fn, loss_and_grad_fn):
        self._params = params
        self._loss_fn = loss_fn
        self._loss_and_grad_fn = loss_and_grad_fn

    def parameters(self):
        return self._params

    def loss(self):
        return self._loss_fn()

    def loss_and_grad(self):
        return self._loss_and_grad_fn()


def fragment_of(params, loss_fn, loss_and_grad_fn) -> _CallableFragment:
    return _CallableFragment(params, loss_fn, loss_and_grad_fn)
