"""Minimal double-precision neural kernel with hand-derived backward passes.

There is no autodiff graph: every layer exposes an explicit forward and
backward, and everything is expected to pass the finite-difference checker
in :mod:`triagekit.nncore.gradcheck`.
"""

from .tensor import Parameter, glorot_uniform, tensor, uniform_array
from .layers import (
    DropoutSpec,
    affine_backward,
    affine_forward,
    cross_entropy,
    dropout,
    dropout_backward,
    dropout_forward,
    log_softmax,
    softmax,
)
from .optim import RmsPropState, rmsprop_step
from .gradcheck import gradient_check
from .checkpoint import load_parameters, save_parameters

__all__ = [
    "Parameter",
    "tensor",
    "glorot_uniform",
    "uniform_array",
    "DropoutSpec",
    "affine_forward",
    "affine_backward",
    "softmax",
    "log_softmax",
    "cross_entropy",
    "dropout",
    "dropout_forward",
    "dropout_backward",
    "RmsPropState",
    "rmsprop_step",
    "gradient_check",
    "save_parameters",
    "load_parameters",
]
