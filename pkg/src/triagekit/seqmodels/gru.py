"""GRU cell and masked sequence encoders with backpropagation through time.

The update convention is pinned project-wide:

    z = sigmoid(x W_z + h U_z + b_z)
    r = sigmoid(x W_r + h U_r + b_r)
    h~ = tanh(x W_h + (r o h) U_h + b_h)
    h_t = (1 - z) o h_prev + z o h~

so zero weights give h_t = 0.5 * h_prev. Padded time steps freeze the
state: the previous hidden value is copied forward unchanged.
"""

from __future__ import annotations

import numpy as np

from ..nncore.tensor import Parameter, glorot_uniform
from ..rng import Xorshift64Star


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class GruCell:
    """Gate parameters for one GRU; input dim n, hidden dim k."""

    def __init__(self, input_dim: int, hidden_dim: int, rng: Xorshift64Star, name: str):
        self.input_dim = input_dim
        self.hidden_dim = hidden_dim
        self.name = name

        def w(gate: str) -> Parameter:
            return glorot_uniform(rng, (input_dim, hidden_dim), input_dim, hidden_dim, f"{name}.W_{gate}")

        def u(gate: str) -> Parameter:
            return glorot_uniform(rng, (hidden_dim, hidden_dim), hidden_dim, hidden_dim, f"{name}.U_{gate}")

        def b(gate: str) -> Parameter:
            return Parameter(np.zeros(hidden_dim), f"{name}.b_{gate}")

        self.W_z, self.U_z, self.b_z = w("z"), u("z"), b("z")
        self.W_r, self.U_r, self.b_r = w("r"), u("r"), b("r")
        self.W_h, self.U_h, self.b_h = w("h"), u("h"), b("h")

    def parameters(self) -> list[Parameter]:
        return [self.W_z, self.U_z, self.b_z, self.W_r, self.U_r, self.b_r, self.W_h, self.U_h, self.b_h]


def gru_step(cell: GruCell, x: np.ndarray, h_prev: np.ndarray) -> tuple[np.ndarray, tuple]:
    """One step for x [B, n] and h_prev [B, k]; returns h_t and the backward cache."""
    if x.ndim != 2 or x.shape[1] != cell.input_dim:
        raise ValueError(f"gru input shape {x.shape} does not match input dim {cell.input_dim}")
    if h_prev.shape != (x.shape[0], cell.hidden_dim):
        raise ValueError(f"gru state shape {h_prev.shape} does not match ({x.shape[0]}, {cell.hidden_dim})")

    z = _sigmoid(x @ cell.W_z.value + h_prev @ cell.U_z.value + cell.b_z.value)
    r = _sigmoid(x @ cell.W_r.value + h_prev @ cell.U_r.value + cell.b_r.value)
    rh = r * h_prev
    h_tilde = np.tanh(x @ cell.W_h.value + rh @ cell.U_h.value + cell.b_h.value)
    h = (1.0 - z) * h_prev + z * h_tilde
    return h, (x, h_prev, z, r, rh, h_tilde)


def gru_step_backward(cell: GruCell, dh: np.ndarray, cache: tuple) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate cell gradients; return (dx, dh_prev)."""
    x, h_prev, z, r, rh, h_tilde = cache

    dh_tilde = dh * z
    dz = dh * (h_tilde - h_prev)
    dh_prev = dh * (1.0 - z)

    da_h = dh_tilde * (1.0 - h_tilde**2)
    cell.W_h.grad += x.T @ da_h
    cell.U_h.grad += rh.T @ da_h
    cell.b_h.grad += da_h.sum(axis=0)
    drh = da_h @ cell.U_h.value.T
    dr = drh * h_prev
    dh_prev += drh * r

    da_z = dz * z * (1.0 - z)
    cell.W_z.grad += x.T @ da_z
    cell.U_z.grad += h_prev.T @ da_z
    cell.b_z.grad += da_z.sum(axis=0)
    dh_prev += da_z @ cell.U_z.value.T

    da_r = dr * r * (1.0 - r)
    cell.W_r.grad += x.T @ da_r
    cell.U_r.grad += h_prev.T @ da_r
    cell.b_r.grad += da_r.sum(axis=0)
    dh_prev += da_r @ cell.U_r.value.T

    dx = da_z @ cell.W_z.value.T + da_r @ cell.W_r.value.T + da_h @ cell.W_h.value.T
    return dx, dh_prev


class GruEncoder:
    """Unidirectional masked unroll of one cell over [T, B, n] inputs."""

    def __init__(self, cell: GruCell):
        self.cell = cell

    def parameters(self) -> list[Parameter]:
        return self.cell.parameters()

    def forward(self, inputs: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, list]:
        """Returns (outputs [T, B, k], final state [B, k], caches).

        Masked steps copy the previous state forward, so an all-padding
        row simply keeps the zero initial state.
        """
        steps, batch, _ = inputs.shape
        if mask.shape != (steps, batch):
            raise ValueError(f"mask shape {mask.shape} does not match inputs {inputs.shape[:2]}")
        h = np.zeros((batch, self.cell.hidden_dim))
        outputs = np.zeros((steps, batch, self.cell.hidden_dim))
        caches = []
        for t in range(steps):
            h_cell, cache = gru_step(self.cell, inputs[t], h)
            m = mask[t][:, None]
            h = m * h_cell + (1.0 - m) * h
            caches.append((cache, m))
            outputs[t] = h
        return outputs, h, caches

    def backward(
        self, caches: list, doutputs: np.ndarray | None, dfinal: np.ndarray | None
    ) -> np.ndarray:
        """Returns dinputs [T, B, n]; parameter grads accumulate on the cell."""
        steps = len(caches)
        cache0, _ = caches[0]
        batch = cache0[0].shape[0]
        dinputs = np.zeros((steps, batch, self.cell.input_dim))
        dh = np.zeros((batch, self.cell.hidden_dim)) if dfinal is None else dfinal.copy()
        for t in range(steps - 1, -1, -1):
            if doutputs is not None:
                dh = dh + doutputs[t]
            cache, m = caches[t]
            dx, dh_prev_cell = gru_step_backward(self.cell, dh * m, cache)
            dinputs[t] = dx
            dh = dh * (1.0 - m) + dh_prev_cell
        return dinputs


class BiGruEncoder:
    """Forward and backward unrolls concatenated along the feature axis."""

    def __init__(self, forward_cell: GruCell, backward_cell: GruCell):
        self.fwd = GruEncoder(forward_cell)
        self.bwd = GruEncoder(backward_cell)

    @property
    def output_dim(self) -> int:
        return self.fwd.cell.hidden_dim + self.bwd.cell.hidden_dim

    def parameters(self) -> list[Parameter]:
        return self.fwd.parameters() + self.bwd.parameters()

    def forward(self, inputs: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, tuple]:
        out_f, final_f, caches_f = self.fwd.forward(inputs, mask)
        out_b_rev, final_b, caches_b = self.bwd.forward(inputs[::-1], mask[::-1])
        outputs = np.concatenate([out_f, out_b_rev[::-1]], axis=2)
        final = np.concatenate([final_f, final_b], axis=1)
        return outputs, final, (caches_f, caches_b)

    def backward(
        self, caches: tuple, doutputs: np.ndarray | None, dfinal: np.ndarray | None
    ) -> np.ndarray:
        caches_f, caches_b = caches
        k_f = self.fwd.cell.hidden_dim
        d_out_f = d_out_b = None
        if doutputs is not None:
            d_out_f = doutputs[:, :, :k_f]
            d_out_b = doutputs[::-1, :, k_f:]
        d_fin_f = d_fin_b = None
        if dfinal is not None:
            d_fin_f = dfinal[:, :k_f]
            d_fin_b = dfinal[:, k_f:]
        dinputs = self.fwd.backward(caches_f, d_out_f, d_fin_f)
        dinputs += self.bwd.backward(caches_b, d_out_b, d_fin_b)[::-1]
        return dinputs


def encode_sequence(
    cell: GruCell,
    inputs: np.ndarray,
    mask: np.ndarray,
    backward_cell: GruCell | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Forward-only convenience: outputs [T, B, k] (or 2k bidirectional) and final state."""
    if backward_cell is None:
        outputs, final, _ = GruEncoder(cell).forward(inputs, mask)
    else:
        outputs, final, _ = BiGruEncoder(cell, backward_cell).forward(inputs, mask)
    return outputs, final
