"""Layer primitives with hand-derived backward passes.

Batch convention: rows are batch entries, so a linear map is y = x @ W + b
with W shaped (in, out). All backward functions return the input gradient
and accumulate parameter gradients via +=, allowing shared parameters
across time steps.
"""

from __future__ import annotations

import numpy as np

from .params import ParameterStore, uniform_init


def linear_forward(W: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Affine map y = x @ W + b for x of shape (batch, in)."""
    if x.ndim != 2 or x.shape[1] != W.shape[0]:
        raise ValueError(f"shape mismatch: x {x.shape} vs W {W.shape}")
    if b.shape[-1] != W.shape[1]:
        raise ValueError(f"shape mismatch: b {b.shape} vs W {W.shape}")
    return x @ W + b


def linear_backward(W: np.ndarray, x: np.ndarray, dy: np.ndarray):
    """Gradients of the affine map: returns (dx, dW, db)."""
    if dy.ndim != 2 or dy.shape != (x.shape[0], W.shape[1]):
        raise ValueError(f"shape mismatch: dy {dy.shape} vs x {x.shape}, W {W.shape}")
    return dy @ W.T, x.T @ dy, dy.sum(axis=0)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(x: np.ndarray, dy: np.ndarray) -> np.ndarray:
    # Subgradient at exactly 0 is taken as 0.
    return np.where(x > 0.0, dy, 0.0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # tanh formulation: numerically stable for large |x| and faster than expit.
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class Linear:
    """Affine layer owning W and b in a ParameterStore."""

    def __init__(self, store: ParameterStore, name: str, in_dim: int, out_dim: int,
                 rng: np.random.Generator):
        self.W = store.add(f"{name}.W", uniform_init(rng, in_dim, (in_dim, out_dim)))
        self.b = store.add(f"{name}.b", np.zeros(out_dim))

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return linear_forward(self.W.value, self.b.value, x)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        dx, dW, db = linear_backward(self.W.value, self._x, dy)
        self.W.grad += dW
        self.b.grad += db
        return dx


class LSTMCell:
    """Standard LSTM cell with fused gate parameters.

    Gate preactivations are packed as [input, forget, output | candidate]:
    the first three blocks go through sigmoid, the last through tanh.

        c' = f * c + i * g,   h' = o * tanh(c')

    Parameters: Wx (in, 4H), Wh (H, 4H), b (4H,). The forget-gate bias is
    initialized to 1 so fresh cells retain state.
    """

    def __init__(self, store: ParameterStore, name: str, in_dim: int, hidden: int,
                 rng: np.random.Generator):
        self.in_dim = in_dim
        self.hidden = hidden
        self.Wx = store.add(f"{name}.Wx", uniform_init(rng, in_dim, (in_dim, 4 * hidden)))
        self.Wh = store.add(f"{name}.Wh", uniform_init(rng, hidden, (hidden, 4 * hidden)))
        bias = np.zeros(4 * hidden)
        bias[hidden:2 * hidden] = 1.0
        self.b = store.add(f"{name}.b", bias)

    def project_input(self, x: np.ndarray) -> np.ndarray:
        """x @ Wx + b for one step or a stacked block of steps."""
        if x.shape[-1] != self.in_dim:
            raise ValueError(f"shape mismatch: x {x.shape} vs Wx {self.Wx.value.shape}")
        return x @ self.Wx.value + self.b.value

    def step(self, xp: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray):
        """Advance one step from the precomputed input projection xp.

        Returns (h, c, cache); cache feeds step_backward.
        """
        H = self.hidden
        pre = xp + h_prev @ self.Wh.value
        gates = sigmoid(pre[:, :3 * H])
        i = gates[:, :H]
        f = gates[:, H:2 * H]
        o = gates[:, 2 * H:]
        g = np.tanh(pre[:, 3 * H:])
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h = o * tc
        return h, c, (h_prev, c_prev, i, f, o, g, tc)

    def step_backward(self, cache, dh: np.ndarray, dc: np.ndarray, out: np.ndarray):
        """Backprop one step, writing the gate-preactivation gradient to out.

        Returns (dh_prev, dc_prev); the caller turns stacked preactivation
        gradients into Wx/Wh/b gradients with single matmuls.
        """
        h_prev, c_prev, i, f, o, g, tc = cache
        H = self.hidden
        dc_total = dc + dh * o * (1.0 - tc * tc)
        out[:, :H] = dc_total * g * i * (1.0 - i)
        out[:, H:2 * H] = dc_total * c_prev * f * (1.0 - f)
        out[:, 2 * H:3 * H] = dh * tc * o * (1.0 - o)
        out[:, 3 * H:] = dc_total * i * (1.0 - g * g)
        dh_prev = out @ self.Wh.value.T
        dc_prev = dc_total * f
        return dh_prev, dc_prev

    def forward(self, x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray):
        """Single-step convenience wrapper over project_input + step."""
        h, c, cache = self.step(self.project_input(x), h_prev, c_prev)
        return h, c, (x,) + cache

    def backward(self, cache, dh: np.ndarray, dc: np.ndarray):
        """Single-step backward; accumulates parameter grads, returns
        (dx, dh_prev, dc_prev)."""
        x, *step_cache = cache
        dpre = np.empty((dh.shape[0], 4 * self.hidden))
        dh_prev, dc_prev = self.step_backward(tuple(step_cache), dh, dc, out=dpre)
        self.Wx.grad += x.T @ dpre
        self.Wh.grad += step_cache[0].T @ dpre
        self.b.grad += dpre.sum(axis=0)
        dx = dpre @ self.Wx.value.T
        return dx, dh_prev, dc_prev
