"""The three model architectures assembled from nn primitives.

Both network classes expose the interface the trainer and the gradient
checker rely on: ``store`` (ParameterStore), ``loss_and_grad(batch)`` and
``loss(batch)``.
"""

from __future__ import annotations

import numpy as np

from .nn.layers import Linear, LSTMCell, relu, relu_backward
from .nn.losses import mse_loss, weighted_mse_loss
from .nn.params import ParameterStore


class FeedforwardNet:
    """Fully connected scalar regressor, layer sizes [in, hidden..., 1].

    The default two 64-unit hidden layers with ReLU cover both the plain
    single-input network and the history-buffer variant, which only widens
    the input layer.
    """

    def __init__(self, in_dim: int, rng: np.random.Generator,
                 hidden: tuple[int, ...] = (64, 64), activation: str = "relu"):
        if activation not in ("relu", "identity"):
            raise ValueError(f"unknown activation {activation!r}")
        self.in_dim = in_dim
        self.activation = activation
        self.store = ParameterStore()
        dims = (in_dim,) + tuple(hidden) + (1,)
        self.layers = [Linear(self.store, f"fc{i + 1}", dims[i], dims[i + 1], rng)
                       for i in range(len(dims) - 1)]
        self.store.build()

    def forward(self, X: np.ndarray) -> np.ndarray:
        a = X
        self._pre = []
        for layer in self.layers[:-1]:
            z = layer.forward(a)
            self._pre.append(z)
            a = relu(z) if self.activation == "relu" else z
        return self.layers[-1].forward(a)[:, 0]

    def backward(self, dpred: np.ndarray):
        da = self.layers[-1].backward(dpred[:, None])
        for layer, z in zip(reversed(self.layers[:-1]), reversed(self._pre)):
            dz = relu_backward(z, da) if self.activation == "relu" else da
            da = layer.backward(dz)

    def loss_and_grad(self, batch) -> float:
        X, y = batch
        loss, dpred = mse_loss(self.forward(X), y)
        self.backward(dpred)
        return loss

    def loss(self, batch) -> float:
        X, y = batch
        return mse_loss(self.forward(X), y)[0]

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.forward(X)


class StackedLstmNet:
    """Stacked LSTM layers followed by an affine head, trained by full BPTT
    over fixed-length subsequences that start from zero state.

    Sequence batches are shaped (steps, batch, features); targets and the
    optional loss mask are (steps, batch). The time loop runs over
    preallocated per-shape buffers: activations for every step live in
    stacked arrays, so one training step performs no sequence-sized
    allocations (repeated multi-MB allocations are disproportionately slow).
    The math per step matches LSTMCell.step / step_backward exactly.
    """

    def __init__(self, in_dim: int, rng: np.random.Generator,
                 hidden: int = 64, num_layers: int = 2):
        self.in_dim = in_dim
        self.hidden = hidden
        self.num_layers = num_layers
        self.store = ParameterStore()
        self.cells = [LSTMCell(self.store, f"lstm{i + 1}", in_dim if i == 0 else hidden,
                               hidden, rng) for i in range(num_layers)]
        self.head = Linear(self.store, "head", hidden, 1, rng)
        self.store.build()
        self._workspaces: dict[tuple[int, int], dict] = {}

    def _workspace(self, S: int, B: int) -> dict:
        key = (S, B)
        ws = self._workspaces.get(key)
        if ws is None:
            H = self.hidden
            L = self.num_layers
            ws = {
                # per layer: projected inputs and per-step activation stacks
                "xp": [np.empty((S * B, 4 * H)) for _ in range(L)],
                "sig": [np.empty((S, B, 3 * H)) for _ in range(L)],   # i | f | o
                "g": [np.empty((S, B, H)) for _ in range(L)],
                "c": [np.empty((S, B, H)) for _ in range(L)],
                "tc": [np.empty((S, B, H)) for _ in range(L)],
                "h_out": [np.empty((S, B, H)) for _ in range(L)],
                "h_prev": np.empty((S * B, H)),
                "dpre": np.empty((S * B, 4 * H)),
                "d_layer": np.empty((S * B, H)),
                "head_out": np.empty((S * B, 1)),
                # per-step scratch
                "pre": np.empty((B, 4 * H)),
                "dct": np.empty((B, H)),
                "scr": np.empty((B, H)),
                "dh": np.empty((B, H)),
                "dc": np.empty((B, H)),
                "zeros": np.zeros((B, H)),
            }
            if len(self._workspaces) >= 8:
                self._workspaces.pop(next(iter(self._workspaces)))
            self._workspaces[key] = ws
        return ws

    def _forward(self, X: np.ndarray) -> np.ndarray:
        S, B, _ = X.shape
        H = self.hidden
        ws = self._workspace(S, B)
        self._inputs = [X]
        pre = ws["pre"]
        for li, cell in enumerate(self.cells):
            layer_in = self._inputs[li]
            np.matmul(layer_in.reshape(S * B, -1), cell.Wx.value, out=ws["xp"][li])
            ws["xp"][li] += cell.b.value
            xp = ws["xp"][li].reshape(S, B, 4 * H)
            sig, g, c, tc, h_out = (ws[k][li] for k in ("sig", "g", "c", "tc", "h_out"))
            h = ws["zeros"]
            c_prev = ws["zeros"]
            Wh = cell.Wh.value
            for t in range(S):
                np.matmul(h, Wh, out=pre)
                pre += xp[t]
                blk = sig[t]
                np.multiply(pre[:, :3 * H], 0.5, out=blk)
                np.tanh(blk, out=blk)
                blk *= 0.5
                blk += 0.5
                np.tanh(pre[:, 3 * H:], out=g[t])
                np.multiply(blk[:, H:2 * H], c_prev, out=c[t])      # f * c_prev
                c[t] += blk[:, :H] * g[t]                           # + i * g
                np.tanh(c[t], out=tc[t])
                np.multiply(blk[:, 2 * H:], tc[t], out=h_out[t])    # o * tanh(c)
                h = h_out[t]
                c_prev = c[t]
            self._inputs.append(h_out)
        flat_in = h_out.reshape(S * B, H)
        np.matmul(flat_in, self.head.W.value, out=ws["head_out"])
        ws["head_out"] += self.head.b.value
        self._ws = ws
        return ws["head_out"][:, 0].reshape(S, B)

    def forward_sequence(self, X: np.ndarray) -> np.ndarray:
        return self._forward(X).copy()

    def _backward(self, dpred: np.ndarray):
        S, B = dpred.shape
        H = self.hidden
        ws = self._ws
        d_flat = dpred.reshape(S * B, 1)
        top = self._inputs[-1].reshape(S * B, H)
        self.head.W.grad += top.T @ d_flat
        self.head.b.grad += d_flat.sum(axis=0)
        np.matmul(d_flat, self.head.W.value.T, out=ws["d_layer"])
        d_layer = ws["d_layer"].reshape(S, B, H)

        dpre_flat = ws["dpre"]
        dpre = dpre_flat.reshape(S, B, 4 * H)
        dct, scr, dh, dc = ws["dct"], ws["scr"], ws["dh"], ws["dc"]
        for li in reversed(range(self.num_layers)):
            cell = self.cells[li]
            sig, g, c, tc = (ws[k][li] for k in ("sig", "g", "c", "tc"))
            WhT = cell.Wh.value.T
            dh.fill(0.0)
            dc.fill(0.0)
            for t in reversed(range(S)):
                dh += d_layer[t]
                i_t = sig[t, :, :H]
                f_t = sig[t, :, H:2 * H]
                o_t = sig[t, :, 2 * H:]
                c_prev = c[t - 1] if t > 0 else ws["zeros"]
                # dc_total = dc + dh * o * (1 - tc^2)
                np.multiply(tc[t], tc[t], out=dct)
                np.subtract(1.0, dct, out=dct)
                dct *= o_t
                dct *= dh
                dct += dc
                blk = dpre[t]
                bi = blk[:, :H]
                np.multiply(dct, g[t], out=bi)
                bi *= i_t
                np.subtract(1.0, i_t, out=scr)
                bi *= scr
                bf = blk[:, H:2 * H]
                np.multiply(dct, c_prev, out=bf)
                bf *= f_t
                np.subtract(1.0, f_t, out=scr)
                bf *= scr
                bo = blk[:, 2 * H:3 * H]
                np.multiply(dh, tc[t], out=bo)
                bo *= o_t
                np.subtract(1.0, o_t, out=scr)
                bo *= scr
                bg = blk[:, 3 * H:]
                np.multiply(g[t], g[t], out=scr)
                np.subtract(1.0, scr, out=scr)
                np.multiply(dct, i_t, out=bg)
                bg *= scr
                np.matmul(blk, WhT, out=dh)
                np.multiply(dct, f_t, out=dc)
            h_prev = ws["h_prev"].reshape(S, B, H)
            h_prev[0] = 0.0
            h_prev[1:] = ws["h_out"][li][:-1]
            layer_in = self._inputs[li]
            in_dim = layer_in.shape[2]
            cell.Wx.grad += layer_in.reshape(S * B, in_dim).T @ dpre_flat
            cell.Wh.grad += ws["h_prev"].T @ dpre_flat
            cell.b.grad += dpre_flat.sum(axis=0)
            if li > 0:
                np.matmul(dpre_flat, cell.Wx.value.T, out=ws["d_layer"])
                d_layer = ws["d_layer"].reshape(S, B, in_dim)
        self._inputs = None
        self._ws = None

    def loss_and_grad(self, batch) -> float:
        X, Y, W = batch
        pred = self._forward(X)
        if W is None:
            loss, dpred = mse_loss(pred, Y)
        else:
            loss, dpred = weighted_mse_loss(pred, Y, W)
        self._backward(dpred)
        return loss

    def loss(self, batch) -> float:
        X, Y, W = batch
        pred = self._forward(X)
        self._inputs = None
        self._ws = None
        if W is None:
            return mse_loss(pred, Y)[0]
        return weighted_mse_loss(pred, Y, W)[0]

    def predict_sequence(self, x: np.ndarray) -> np.ndarray:
        """Stateful rollout of a single sequence (steps,) -> (steps,)."""
        X = np.ascontiguousarray(x, dtype=np.float64).reshape(-1, 1, self.in_dim)
        return self.forward_sequence(X)[:, 0]
