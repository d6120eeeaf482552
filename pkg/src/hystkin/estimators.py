"""Sklearn-style regressors for the three model families.

Each estimator maps a scalar input series to a scalar output series. ``fit``
accepts a single 1-D sequence or a list of them (trajectory boundaries are
preserved); ``predict`` maps one 1-D series to one 1-D series of equal
length. Inputs and outputs are in source units; scaling to [0, 1] happens
internally and the fitted bounds travel with the model.

Training follows one fixed recipe for all families: Adam, MSE loss,
mini-batches of 16 reshuffled every epoch, 500 epochs, no early stopping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted
from threadpoolctl import threadpool_limits

from .datasets import Direction, UnitIntervalScaler, WindowSpec, make_dataset, make_windows
from .exceptions import FormatError, NumericsError
from .networks import FeedforwardNet, StackedLstmNet
from .nn.optim import AdamConfig, adam_step
from .series import KinematicSeries
from .validation import as_float_array, as_series_list


class _SeriesRegressor(BaseEstimator):
    """Shared plumbing: scaling, epoch loop bookkeeping, prediction glue."""

    def _rngs(self):
        init_seq, shuffle_seq = np.random.SeedSequence(self.seed).spawn(2)
        return (np.random.Generator(np.random.PCG64(init_seq)),
                np.random.Generator(np.random.PCG64(shuffle_seq)))

    def _check_pairs(self, X, y):
        xs = as_series_list(X, "X")
        ys = as_series_list(y, "y")
        if len(xs) != len(ys):
            raise ValueError(f"X has {len(xs)} sequences but y has {len(ys)}")
        for i, (a, b) in enumerate(zip(xs, ys)):
            if a.size != b.size:
                raise ValueError(f"sequence {i}: x has {a.size} samples, y has {b.size}")
        return xs, ys

    def fit(self, X, y):
        xs, ys = self._check_pairs(X, y)
        self.x_scaler_ = UnitIntervalScaler().fit(xs)
        self.y_scaler_ = UnitIntervalScaler().fit(ys)
        xn = [self.x_scaler_.transform(v) for v in xs]
        yn = [self.y_scaler_.transform(v) for v in ys]
        init_rng, shuffle_rng = self._rngs()
        self.net_ = self._build_net(init_rng)
        self.n_params_ = self.net_.store.n_params
        # Training is single threaded by contract: reproducible accumulation
        # order, and these matrices are too small to gain from BLAS threads.
        with threadpool_limits(limits=1):
            self.loss_curve_ = self._train(xn, yn, shuffle_rng)
        self.final_train_mse_ = float(self.loss_curve_[-1])
        return self

    def predict(self, x) -> np.ndarray:
        check_is_fitted(self, "net_")
        u = self.x_scaler_.transform(as_float_array(x, "x"))
        with threadpool_limits(limits=1):
            return self.y_scaler_.inverse_transform(self._predict_normalized(u))

    def _train_rows(self, net, X_rows: np.ndarray, y_rows: np.ndarray,
                    shuffle_rng: np.random.Generator) -> np.ndarray:
        cfg = AdamConfig(lr=self.learning_rate)
        n = y_rows.size
        curve = np.empty(self.epochs)
        for epoch in range(self.epochs):
            perm = shuffle_rng.permutation(n)
            total = 0.0
            for k, start in enumerate(range(0, n, self.batch_size)):
                idx = perm[start:start + self.batch_size]
                loss = net.loss_and_grad((X_rows[idx], y_rows[idx]))
                if not np.isfinite(loss):
                    raise NumericsError(f"non-finite loss at epoch {epoch}, batch {k}")
                adam_step(net.store, cfg)
                total += loss * idx.size
            curve[epoch] = total / n
        return curve

    def _restore(self, tensors: dict[str, np.ndarray], x_bounds, y_bounds):
        """Rebuild the fitted state from persisted tensors and scaler bounds."""
        self.net_ = self._build_net(np.random.Generator(np.random.PCG64(0)))
        store = self.net_.store
        expected = store.names()
        if list(tensors) != expected:
            raise FormatError(f"tensor names {list(tensors)} do not match {expected}")
        for name, arr in tensors.items():
            p = store[name]
            if p.shape != arr.shape:
                raise FormatError(
                    f"tensor {name!r} has shape {arr.shape}, expected {p.shape}")
            p.value[...] = arr
        self.x_scaler_ = UnitIntervalScaler()
        self.x_scaler_.min_, self.x_scaler_.max_ = x_bounds
        self.y_scaler_ = UnitIntervalScaler()
        self.y_scaler_.min_, self.y_scaler_.max_ = y_bounds
        self.n_params_ = store.n_params
        self.loss_curve_ = None
        return self


class FNNRegressor(_SeriesRegressor):
    """Memoryless feedforward map from the current input sample only.

    Cannot represent multi-valued (hysteretic) relations; serves as the
    history-free baseline.
    """

    def __init__(self, epochs: int = 500, batch_size: int = 16,
                 learning_rate: float = 0.001, seed: int = 0):
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def _build_net(self, rng):
        return FeedforwardNet(1, rng)

    def _train(self, xn, yn, shuffle_rng):
        X_rows = np.concatenate(xn)[:, None]
        y_rows = np.concatenate(yn)
        return self._train_rows(self.net_, X_rows, y_rows, shuffle_rng)

    def _predict_normalized(self, u):
        return self.net_.predict(u[:, None])


class HistoryBufferFNNRegressor(_SeriesRegressor):
    """Feedforward map over a buffer of the last ``buffer_len`` inputs.

    Positions before a trajectory's start are filled with ``flag_value``
    (in normalized units), which keeps sequence starts distinguishable.
    """

    def __init__(self, buffer_len: int = 50, flag_value: float = -1.0,
                 epochs: int = 500, batch_size: int = 16,
                 learning_rate: float = 0.001, seed: int = 0):
        self.buffer_len = buffer_len
        self.flag_value = flag_value
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    @property
    def window(self) -> WindowSpec:
        return WindowSpec(length=self.buffer_len, flag_value=self.flag_value)

    def _build_net(self, rng):
        return FeedforwardNet(self.buffer_len, rng)

    def _train(self, xn, yn, shuffle_rng):
        X_rows = np.vstack([make_windows(x, self.window) for x in xn])
        y_rows = np.concatenate(yn)
        return self._train_rows(self.net_, X_rows, y_rows, shuffle_rng)

    def _predict_normalized(self, u):
        return self.net_.predict(make_windows(u, self.window))


class LSTMRegressor(_SeriesRegressor):
    """Stacked LSTM with an affine head, trained by truncated BPTT.

    Each trajectory is prefixed with ``subseq_len - 1`` flag inputs, then cut
    into ``subseq_len``-sample subsequences that start from zero hidden and
    cell state. The cut phase is re-randomized every epoch so all alignments
    are seen; flag and padding positions are masked out of the loss.
    Prediction rolls the whole series statefully after the flag prefix.
    """

    def __init__(self, hidden_size: int = 64, num_layers: int = 2,
                 subseq_len: int = 50, flag_value: float = -1.0,
                 epochs: int = 500, batch_size: int = 16,
                 learning_rate: float = 0.001, seed: int = 0):
        self.hidden_size = hidden_size
        self.num_layers = num_layers
        self.subseq_len = subseq_len
        self.flag_value = flag_value
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def _build_net(self, rng):
        return StackedLstmNet(1, rng, hidden=self.hidden_size, num_layers=self.num_layers)

    def _train(self, xn, yn, shuffle_rng):
        L = self.subseq_len
        prefix = L - 1
        tracks = []
        for x, y in zip(xn, yn):
            xi = np.concatenate([np.full(prefix, self.flag_value), x])
            yi = np.concatenate([np.zeros(prefix), y])
            wi = np.concatenate([np.zeros(prefix), np.ones(y.size)])
            tracks.append((xi, yi, wi))

        cfg = AdamConfig(lr=self.learning_rate)
        net = self.net_
        curve = np.empty(self.epochs)
        for epoch in range(self.epochs):
            segments = []
            for ti, (xi, _, _) in enumerate(tracks):
                off = int(shuffle_rng.integers(L))
                bounds = [0] + list(range(off if off else L, xi.size, L)) + [xi.size]
                for a, b in zip(bounds[:-1], bounds[1:]):
                    # segments fully inside the flag prefix carry no targets;
                    # they would train nothing from their zero initial state
                    if b > a and b > prefix:
                        segments.append((ti, a, b))
            order = shuffle_rng.permutation(len(segments))
            total = 0.0
            weight_sum = 0.0
            for k, start in enumerate(range(0, len(segments), self.batch_size)):
                chosen = [segments[j] for j in order[start:start + self.batch_size]]
                B = len(chosen)
                X = np.full((L, B, 1), self.flag_value)
                Y = np.zeros((L, B))
                W = np.zeros((L, B))
                for col, (ti, a, b) in enumerate(chosen):
                    xi, yi, wi = tracks[ti]
                    X[:b - a, col, 0] = xi[a:b]
                    Y[:b - a, col] = yi[a:b]
                    W[:b - a, col] = wi[a:b]
                loss = net.loss_and_grad((X, Y, W))
                if not np.isfinite(loss):
                    raise NumericsError(f"non-finite loss at epoch {epoch}, batch {k}")
                adam_step(net.store, cfg)
                w_batch = W.sum()
                total += loss * w_batch
                weight_sum += w_batch
            curve[epoch] = total / weight_sum
        return curve

    def _predict_normalized(self, u):
        prefix = self.subseq_len - 1
        padded = np.concatenate([np.full(prefix, self.flag_value), u])
        return self.net_.predict_sequence(padded)[prefix:]


MODEL_KINDS = {
    "fnn": FNNRegressor,
    "fnn-hib": HistoryBufferFNNRegressor,
    "lstm": LSTMRegressor,
}


def make_estimator(kind: str, **settings):
    """Build an estimator of the given kind, keeping only settings it takes."""
    try:
        cls = MODEL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {sorted(MODEL_KINDS)}") from None
    accepted = cls._get_param_names()
    return cls(**{k: v for k, v in settings.items() if k in accepted})


@dataclass
class TrainedModel:
    """A fitted estimator plus the kinematic direction it was trained for."""

    kind: str
    direction: Direction
    estimator: _SeriesRegressor

    @property
    def loss_curve(self) -> np.ndarray | None:
        return self.estimator.loss_curve_


def train_model(kind: str, direction: Direction, series_list: list[KinematicSeries],
                **settings) -> TrainedModel:
    """Train one model kind on a list of series for the given direction."""
    est = make_estimator(kind, **settings)
    xs, ys = make_dataset(series_list, direction)
    est.fit(xs, ys)
    return TrainedModel(kind=kind, direction=direction, estimator=est)


def predict_series(model: TrainedModel, x) -> np.ndarray:
    """Predict the output series for a source-unit input series."""
    return model.estimator.predict(x)
