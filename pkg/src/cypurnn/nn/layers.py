"""Layer stack: dense, 3x3 valid convolution, 2x2 max pooling, flatten,
relu, softmax. All arrays are float64 and batched along the first axis.

Each layer caches whatever its backward pass needs during forward, exposes
``params``/``grads`` as parallel lists for the optimizer, and reports a
``spec()`` dict for persistence.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .ops import softmax


def _he_uniform(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    # uniform fan-in scaling; deterministic given the generator state
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


class Layer:
    params: list[np.ndarray] = []
    grads: list[np.ndarray] = []
    param_names: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return type(self).__name__

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def _bad_shape(self, got):
        return ValueError(f"{self.label}: unexpected input shape {tuple(got)}")


class Dense(Layer):
    param_names = ("weight", "bias")

    def __init__(self, in_features: int, out_features: int,
                 rng: np.random.Generator | None = None):
        self.in_features = in_features
        self.out_features = out_features
        if rng is None:
            self.weight = np.zeros((in_features, out_features))
        else:
            self.weight = _he_uniform(rng, (in_features, out_features), in_features)
        self.bias = np.zeros(out_features)
        self.grads = [np.zeros_like(self.weight), np.zeros_like(self.bias)]
        self._x = None

    @property
    def params(self):
        return [self.weight, self.bias]

    @property
    def label(self):
        return f"Dense({self.in_features}->{self.out_features})"

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise self._bad_shape(x.shape)
        self._x = x
        return x @ self.weight + self.bias

    def backward(self, grad_out):
        self.grads[0][...] = self._x.T @ grad_out
        self.grads[1][...] = grad_out.sum(axis=0)
        return grad_out @ self.weight.T

    def spec(self):
        return {"kind": "dense", "in_features": self.in_features,
                "out_features": self.out_features}


class Conv2d(Layer):
    """3x3 kernel, stride 1, no padding; input layout (n, channels, h, w)."""

    param_names = ("weight", "bias")

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int = 3,
                 rng: np.random.Generator | None = None):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel_size = kernel_size
        fan_in = in_channels * kernel_size * kernel_size
        shape = (out_channels, in_channels, kernel_size, kernel_size)
        self.weight = np.zeros(shape) if rng is None else _he_uniform(rng, shape, fan_in)
        self.bias = np.zeros(out_channels)
        self.grads = [np.zeros_like(self.weight), np.zeros_like(self.bias)]
        self._cols = None
        self._in_shape = None

    @property
    def params(self):
        return [self.weight, self.bias]

    @property
    def label(self):
        return f"Conv2d({self.in_channels}->{self.out_channels}, {self.kernel_size}x{self.kernel_size})"

    def forward(self, x):
        k = self.kernel_size
        if x.ndim != 4 or x.shape[1] != self.in_channels \
                or x.shape[2] < k or x.shape[3] < k:
            raise self._bad_shape(x.shape)
        n, _, h, w = x.shape
        oh, ow = h - k + 1, w - k + 1
        # (n, ic, oh, ow, k, k) -> rows of flattened receptive fields
        windows = sliding_window_view(x, (k, k), axis=(2, 3))
        cols = windows.transpose(0, 2, 3, 1, 4, 5).reshape(n * oh * ow, -1)
        self._cols = cols
        self._in_shape = x.shape
        w_mat = self.weight.reshape(self.out_channels, -1)
        out = cols @ w_mat.T + self.bias
        return out.reshape(n, oh, ow, self.out_channels).transpose(0, 3, 1, 2)

    def backward(self, grad_out):
        k = self.kernel_size
        n, _, h, w = self._in_shape
        oh, ow = h - k + 1, w - k + 1
        g_mat = grad_out.transpose(0, 2, 3, 1).reshape(-1, self.out_channels)
        self.grads[0][...] = (g_mat.T @ self._cols).reshape(self.weight.shape)
        self.grads[1][...] = g_mat.sum(axis=0)
        d_cols = g_mat @ self.weight.reshape(self.out_channels, -1)
        d_cols = d_cols.reshape(n, oh, ow, self.in_channels, k, k)
        d_cols = d_cols.transpose(0, 3, 4, 5, 1, 2)  # (n, ic, k, k, oh, ow)
        dx = np.zeros(self._in_shape)
        for i in range(k):
            for j in range(k):
                dx[:, :, i:i + oh, j:j + ow] += d_cols[:, :, i, j]
        return dx

    def spec(self):
        return {"kind": "conv2d", "in_channels": self.in_channels,
                "out_channels": self.out_channels, "kernel_size": self.kernel_size}


class MaxPool2d(Layer):
    """2x2 max pooling, stride 2; trailing odd rows/columns are dropped."""

    def __init__(self, pool_size: int = 2):
        self.pool_size = pool_size
        self._cache = None

    @property
    def label(self):
        return f"MaxPool2d({self.pool_size}x{self.pool_size})"

    def forward(self, x):
        s = self.pool_size
        if x.ndim != 4 or x.shape[2] < s or x.shape[3] < s:
            raise self._bad_shape(x.shape)
        n, c, h, w = x.shape
        oh, ow = h // s, w // s
        windows = x[:, :, :oh * s, :ow * s].reshape(n, c, oh, s, ow, s)
        windows = windows.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, oh, ow, s * s)
        argmax = windows.argmax(axis=-1)  # first maximum wins on ties
        self._cache = (x.shape, argmax)
        return np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad_out):
        s = self.pool_size
        in_shape, argmax = self._cache
        n, c, h, w = in_shape
        oh, ow = h // s, w // s
        d_windows = np.zeros((n, c, oh, ow, s * s))
        np.put_along_axis(d_windows, argmax[..., None], grad_out[..., None], axis=-1)
        d_windows = d_windows.reshape(n, c, oh, ow, s, s).transpose(0, 1, 2, 4, 3, 5)
        dx = np.zeros(in_shape)
        dx[:, :, :oh * s, :ow * s] = d_windows.reshape(n, c, oh * s, ow * s)
        return dx

    def spec(self):
        return {"kind": "maxpool2d", "pool_size": self.pool_size}


class Flatten(Layer):
    def __init__(self):
        self._in_shape = None

    def forward(self, x):
        if x.ndim < 2:
            raise self._bad_shape(x.shape)
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_out):
        return grad_out.reshape(self._in_shape)

    def spec(self):
        return {"kind": "flatten"}


class Relu(Layer):
    def __init__(self):
        self._mask = None

    def forward(self, x):
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad_out):
        return np.where(self._mask, grad_out, 0.0)

    def spec(self):
        return {"kind": "relu"}


class Softmax(Layer):
    """Row-wise softmax; only valid as the final layer of a network."""

    def __init__(self):
        self._probs = None

    def forward(self, x):
        if x.ndim != 2:
            raise self._bad_shape(x.shape)
        self._probs = softmax(x)
        return self._probs

    def backward(self, grad_out):
        # full Jacobian product: dz_i = p_i * (g_i - sum_j g_j p_j)
        p = self._probs
        inner = (grad_out * p).sum(axis=-1, keepdims=True)
        return p * (grad_out - inner)

    def spec(self):
        return {"kind": "softmax"}


LAYER_KINDS = {
    "dense": Dense,
    "conv2d": Conv2d,
    "maxpool2d": MaxPool2d,
    "flatten": Flatten,
    "relu": Relu,
    "softmax": Softmax,
}


def layer_from_spec(spec: dict) -> Layer:
    kind = spec.get("kind")
    if kind == "dense":
        return Dense(spec["in_features"], spec["out_features"])
    if kind == "conv2d":
        return Conv2d(spec["in_channels"], spec["out_channels"], spec["kernel_size"])
    if kind == "maxpool2d":
        return MaxPool2d(spec["pool_size"])
    if kind in ("flatten", "relu", "softmax"):
        return LAYER_KINDS[kind]()
    raise ValueError(f"unknown layer kind {kind!r}")
