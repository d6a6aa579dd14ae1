"""Four-layer fully connected network with PReLU activations.

Forward, analytic gradients, and Adam live here; everything is float64
for reproducible training and so finite-difference checks are meaningful.
The loss is the mean squared error over the batch plus an L2 penalty on
the weight matrices only (never biases or slopes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_DIMS = (320, 1024, 1024, 1024, 64)


class Mlp:
    def __init__(self, dims=DEFAULT_DIMS, seed=0, init_std=1.0, init_slope=0.25):
        if len(dims) != 5:
            raise ValueError("network needs exactly 4 layers (5 dims)")
        rng = np.random.RandomState(seed)
        self.dims = tuple(dims)
        self.weights = [rng.standard_normal((dims[i + 1], dims[i])) * init_std
                        for i in range(4)]
        self.biases = [np.zeros(dims[i + 1]) for i in range(4)]
        self.slopes = np.full(3, float(init_slope))

    def forward(self, x: np.ndarray, keep: bool = False) -> np.ndarray:
        """Batched forward pass; `keep` retains activations for backward."""
        a = np.asarray(x, dtype=np.float64)
        pre, post = [], [a]
        for i in range(4):
            z = a @ self.weights[i].T + self.biases[i]
            pre.append(z)
            a = np.where(z >= 0, z, self.slopes[i] * z) if i < 3 else z
            post.append(a)
        if keep:
            self._pre, self._post = pre, post
        return a

    def loss(self, x, y, reg_lambda: float):
        """(total, data term); data is MSE over all batch elements."""
        pred = self.forward(x)
        data = float(np.mean((pred - np.asarray(y, dtype=np.float64)) ** 2))
        reg = reg_lambda * sum(float((w ** 2).sum()) for w in self.weights)
        return data + reg, data

    def gradients(self, x, y, reg_lambda: float):
        """Analytic gradients of the loss; returns (grads dict, total loss)."""
        y = np.asarray(y, dtype=np.float64)
        pred = self.forward(x, keep=True)
        n = pred.size
        data = float(np.mean((pred - y) ** 2))
        reg = reg_lambda * sum(float((w ** 2).sum()) for w in self.weights)

        g_w = [None] * 4
        g_b = [None] * 4
        g_s = np.zeros(3)
        g = 2.0 * (pred - y) / n
        for i in range(3, -1, -1):
            if i < 3:
                z = self._pre[i]
                g_s[i] = float((g_post * np.where(z < 0, z, 0.0)).sum())
                g = g_post * np.where(z >= 0, 1.0, self.slopes[i])
            g_w[i] = g.T @ self._post[i] + 2.0 * reg_lambda * self.weights[i]
            g_b[i] = g.sum(axis=0)
            g_post = g @ self.weights[i]
        return {"w": g_w, "b": g_b, "s": g_s}, data + reg

    def quantized(self) -> "Mlp":
        """Copy whose parameters are exactly representable in float32."""
        clone = Mlp(self.dims, init_std=0.0)
        clone.weights = [w.astype(np.float32).astype(np.float64) for w in self.weights]
        clone.biases = [b.astype(np.float32).astype(np.float64) for b in self.biases]
        clone.slopes = self.slopes.astype(np.float32).astype(np.float64)
        return clone


@dataclass
class Adam:
    """Adam with the reference defaults."""

    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        self._m = None
        self._v = None
        self._t = 0

    def step(self, model: Mlp, grads, lr: float):
        params = model.weights + model.biases + [model.slopes]
        gs = grads["w"] + grads["b"] + [grads["s"]]
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        self._t += 1
        c1 = 1.0 - self.beta1 ** self._t
        c2 = 1.0 - self.beta2 ** self._t
        for p, g, m, v in zip(params, gs, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
