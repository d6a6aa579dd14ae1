"""Training loop: per-epoch learning-rate schedule, seeded shuffling.

Defaults follow the published recipe: L2 weight 0.0005, batch 16, Adam
with its reference settings, learning rate 1e-4 decayed by 10 and 100
over three epochs, weights drawn from a unit normal, biases zero, PReLU
slopes 0.25.  Desk-scale overrides (width, step caps, init scale) are
plain config fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mlp import DEFAULT_DIMS, Adam, Mlp


@dataclass
class TrainerConfig:
    dims: tuple = DEFAULT_DIMS
    reg_lambda: float = 0.0005
    batch_size: int = 16
    lr_schedule: tuple = (1e-4, 1e-5, 1e-6)
    epochs: int = 3
    seed: int = 0
    init_std: float = 1.0
    init_slope: float = 0.25
    max_steps_per_epoch: int | None = None
    log: list = field(default_factory=list)


def train(contexts: np.ndarray, targets: np.ndarray, cfg: TrainerConfig) -> Mlp:
    """Train one neural mode on raw 8-bit samples (normalized here by 255)."""
    if len(contexts) == 0:
        raise ValueError("empty category: nothing to train")
    x = np.asarray(contexts, dtype=np.float64) / 255.0
    y = np.asarray(targets, dtype=np.float64) / 255.0
    if x.shape[1] != cfg.dims[0] or y.shape[1] != cfg.dims[-1]:
        raise ValueError("sample size does not match the network dimensions")

    model = Mlp(cfg.dims, seed=cfg.seed, init_std=cfg.init_std,
                init_slope=cfg.init_slope)
    opt = Adam()
    rng = np.random.RandomState(cfg.seed + 1)
    n = len(x)
    for epoch in range(cfg.epochs):
        lr = cfg.lr_schedule[min(epoch, len(cfg.lr_schedule) - 1)]
        order = rng.permutation(n)
        steps = (n + cfg.batch_size - 1) // cfg.batch_size
        if cfg.max_steps_per_epoch is not None:
            steps = min(steps, cfg.max_steps_per_epoch)
        for s in range(steps):
            idx = order[s * cfg.batch_size:(s + 1) * cfg.batch_size]
            if len(idx) == 0:
                break
            grads, loss = model.gradients(x[idx], y[idx], cfg.reg_lambda)
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"training diverged at epoch {epoch} step {s}: loss {loss}")
            opt.step(model, grads, lr)
            cfg.log.append(loss)
    return model


def data_term(model: Mlp, contexts: np.ndarray, targets: np.ndarray) -> float:
    """Mean squared error of the model on raw 8-bit samples, 255-normalized."""
    x = np.asarray(contexts, dtype=np.float64) / 255.0
    y = np.asarray(targets, dtype=np.float64) / 255.0
    pred = model.forward(x)
    return float(np.mean((pred - y) ** 2))
