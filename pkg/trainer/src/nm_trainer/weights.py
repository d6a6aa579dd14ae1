"""NMWT weight-file export with an independent verification pass.

Layout (little-endian): magic "NMWT", u32 version=1, u32 layer count=4,
then per layer u32 in_dim, u32 out_dim, f32 W row-major (out x in),
f32 B; finally 3 x f32 PReLU slopes.  Exports are verified by reloading
the file with the separate parser below and re-running a forward pass.
"""

from __future__ import annotations

import struct

import numpy as np

from .mlp import Mlp

MAGIC = b"NMWT"
VERSION = 1


def serialize(model: Mlp) -> bytes:
    parts = [MAGIC, struct.pack("<II", VERSION, 4)]
    for w, b in zip(model.weights, model.biases):
        parts.append(struct.pack("<II", w.shape[1], w.shape[0]))
        parts.append(np.ascontiguousarray(w, dtype="<f4").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f4").tobytes())
    parts.append(np.ascontiguousarray(model.slopes, dtype="<f4").tobytes())
    return b"".join(parts)


def parse_nmwt(path):
    """Independent minimal reader: (weights, biases, slopes) as float32."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValueError("bad magic")
    version, n_layers = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    pos = 12
    weights, biases = [], []
    for _ in range(n_layers):
        in_dim, out_dim = struct.unpack_from("<II", data, pos)
        pos += 8
        w = np.frombuffer(data, dtype="<f4", count=in_dim * out_dim, offset=pos)
        pos += 4 * in_dim * out_dim
        b = np.frombuffer(data, dtype="<f4", count=out_dim, offset=pos)
        pos += 4 * out_dim
        weights.append(w.reshape(out_dim, in_dim).copy())
        biases.append(b.copy())
    slopes = np.frombuffer(data, dtype="<f4", count=3, offset=pos).copy()
    return weights, biases, slopes


def forward_parsed(weights, biases, slopes, x):
    """Forward pass on parsed float32 parameters, float64 arithmetic."""
    v = np.asarray(x, dtype=np.float64)
    for i in range(len(weights)):
        v = v @ weights[i].astype(np.float64).T + biases[i].astype(np.float64)
        if i < len(weights) - 1:
            v = np.where(v >= 0, v, float(slopes[i]) * v)
    return v


def export_weights(model: Mlp, path, verify_seed: int = 0, tolerance: float = 1e-4):
    """Write the NMWT file, then reload and cross-check one forward pass."""
    with open(path, "wb") as fh:
        fh.write(serialize(model))
    weights, biases, slopes = parse_nmwt(path)
    rng = np.random.RandomState(verify_seed)
    x = rng.rand(4, model.dims[0])
    want = model.quantized().forward(x)
    got = forward_parsed(weights, biases, slopes, x)
    err = np.abs(got - want).max()
    if err > tolerance:
        raise RuntimeError(f"export verification failed: max error {err:g}")
