"""Neural prediction modes: 4-layer fully connected inference and weights I/O.

A network maps the flattened five-block reference context (320 samples,
normalized by 255) through three 1024-wide hidden layers with per-layer
PReLU activations to the 64 predicted samples (de-normalized by 255,
rounded half-up, clamped).

Weight files ("NMWT", little-endian) are the byte-exact contract with the
trainer: magic, u32 version=1, u32 layer count=4, then per layer u32
in_dim, u32 out_dim, f32 W row-major (out x in), f32 B, and finally the
three f32 PReLU slopes.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"NMWT"
VERSION = 1
DIMS = (320, 1024, 1024, 1024, 64)
N_LAYERS = 4

# Every neural-mode symbol any scheme can ask for.
NM_SYMBOLS = (
    "NM1",
    "NM3-NA", "NM3-HOR", "NM3-VER",
    "NM5-NA", "NM5-HOR0", "NM5-HOR1", "NM5-VER0", "NM5-VER1",
    "NM7-NA", "NM7-HOR0", "NM7-HOR1", "NM7-HOR2", "NM7-VER0", "NM7-VER1", "NM7-VER2",
)


@dataclass
class NetworkModel:
    """Weights of one neural mode; float32 storage, float64 arithmetic."""

    weights: list      # 4 matrices (out, in) float32
    biases: list       # 4 vectors (out,) float32
    slopes: np.ndarray  # 3 PReLU slope scalars float32

    def __post_init__(self):
        dims = tuple(w.shape[1] for w in self.weights) + (self.weights[-1].shape[0],)
        if len(self.weights) != N_LAYERS or dims != DIMS:
            raise ValueError(f"dimension chain mismatch: {dims}, expected {DIMS}")
        for w, b in zip(self.weights, self.biases):
            if b.shape != (w.shape[0],):
                raise ValueError("bias length does not match layer output")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ValueError("non-finite values in weights")
        if self.slopes.shape != (3,) or not np.isfinite(self.slopes).all():
            raise ValueError("need exactly 3 finite PReLU slopes")
        self._layers64 = None
        self._digest = None

    def layers64(self):
        """Float64 copies of the float32 parameters, converted once."""
        if self._layers64 is None:
            self._layers64 = [(w.astype(np.float64), b.astype(np.float64))
                              for w, b in zip(self.weights, self.biases)]
        return self._layers64

    def predict(self, context) -> np.ndarray:
        return forward(self, context)

    def digest(self) -> int:
        """64-bit digest of the canonical serialized bytes."""
        if self._digest is None:
            h = hashlib.sha256(serialize_model(self)).digest()
            self._digest = int.from_bytes(h[:8], "little")
        return self._digest


def prelu(v: np.ndarray, slope: float) -> np.ndarray:
    return np.where(v >= 0, v, slope * v)


def forward_raw(model: NetworkModel, x: np.ndarray) -> np.ndarray:
    """Raw network output for a 320-vector input, before de-normalization."""
    v = np.asarray(x, dtype=np.float64)
    for i, (w, b) in enumerate(model.layers64()):
        v = w @ v + b
        if i < N_LAYERS - 1:
            v = prelu(v, float(model.slopes[i]))
    return v


def forward(model: NetworkModel, context) -> np.ndarray:
    """Predict the 8x8 block from a five-block reference context."""
    x = context.flatten().astype(np.float64) / 255.0
    y = forward_raw(model, x) * 255.0
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8).reshape(8, 8)


def serialize_model(model: NetworkModel) -> bytes:
    parts = [MAGIC, struct.pack("<II", VERSION, N_LAYERS)]
    for w, b in zip(model.weights, model.biases):
        parts.append(struct.pack("<II", w.shape[1], w.shape[0]))
        parts.append(np.ascontiguousarray(w, dtype="<f4").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f4").tobytes())
    parts.append(np.ascontiguousarray(model.slopes, dtype="<f4").tobytes())
    return b"".join(parts)


def save_weights(model: NetworkModel, path):
    with open(path, "wb") as fh:
        fh.write(serialize_model(model))


def load_weights(path) -> NetworkModel:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_model(data)


def _take(data: bytes, pos: int, n: int) -> int:
    if pos + n > len(data):
        raise ValueError("truncated NMWT weight file")
    return pos + n


def parse_model(data: bytes) -> NetworkModel:
    if data[:4] != MAGIC:
        raise ValueError("bad magic: not an NMWT weight file")
    pos = _take(data, 4, 8)
    version, n_layers = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise ValueError(f"unsupported NMWT version {version}")
    if n_layers != N_LAYERS:
        raise ValueError(f"dimension chain mismatch: {n_layers} layers")
    weights, biases = [], []
    for _ in range(n_layers):
        end = _take(data, pos, 8)
        in_dim, out_dim = struct.unpack_from("<II", data, pos)
        pos = end
        pos = _take(data, pos, 4 * in_dim * out_dim)
        w = np.frombuffer(data, dtype="<f4", count=in_dim * out_dim,
                          offset=pos - 4 * in_dim * out_dim)
        pos0 = pos
        pos = _take(data, pos, 4 * out_dim)
        b = np.frombuffer(data, dtype="<f4", count=out_dim, offset=pos0)
        weights.append(w.reshape(out_dim, in_dim).copy())
        biases.append(b.copy())
    pos0 = pos
    pos = _take(data, pos, 12)
    slopes = np.frombuffer(data, dtype="<f4", count=3, offset=pos0)
    return NetworkModel(weights, biases, slopes.copy())


def model_filename(symbol: str) -> str:
    return symbol.lower() + ".nmwt"


def load_registry(models_dir, symbols) -> dict:
    """Load one model per required symbol from a directory of .nmwt files."""
    registry = {}
    for sym in symbols:
        path = os.path.join(str(models_dir), model_filename(sym))
        if not os.path.exists(path):
            raise ValueError(f"missing model: {sym}")
        registry[sym] = load_weights(path)
    return registry


def registry_digest(models: dict, symbols) -> int:
    """Order-independent digest of the models a scheme requires."""
    if not symbols:
        return 0
    h = hashlib.sha256()
    for sym in sorted(symbols):
        h.update(sym.encode())
        h.update(models[sym].digest().to_bytes(8, "little"))
    return int.from_bytes(h.digest()[:8], "little")
