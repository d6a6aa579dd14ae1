"""8x8 residual tools: SATD cost, float DCT, quantizer, coefficient code.

The transform is the separable orthonormal DCT-II (a transparent stand-in
for the integer core transform), the quantizer uses the intra deadzone
offset 1/3, and the 64 quantized levels are coded in classic zigzag order
with signed order-0 Exp-Golomb so the rate term stays decodable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# order-8 Sylvester Hadamard matrix (entries +-1)
_H2 = np.array([[1, 1], [1, -1]], dtype=np.int64)
HADAMARD8 = np.kron(np.kron(_H2, _H2), _H2)

# orthonormal DCT-II basis
_k = np.arange(8)[:, None]
_n = np.arange(8)[None, :]
DCT_BASIS = np.cos((2 * _n + 1) * _k * math.pi / 16.0) * np.where(_k == 0, 1.0, math.sqrt(2.0)) / math.sqrt(8.0)

# classic 8x8 zigzag scan: ZIGZAG[i] is the flat index of the i-th coefficient
ZIGZAG = np.array([
    0,  1,  8, 16,  9,  2,  3, 10,
    17, 24, 32, 25, 18, 11,  4,  5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13,  6,  7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
])


@dataclass
class CodecConfig:
    """Quantization parameter and the rate-control constants derived from it."""

    qp: int
    lambda_rd: float = field(init=False)
    lambda_pred: float = field(init=False)
    qstep: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.qp <= 51:
            raise ValueError(f"qp {self.qp} outside [0,51]")
        self.lambda_rd = 0.57 * 2.0 ** ((self.qp - 12) / 3.0)
        self.lambda_pred = math.sqrt(self.lambda_rd)
        self.qstep = 2.0 ** ((self.qp - 4) / 6.0)


def satd8(residual: np.ndarray) -> int:
    """Hadamard-domain sum of absolute differences, scaled down by 4."""
    r = np.asarray(residual, dtype=np.int64).reshape(8, 8)
    t = HADAMARD8 @ r @ HADAMARD8.T
    return int(np.abs(t).sum()) >> 2


def dct8(block: np.ndarray) -> np.ndarray:
    x = np.asarray(block, dtype=np.float64).reshape(8, 8)
    return DCT_BASIS @ x @ DCT_BASIS.T


def idct8(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.float64).reshape(8, 8)
    return DCT_BASIS.T @ c @ DCT_BASIS


def quantize(coeffs: np.ndarray, cfg: CodecConfig) -> np.ndarray:
    """Deadzone-quantize an 8x8 coefficient block into 64 zigzag levels."""
    c = np.asarray(coeffs, dtype=np.float64).reshape(-1)[ZIGZAG]
    levels = np.sign(c) * np.floor(np.abs(c) / cfg.qstep + 1.0 / 3.0)
    return levels.astype(np.int64)


def dequantize(levels: np.ndarray, cfg: CodecConfig) -> np.ndarray:
    """Reconstruct the 8x8 coefficient block from zigzag levels."""
    flat = np.empty(64, dtype=np.float64)
    flat[ZIGZAG] = np.asarray(levels, dtype=np.float64) * cfg.qstep
    return flat.reshape(8, 8)


def _signed_to_unsigned(v: int) -> int:
    return 2 * v - 1 if v > 0 else -2 * v


def _unsigned_to_signed(k: int) -> int:
    return (k + 1) >> 1 if k & 1 else -(k >> 1)


def exp_golomb(k: int) -> str:
    """Order-0 Exp-Golomb codeword of a nonnegative integer."""
    body = bin(k + 1)[2:]
    return "0" * (len(body) - 1) + body


def code_coeffs(levels) -> str:
    """Signed Exp-Golomb code of 64 zigzag-ordered levels."""
    return "".join(exp_golomb(_signed_to_unsigned(int(v))) for v in levels)


def decode_coeffs(bits: str, pos: int = 0):
    """Inverse of code_coeffs; returns (levels, next position)."""
    levels = np.empty(64, dtype=np.int64)
    n = len(bits)
    for i in range(64):
        zeros = 0
        while pos < n and bits[pos] == "0":
            zeros += 1
            pos += 1
        if pos + zeros + 1 > n:
            raise ValueError("truncated coefficient stream")
        k = int(bits[pos:pos + zeros + 1], 2) - 1
        pos += zeros + 1
        levels[i] = _unsigned_to_signed(k)
    return levels, pos
