"""NMDS dataset reading and category routing.

A record is 320 context bytes (five reconstructed neighbor blocks in
canonical order: above-left, above, above-right, left, below-left, each
row-major), 64 target bytes, and the block's best traditional mode.
Samples route to every category whose TM range contains the best mode,
so boundary modes land in both adjacent categories.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"NMDS"
RECORD_SIZE = 385
_HEADER = struct.Struct("<4sIIQ")


def read_nmds(path):
    """Returns (contexts (N,320) u8, targets (N,64) u8, best_tm (N,) u8)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValueError("bad magic: not an NMDS dataset")
    _, version, block, count = _HEADER.unpack_from(data)
    if version != 1 or block != 8:
        raise ValueError(f"unsupported NMDS layout: version {version}, block {block}")
    if len(data) != _HEADER.size + count * RECORD_SIZE:
        raise ValueError("truncated NMDS dataset")
    raw = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    raw = raw.reshape(count, RECORD_SIZE)
    return raw[:, :320].copy(), raw[:, 320:384].copy(), raw[:, 384].copy()


def partition_sets(scheme: str, delta1: int = 2, delta2: int = 2):
    """Ordered (symbol, (lo, hi)) categories of an appending scheme."""
    if scheme == "app1":
        return (("NM1", (0, 34)),)
    if scheme == "app3":
        return (("NM3-NA", (0, 1)), ("NM3-HOR", (2, 18)), ("NM3-VER", (18, 34)))
    if scheme == "app5":
        return (("NM5-NA", (0, 1)),
                ("NM5-HOR0", (2, 10)), ("NM5-HOR1", (10, 18)),
                ("NM5-VER0", (18, 26)), ("NM5-VER1", (26, 34)))
    if scheme == "app7":
        if not (0 <= delta1 <= 7 and 0 <= delta2 <= 7):
            raise ValueError("delta out of range")
        return (("NM7-NA", (0, 1)),
                ("NM7-HOR0", (2, 9 - delta1)),
                ("NM7-HOR1", (10 - delta1, 10 + delta1)),
                ("NM7-HOR2", (11 + delta1, 18)),
                ("NM7-VER0", (18, 25 - delta2)),
                ("NM7-VER1", (26 - delta2, 26 + delta2)),
                ("NM7-VER2", (27 + delta2, 34)))
    raise ValueError(f"unknown appending scheme {scheme!r}")


def split_dataset(best_tm: np.ndarray, sets):
    """Index arrays per category; a sample joins every set containing it."""
    return {sym: np.flatnonzero((best_tm >= lo) & (best_tm <= hi))
            for sym, (lo, hi) in sets}


def dc_prediction(contexts: np.ndarray) -> np.ndarray:
    """Flat DC baseline with the 8x8 boundary filter, from raw contexts."""
    n = contexts.shape[0]
    blocks = contexts.reshape(n, 5, 8, 8).astype(np.int64)
    top = blocks[:, 1, 7, :]      # bottom row of the above block
    left = blocks[:, 3, :, 7]     # right column of the left block
    dc = (top.sum(axis=1) + left.sum(axis=1) + 8) >> 4
    pred = np.repeat(dc[:, None], 64, axis=1).reshape(n, 8, 8)
    pred[:, 0, 1:] = (top[:, 1:] + 3 * dc[:, None] + 2) >> 2
    pred[:, 1:, 0] = (left[:, 1:] + 3 * dc[:, None] + 2) >> 2
    pred[:, 0, 0] = (left[:, 0] + 2 * dc + top[:, 0] + 2) >> 2
    return pred.reshape(n, 64)


def holdout_split(count: int, holdout_fraction: float = 0.2, seed: int = 0):
    """Deterministic (train_idx, holdout_idx) permutation split."""
    rng = np.random.RandomState(seed)
    order = rng.permutation(count)
    n_hold = max(1, int(count * holdout_fraction))
    return order[n_hold:], order[:n_hold]
