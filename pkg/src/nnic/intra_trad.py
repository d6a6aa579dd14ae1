"""The 35 traditional intra prediction modes for 8x8 blocks.

Mode 0 is Planar, mode 1 is DC, modes 2-34 are angular; 10 is pure
horizontal and 26 pure vertical.  Formulas follow the HEVC standard:
1/32-pel projection with linear interpolation, [1 2 1]/4 reference
smoothing for the modes far from both pure directions, and the DC /
pure-direction boundary filters that apply at the 8x8 size.
"""

from __future__ import annotations

import numpy as np

# HEVC Table 8-5 prediction angles for modes 2..34, in 1/32-pel units.
ANGLES = (
    32, 26, 21, 17, 13, 9, 5, 2, 0,
    -2, -5, -9, -13, -17, -21, -26, -32,
    -26, -21, -17, -13, -9, -5, -2, 0,
    2, 5, 9, 13, 17, 21, 26, 32,
)

# round(8192 / |angle|) used to extend the main reference for negative angles.
INV_ANGLE = {2: 4096, 5: 1638, 9: 910, 13: 630, 17: 482, 21: 390, 26: 315, 32: 256}

HOR_MODE = 10
VER_MODE = 26


def needs_smoothing(mode: int) -> bool:
    """[1 2 1] smoothing applies at 8x8 for Planar and modes 2, 18, 34."""
    if mode == 1:
        return False
    if mode == 0:
        return True
    return min(abs(mode - HOR_MODE), abs(mode - VER_MODE)) > 7


def smooth_reference(refs: np.ndarray, mode: int) -> np.ndarray:
    """3-tap smoothing of the 33-sample reference array, endpoints copied."""
    refs = np.asarray(refs, dtype=np.int32)
    if not needs_smoothing(mode):
        return refs.copy()
    out = refs.copy()
    out[1:-1] = (refs[:-2] + 2 * refs[1:-1] + refs[2:] + 2) >> 2
    return out


def _top(refs):
    return np.asarray(refs[17:25], dtype=np.int32)


def _left(refs):
    # left run stored bottom-most first; index here top to bottom
    return np.asarray(refs[15:7:-1], dtype=np.int32)


def predict_planar(refs: np.ndarray) -> np.ndarray:
    top = _top(refs)
    left = _left(refs)
    top_right = int(refs[25])
    bottom_left = int(refs[7])
    x = np.arange(8)
    y = np.arange(8)[:, None]
    hor = (7 - x)[None, :] * left[:, None] + (x + 1)[None, :] * top_right
    ver = (7 - y) * top[None, :] + (y + 1) * bottom_left
    return ((hor + ver + 8) >> 4).astype(np.uint8)


def predict_dc(refs: np.ndarray) -> np.ndarray:
    top = _top(refs)
    left = _left(refs)
    dc = (int(top.sum()) + int(left.sum()) + 8) >> 4
    pred = np.full((8, 8), dc, dtype=np.int32)
    # boundary filtering for luma 8x8
    pred[0, 1:] = (top[1:] + 3 * dc + 2) >> 2
    pred[1:, 0] = (left[1:] + 3 * dc + 2) >> 2
    pred[0, 0] = (left[0] + 2 * dc + top[0] + 2) >> 2
    return pred.astype(np.uint8)


def predict_angular(refs: np.ndarray, mode: int) -> np.ndarray:
    if not 2 <= mode <= 34:
        raise ValueError(f"angular mode {mode} outside [2,34]")
    refs = np.asarray(refs, dtype=np.int32)
    angle = ANGLES[mode - 2]
    vertical = mode >= 18
    # main[0] is the corner followed by the prediction-side run; side runs
    # down the other edge.
    main = refs[16:] if vertical else refs[16::-1]
    side = refs[16::-1] if vertical else refs[16:]

    OFF = 8
    ref = np.zeros(25, dtype=np.int32)  # logical indices -8..16
    ref[OFF:] = main
    if angle < 0:
        inv = INV_ANGLE[-angle]
        acc = 128
        for k in range(-1, ((8 * angle) >> 5) - 1, -1):
            acc += inv
            ref[OFF + k] = side[acc >> 8]

    pred = np.empty((8, 8), dtype=np.int32)
    for j in range(8):
        delta = (j + 1) * angle
        idx = delta >> 5
        fact = delta & 31
        base = OFF + idx + 1
        if fact:
            pred[j] = ((32 - fact) * ref[base:base + 8]
                       + fact * ref[base + 1:base + 9] + 16) >> 5
        else:
            pred[j] = ref[base:base + 8]
    if not vertical:
        pred = pred.T.copy()

    if mode in (HOR_MODE, VER_MODE):
        top = _top(refs)
        left = _left(refs)
        corner = int(refs[16])
        if mode == VER_MODE:
            pred[:, 0] = np.clip(top[0] + ((left - corner) >> 1), 0, 255)
        else:
            pred[0, :] = np.clip(left[0] + ((top - corner) >> 1), 0, 255)
    return pred.astype(np.uint8)


def predict_tm(refs: np.ndarray, mode: int) -> np.ndarray:
    """Predict an 8x8 block with traditional mode `mode` (0..34).

    Applies the reference smoothing rule, then dispatches to the Planar,
    DC, or angular predictor.
    """
    if not 0 <= mode <= 34:
        raise ValueError(f"mode {mode} outside [0,34]")
    smoothed = smooth_reference(refs, mode)
    if mode == 0:
        return predict_planar(smoothed)
    if mode == 1:
        return predict_dc(smoothed)
    return predict_angular(smoothed, mode)
