"""Mode signaling: MPM derivation, luma/chroma mode binarization.

A mode is either an int in [0,34] (traditional mode, or the slot an NM
occupies under a substitution scheme) or an NM symbol string such as
"NM3-HOR" (appending schemes only).  Bin strings are plain '0'/'1'
strings; every bin counts as one bit under the bypass rate model.

Luma coding: appending schemes send an nn_flag first (1 = neural mode)
followed, for more than one NM, by the nn_mode code below; traditional
modes then use the standard layout: prev_intra_luma_pred_flag, truncated
unary mpm_idx {0,10,11}, or a 5-bit rank over the 32 non-MPM modes.
"""

from __future__ import annotations

from .mode_space import ModePartition, Scheme

# nn_mode codewords per appending scheme size; higher-probability NMs get
# shorter codes.
NM_CODES = {
    1: {"NM1": ""},
    3: {"NM3-NA": "1", "NM3-HOR": "01", "NM3-VER": "00"},
    5: {"NM5-NA": "1",
        "NM5-HOR0": "011", "NM5-HOR1": "010",
        "NM5-VER0": "000", "NM5-VER1": "001"},
    7: {"NM7-NA": "1",
        "NM7-HOR0": "0011", "NM7-HOR1": "011", "NM7-HOR2": "0010",
        "NM7-VER0": "0000", "NM7-VER1": "010", "NM7-VER2": "0001"},
}

_NM_DECODE = {n: {v: k for k, v in codes.items()} for n, codes in NM_CODES.items()}

MPM_IDX_CODES = ("0", "10", "11")

CHROMA_CODES = ("0", "100", "101", "110", "111")

DC = 1

_APPENDING = frozenset((Scheme.APP1, Scheme.APP3, Scheme.APP5, Scheme.APP7))
_RANK5 = tuple(format(i, "05b") for i in range(32))


def mpm_baseline(left, above):
    """Standard 3-entry MPM set from the left/above best modes."""
    pl = DC if left is None else left
    pa = DC if above is None else above
    if pl == pa:
        if pl < 2:
            return (0, 1, 26)
        return (pl, 2 + ((pl + 29) % 32), 2 + ((pl - 2 + 1) % 32))
    for extra in (0, 1, 26):
        if extra != pl and extra != pa:
            return (pl, pa, extra)
    raise AssertionError("unreachable")


def mpm_substitution_low(left, above, tms: int):
    """MPM rule near a substituted low-probability slot, as pseudocoded.

    Only the equal-neighbors case changes: the slot itself maps to
    {slot, Planar, DC} and its angular neighbors skip over the slot.
    """
    pl = DC if left is None else left
    pa = DC if above is None else above
    if pl == pa:
        if pl == tms:
            return (pl, 0, 1)
        if pl == tms - 1:
            return (pl, pl - 1, pl + 2)
        if pl == tms + 1:
            return (pl, pl - 2, pl + 1)
    return mpm_baseline(left, above)


def _wrap_angular(m: int) -> int:
    return m if m <= 34 else 2 + ((m - 2) % 32)


def mpm_for_scheme(left, above, partition: ModePartition):
    """Scheme-aware MPM derivation with entries kept inside [0,34].

    The low-substitution rule can step one past mode 34; such entries wrap
    like angular neighbors so the non-MPM rank stays a 5-bit code.
    """
    if partition.scheme in (Scheme.SUBL1, Scheme.SUBL3):
        pl = DC if left is None else left
        pa = DC if above is None else above
        if pl == pa:
            for tms, _ in partition.substitutions:
                if pl in (tms - 1, tms, tms + 1):
                    mpm = tuple(_wrap_angular(m)
                                for m in mpm_substitution_low(pl, pa, tms))
                    assert len(set(mpm)) == 3
                    return mpm
    return mpm_baseline(left, above)


def _encode_tm(best: int, mpm) -> str:
    if best == mpm[0]:
        return "10"
    if best == mpm[1]:
        return "110"
    if best == mpm[2]:
        return "111"
    rank = best - (mpm[0] < best) - (mpm[1] < best) - (mpm[2] < best)
    return "0" + _RANK5[rank]


def encode_luma_mode(best, mpm, scheme: Scheme) -> str:
    """Binarize the best luma mode given the MPM set."""
    if scheme in _APPENDING:
        if isinstance(best, str):
            return "1" + NM_CODES[scheme.n_nms][best]
        return "0" + _encode_tm(best, mpm)
    if isinstance(best, str):
        raise ValueError(f"NM symbol {best} illegal under {scheme.value}")
    return _encode_tm(best, mpm)


def decode_luma_mode(bits: str, mpm, scheme: Scheme, pos: int = 0):
    """Inverse of encode_luma_mode; returns (mode, next position)."""
    n = len(bits)
    if scheme in _APPENDING:
        if pos >= n:
            raise ValueError("exhausted bits")
        nn_flag = bits[pos]
        pos += 1
        if nn_flag == "1":
            n_nms = scheme.n_nms
            if n_nms == 1:
                return "NM1", pos
            table = _NM_DECODE[n_nms]
            acc = ""
            while acc not in table:
                if len(acc) > 4:
                    raise ValueError("invalid nn_mode prefix")
                if pos >= n:
                    raise ValueError("exhausted bits")
                acc += bits[pos]
                pos += 1
            return table[acc], pos
    if pos >= n:
        raise ValueError("exhausted bits")
    if bits[pos] == "1":
        if pos + 1 >= n:
            raise ValueError("exhausted bits")
        if bits[pos + 1] == "0":
            return mpm[0], pos + 2
        if pos + 2 >= n:
            raise ValueError("exhausted bits")
        return (mpm[1] if bits[pos + 2] == "0" else mpm[2]), pos + 3
    if pos + 6 > n:
        raise ValueError("exhausted bits")
    mode = int(bits[pos + 1:pos + 6], 2)
    a, b, c = mpm
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
        if a > b:
            a, b = b, a
    if mode >= a:
        mode += 1
    if mode >= b:
        mode += 1
    if mode >= c:
        mode += 1
    return mode, pos + 6


def _read(bits: str, pos: int, n: int):
    if pos + n > len(bits):
        raise ValueError("exhausted bits")
    return bits[pos:pos + n], pos + n


def mode_bits(best, mpm, scheme: Scheme) -> int:
    """Bin count of encode_luma_mode without building the string."""
    if isinstance(best, str):
        return 1 + len(NM_CODES[scheme.n_nms][best])
    base = 2 if best == mpm[0] else 3 if best in (mpm[1], mpm[2]) else 6
    return base + 1 if scheme in _APPENDING else base


def best_tm_for_mpm(best_nm: str, mpm, scheme: Scheme) -> int:
    """Traditional mode recorded for MPM purposes when an NM wins.

    The single appended NM inherits MPM0; directional NMs record the pure
    direction of their class and non-directional ones record Planar.
    """
    if not isinstance(best_nm, str):
        raise ValueError("best mode is not an NM")
    if scheme is Scheme.APP1:
        return mpm[0]
    cls = best_nm.split("-", 1)[1]
    if cls.startswith("NA"):
        return 0
    return 10 if cls.startswith("HOR") else 26


def derived_chroma_mode(best_luma, scheme: Scheme, mpm0=None):
    """Mode derived from the luma decision for chroma prediction.

    Traditional modes (and substituted slots) derive themselves; the single
    appended NM derives the block's MPM0; every other NM derives itself.
    """
    if isinstance(best_luma, int):
        return best_luma
    if scheme is Scheme.APP1:
        if mpm0 is None:
            raise ValueError("deriving chroma mode for NM1 requires MPM0")
        return mpm0
    return best_luma


def chroma_candidates(derived):
    """Five-entry chroma candidate list for a derived luma mode."""
    fixed = [0, 1, 26, 10]
    if isinstance(derived, int) and derived in fixed:
        return fixed + [34]
    return fixed + [derived]


def encode_chroma_mode(candidates, mode) -> str:
    return CHROMA_CODES[candidates.index(mode)]


def decode_chroma_mode(bits: str, candidates, pos: int = 0):
    b, pos = _read(bits, pos, 1)
    if b == "0":
        return candidates[0], pos
    raw, pos = _read(bits, pos, 2)
    return candidates[1 + int(raw, 2)], pos
