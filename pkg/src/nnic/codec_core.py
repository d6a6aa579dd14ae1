"""Rate-distortion mode decision, frame encode/decode, bitstream framing.

Blocks are coded in raster order.  Per block the encoder builds a
candidate list (8 SATD-best traditional modes, up to two absent MPMs,
then the scheme's neural modes), evaluates the full RD cost of each
candidate, and emits the winner's mode bins followed by the 64 coded
coefficient levels.  The decoder replays the decisions and reproduces
the encoder reconstruction exactly.

Bitstream layout (little-endian header, then MSB-first packed bins):
magic "NNIC", u8 version, u32 width, u32 height, u8 qp, u8 scheme,
u8 delta1, u8 delta2, u64 model digest.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import intra_trad, nn_mode, signaling
from .block_model import (BLOCK, Frame, extract_ref_array,
                          extract_reference_context)
from .mode_space import ModePartition, Scheme, partition_for_scheme
from .residual_codec import (CodecConfig, code_coeffs, decode_coeffs, dct8,
                             dequantize, idct8, quantize, satd8)

MAGIC = b"NNIC"
VERSION = 1
_HEADER = struct.Struct("<4sBIIBBBBQ")


@dataclass
class BlockDecision:
    best_mode: object          # int TM index or NM symbol string
    best_tm_for_mpm: int
    rd_cost: float
    mode_bits: int
    resid_bits: int
    distortion_sse: int
    recon: np.ndarray
    bins: str
    candidate_costs: dict = field(default_factory=dict)


@dataclass
class FrameStats:
    width: int
    height: int
    qp: int
    scheme: Scheme
    blocks: int = 0
    mode_counts: dict = field(default_factory=dict)
    nm_best_blocks: int = 0
    total_bits: int = 0
    mode_bits: int = 0
    resid_bits: int = 0
    total_rd_cost: float = 0.0
    psnr: float = 0.0
    per_block: list = field(default_factory=list)

    @property
    def nm_ratio(self) -> float:
        return self.nm_best_blocks / self.blocks if self.blocks else 0.0

    def report(self) -> str:
        lines = [
            f"width {self.width}",
            f"height {self.height}",
            f"qp {self.qp}",
            f"scheme {self.scheme.value}",
            f"blocks {self.blocks}",
            f"total_bits {self.total_bits}",
            f"mode_bits {self.mode_bits}",
            f"resid_bits {self.resid_bits}",
            f"psnr {self.psnr:.4f}" if math.isfinite(self.psnr) else "psnr inf",
            f"nm_ratio {self.nm_ratio:.6f}",
            f"rd_cost {self.total_rd_cost:.4f}",
        ]
        for name in sorted(self.mode_counts):
            lines.append(f"mode {name} {self.mode_counts[name]}")
        return "\n".join(lines) + "\n"


def mode_name(mode, partition: ModePartition) -> str:
    """Reporting name: substituted slots count as their neural mode."""
    if isinstance(mode, str):
        return mode.lower()
    if mode in partition.substituted:
        return partition.symbol_for_slot(mode).lower()
    return f"tm{mode}"


def _pack_bits(bits: str) -> bytes:
    pad = (-len(bits)) % 8
    bits += "0" * pad
    return int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""


def _unpack_bits(data: bytes) -> str:
    if not data:
        return ""
    return bin(int.from_bytes(data, "big"))[2:].zfill(len(data) * 8)


class _BlockContext:
    """Lazy per-block access to the five-block context (NM input only).

    Predictions are cached per model object: distinct scheme symbols may
    share one network, and a block never needs the same forward twice.
    """

    def __init__(self, recon: Frame, bx: int, by: int):
        self._recon = recon
        self._bx = bx
        self._by = by
        self._ctx = None
        self._preds = {}

    def get(self):
        if self._ctx is None:
            self._ctx = extract_reference_context(self._recon, self._bx, self._by)
        return self._ctx

    def predict(self, model):
        key = id(model)
        if key not in self._preds:
            self._preds[key] = model.predict(self.get())
        return self._preds[key]


def build_candidates(scheme: Scheme, partition: ModePartition, refs,
                     original, mpm, cfg: CodecConfig, tm_preds: dict):
    """Ordered unique candidate modes for one block.

    tm_preds must hold the prediction of every unsubstituted traditional
    mode; the SATD ranking keeps the best eight of those, then up to two
    missing MPMs are appended, then the scheme's neural modes (substituted
    high-probability slots only ever arrive via the MPM set).
    """
    orig = original.astype(np.int64)
    scored = []
    for m in range(35):
        if m in partition.substituted:
            continue
        cost = satd8(orig - tm_preds[m]) + cfg.lambda_pred * signaling.mode_bits(m, mpm, scheme)
        scored.append((cost, m))
    scored.sort()
    cands = [m for _, m in scored[:8]]

    added = 0
    for m in mpm:
        if added == 2:
            break
        if m not in cands:
            cands.append(m)
            added += 1

    if scheme.is_appending:
        cands.extend(partition.nm_symbols)
    elif scheme in (Scheme.SUBL1, Scheme.SUBL3):
        for t, _ in partition.substitutions:
            if t not in cands:
                cands.append(t)
    return cands


def _predict(mode, partition, models, tm_preds, block_context):
    if isinstance(mode, str):
        return block_context.predict(models[mode])
    if mode in partition.substituted:
        return block_context.predict(models[partition.symbol_for_slot(mode)])
    return tm_preds[mode]


def rd_evaluate(mode, original, pred, mpm, scheme: Scheme, cfg: CodecConfig) -> BlockDecision:
    """Full rate-distortion evaluation of one candidate mode."""
    residual = original.astype(np.int64) - pred.astype(np.int64)
    levels = quantize(dct8(residual), cfg)
    coeff_bits = code_coeffs(levels)
    rec_res = idct8(dequantize(levels, cfg))
    recon = np.clip(np.floor(pred + rec_res + 0.5), 0, 255).astype(np.uint8)
    sse = int(((original.astype(np.int64) - recon) ** 2).sum())
    mode_bin = signaling.encode_luma_mode(mode, mpm, scheme)
    rd = sse + cfg.lambda_rd * (len(mode_bin) + len(coeff_bits))
    return BlockDecision(
        best_mode=mode, best_tm_for_mpm=-1, rd_cost=rd,
        mode_bits=len(mode_bin), resid_bits=len(coeff_bits),
        distortion_sse=sse, recon=recon, bins=mode_bin + coeff_bits)


def decision_key(rd_cost: float, mode, nm_rank: dict):
    """Winner ordering: cost first, ties prefer TMs, then lower index/symbol."""
    if isinstance(mode, str):
        return (rd_cost, 1, nm_rank[mode])
    return (rd_cost, 0, mode)


def encode_block(scheme, partition, refs, original, mpm, models, cfg,
                 tm_preds, block_context) -> BlockDecision:
    """Pick the RD-optimal candidate; ties prefer TMs, then lower order."""
    cands = build_candidates(scheme, partition, refs, original, mpm, cfg, tm_preds)
    nm_rank = {sym: i for i, sym in enumerate(partition.nm_symbols)}
    best = None
    best_key = None
    costs = {}
    for mode in cands:
        pred = _predict(mode, partition, models, tm_preds, block_context)
        dec = rd_evaluate(mode, original, pred, mpm, scheme, cfg)
        costs[mode_name(mode, partition)] = dec.rd_cost
        key = decision_key(dec.rd_cost, mode, nm_rank)
        if best_key is None or key < best_key:
            best, best_key = dec, key
    if isinstance(best.best_mode, str):
        best.best_tm_for_mpm = signaling.best_tm_for_mpm(best.best_mode, mpm, scheme)
    else:
        best.best_tm_for_mpm = best.best_mode
    best.candidate_costs = costs
    return best


def _required_symbols(partition: ModePartition):
    return partition.nm_symbols


def _check_models(scheme, partition, models):
    symbols = _required_symbols(partition)
    if not symbols:
        return 0
    if models is None:
        raise ValueError(f"missing model: {symbols[0]}")
    for sym in symbols:
        if sym not in models:
            raise ValueError(f"missing model: {sym}")
    return nn_mode.registry_digest(models, symbols)


def encode_frame(frame: Frame, scheme: Scheme, cfg: CodecConfig, models=None,
                 delta1: int = 2, delta2: int = 2, block_hook=None,
                 collect_blocks: bool = False):
    """Encode a frame; returns (bitstream bytes, reconstruction, stats)."""
    partition = partition_for_scheme(scheme, delta1, delta2)
    digest = _check_models(scheme, partition, models)

    recon = Frame(frame.width, frame.height,
                  np.zeros((frame.height, frame.width), dtype=np.uint8))
    best_tm_grid = np.full((frame.blocks_y, frame.blocks_x), -1, dtype=np.int32)
    stats = FrameStats(frame.width, frame.height, cfg.qp, scheme)
    body = []

    for by in range(frame.blocks_y):
        for bx in range(frame.blocks_x):
            left = best_tm_grid[by, bx - 1] if bx > 0 else None
            above = best_tm_grid[by - 1, bx] if by > 0 else None
            mpm = signaling.mpm_for_scheme(
                None if left is None else int(left),
                None if above is None else int(above), partition)
            refs = extract_ref_array(recon, bx, by)
            original = frame.block(bx, by)
            tm_preds = {m: intra_trad.predict_tm(refs.values, m)
                        for m in range(35) if m not in partition.substituted}
            block_context = _BlockContext(recon, bx, by)
            dec = encode_block(scheme, partition, refs, original, mpm,
                               models, cfg, tm_preds, block_context)

            recon.samples[by * BLOCK:(by + 1) * BLOCK,
                          bx * BLOCK:(bx + 1) * BLOCK] = dec.recon
            best_tm_grid[by, bx] = dec.best_tm_for_mpm
            body.append(dec.bins)

            name = mode_name(dec.best_mode, partition)
            stats.blocks += 1
            stats.mode_counts[name] = stats.mode_counts.get(name, 0) + 1
            if isinstance(dec.best_mode, str) or dec.best_mode in partition.substituted:
                stats.nm_best_blocks += 1
            stats.mode_bits += dec.mode_bits
            stats.resid_bits += dec.resid_bits
            stats.total_rd_cost += dec.rd_cost
            if collect_blocks:
                stats.per_block.append(dec)
            if block_hook is not None:
                block_hook(bx=bx, by=by, refs=refs, original=original,
                           context=block_context.get(), decision=dec,
                           tm_preds=tm_preds, mpm=mpm)

    header = _HEADER.pack(MAGIC, VERSION, frame.width, frame.height,
                          cfg.qp, scheme.wire_id, delta1, delta2, digest)
    payload = header + _pack_bits("".join(body))
    stats.total_bits = len(payload) * 8
    mse = float(((frame.samples.astype(np.float64) - recon.samples) ** 2).mean())
    stats.psnr = math.inf if mse == 0 else 10.0 * math.log10(255.0 ** 2 / mse)
    return payload, recon, stats


def parse_header(data: bytes):
    """Header fields of a bitstream: (width, height, qp, scheme, d1, d2, digest)."""
    if len(data) < _HEADER.size:
        raise ValueError("malformed stream: short header")
    magic, version, w, h, qp, scheme_id, d1, d2, digest = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError("malformed stream: bad magic")
    if version != VERSION:
        raise ValueError(f"malformed stream: version {version}")
    return w, h, qp, Scheme.from_wire_id(scheme_id), d1, d2, digest


def decode_frame(data: bytes, models=None) -> Frame:
    """Decode a bitstream back to the encoder's reconstruction."""
    w, h, qp, scheme, d1, d2, digest = parse_header(data)
    partition = partition_for_scheme(scheme, d1, d2)
    cfg = CodecConfig(qp)
    have = _check_models(scheme, partition, models)
    if have != digest:
        raise ValueError("model digest mismatch")

    recon = Frame(w, h, np.zeros((h, w), dtype=np.uint8))
    best_tm_grid = np.full((recon.blocks_y, recon.blocks_x), -1, dtype=np.int32)
    bits = _unpack_bits(data[_HEADER.size:])
    pos = 0

    for by in range(recon.blocks_y):
        for bx in range(recon.blocks_x):
            left = best_tm_grid[by, bx - 1] if bx > 0 else None
            above = best_tm_grid[by - 1, bx] if by > 0 else None
            mpm = signaling.mpm_for_scheme(
                None if left is None else int(left),
                None if above is None else int(above), partition)
            mode, pos = signaling.decode_luma_mode(bits, mpm, scheme, pos)
            levels, pos = decode_coeffs(bits, pos)

            block_context = _BlockContext(recon, bx, by)
            if isinstance(mode, str) or mode in partition.substituted:
                sym = mode if isinstance(mode, str) else partition.symbol_for_slot(mode)
                pred = block_context.predict(models[sym])
            else:
                refs = extract_ref_array(recon, bx, by)
                pred = intra_trad.predict_tm(refs.values, mode)
            rec_res = idct8(dequantize(levels, cfg))
            block = np.clip(np.floor(pred + rec_res + 0.5), 0, 255).astype(np.uint8)
            recon.samples[by * BLOCK:(by + 1) * BLOCK,
                          bx * BLOCK:(bx + 1) * BLOCK] = block
            if isinstance(mode, str):
                best_tm_grid[by, bx] = signaling.best_tm_for_mpm(mode, mpm, scheme)
            else:
                best_tm_grid[by, bx] = mode
    return recon
