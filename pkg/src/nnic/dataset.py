"""Training-sample extraction ("NMDS" files) and prediction dumps.

Each sample stores the raw five-block reference context (320 bytes,
canonical flatten order), the original 8x8 block (64 bytes), and the
best traditional mode of the block under an anchor-scheme encode: 385
bytes per record after the header (magic "NMDS", u32 version, u32 block
size, u64 count).  Every coded block contributes one sample.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from . import intra_trad
from .block_model import Frame, save_frame
from .codec_core import encode_frame
from .mode_space import Scheme
from .residual_codec import CodecConfig

MAGIC = b"NMDS"
VERSION = 1
RECORD_SIZE = 320 + 64 + 1
_HEADER = struct.Struct("<4sIIQ")


@dataclass
class TrainingSample:
    context: np.ndarray  # (320,) uint8
    target: np.ndarray   # (64,) uint8
    best_tm: int


def write_dataset(samples, path) -> int:
    samples = list(samples)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, 8, len(samples)))
        for s in samples:
            fh.write(s.context.astype(np.uint8).tobytes())
            fh.write(s.target.astype(np.uint8).tobytes())
            fh.write(bytes([s.best_tm]))
    return len(samples)


def read_dataset(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValueError("bad magic: not an NMDS dataset")
    magic, version, block, count = _HEADER.unpack_from(data)
    if version != VERSION or block != 8:
        raise ValueError(f"unsupported NMDS layout: version {version}, block {block}")
    if len(data) != _HEADER.size + count * RECORD_SIZE:
        raise ValueError("truncated NMDS dataset")
    samples = []
    pos = _HEADER.size
    for _ in range(count):
        ctx = np.frombuffer(data, dtype=np.uint8, count=320, offset=pos)
        tgt = np.frombuffer(data, dtype=np.uint8, count=64, offset=pos + 320)
        samples.append(TrainingSample(ctx.copy(), tgt.copy(), data[pos + 384]))
        pos += RECORD_SIZE
    return samples


def extract_dataset(frames, out_path, qp: int = 27) -> int:
    """Anchor-encode a corpus and write one sample per coded block."""
    cfg = CodecConfig(qp)
    samples = []

    def hook(bx, by, refs, original, context, decision, tm_preds, mpm):
        samples.append(TrainingSample(context.flatten().copy(),
                                      original.reshape(-1).copy(),
                                      int(decision.best_mode)))

    for frame in frames:
        encode_frame(frame, Scheme.ANCHOR, cfg, block_hook=hook)
    return write_dataset(samples, out_path)


def analyze_corpus(frames, qp: int = 27, partition=None, models=None):
    """Collect per-block mode statistics from an anchor encode of a corpus.

    Always gathers best-mode counts and per-TM squared errors; when a
    partition and its models are given, the neural error of every
    partition set is gathered as well.
    """
    from .mode_space import BlockModeRecord, collect_mode_stats

    cfg = CodecConfig(qp)
    records = []
    if partition is not None and partition.sets:
        nm_sets = [(sym, (lo, hi)) for sym, (lo, hi) in partition.sets]
    elif partition is not None:
        nm_sets = [(sym, (t, t)) for t, sym in partition.substitutions]
    else:
        nm_sets = []

    def hook(bx, by, refs, original, context, decision, tm_preds, mpm):
        orig = original.astype(np.int64)
        tm_sse = np.array([((orig - tm_preds[m]) ** 2).sum() for m in range(35)],
                          dtype=np.float64)
        nm_sse = {}
        for sym, key in nm_sets:
            pred = models[sym].predict(context)
            nm_sse[key] = float(((orig - pred) ** 2).sum())
        records.append(BlockModeRecord(int(decision.best_mode), tm_sse, nm_sse))

    for frame in frames:
        encode_frame(frame, Scheme.ANCHOR, cfg, block_hook=hook)
    return collect_mode_stats(records)


def dump_predictions(frame: Frame, bx: int, by: int, modes, out_dir,
                     qp: int = 27, models=None):
    """Write the raw block, each requested prediction, and the context.

    Modes are named "tm<k>" or by NM symbol (e.g. "nm1", "nm3-hor"); NM
    predictions need the matching model in `models`.  Returns the list of
    written file paths.
    """
    frame._check_block(bx, by)
    cfg = CodecConfig(qp)
    captured = {}

    def hook(**info):
        if (info["bx"], info["by"]) == (bx, by):
            captured["refs"] = info["refs"]
            captured["context"] = info["context"]

    encode_frame(frame, Scheme.ANCHOR, cfg, block_hook=hook)
    refs = captured["refs"]
    context = captured["context"]

    os.makedirs(out_dir, exist_ok=True)
    written = []

    def dump(tag, block):
        path = os.path.join(str(out_dir), f"block_{bx}_{by}_{tag}.pgm")
        save_frame(Frame(8, 8, np.asarray(block, dtype=np.uint8)), path)
        written.append(path)

    dump("raw", frame.block(bx, by))
    for name in modes:
        name = name.lower()
        if name.startswith("tm"):
            pred = intra_trad.predict_tm(refs.values, int(name[2:]))
        else:
            sym = name.upper()
            if models is None or sym not in models:
                raise ValueError(f"missing model: {sym}")
            pred = models[sym].predict(context)
        dump(f"pred_{name}", pred)

    mosaic = np.full((24, 24), 128, dtype=np.uint8)
    slots = ((0, 0), (0, 8), (0, 16), (8, 0), (16, 0))
    for blk, (r, c) in zip(context.blocks, slots):
        mosaic[r:r + 8, c:c + 8] = blk
    path = os.path.join(str(out_dir), f"block_{bx}_{by}_context.pgm")
    save_frame(Frame(24, 24, mosaic), path)
    written.append(path)
    return written
