"""Frame I/O, 8x8 block partitioning, and reference-sample extraction.

Two reference representations feed the predictors:

* a 33-entry one-dimensional reference array (below-left run, left run,
  corner, top run, top-right run) used by the 35 traditional modes, and
* a five-block neighborhood (above-left, above, above-right, left,
  below-left) used by the neural modes.

Blocks are processed in raster order, so only samples of already-coded
blocks may be read.  Missing samples are substituted deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BLOCK = 8
MID_GRAY = 128

# Canonical neighbor order for the five-block context.  The flattened
# 320-vector follows this order, row-major inside each block; the trainer
# relies on the exact same layout.
CONTEXT_OFFSETS = (
    (-BLOCK, -BLOCK),  # above-left
    (0, -BLOCK),       # above
    (BLOCK, -BLOCK),   # above-right
    (-BLOCK, 0),       # left
    (-BLOCK, BLOCK),   # below-left
)


@dataclass
class Frame:
    """8-bit monochrome frame whose sides are positive multiples of 8."""

    width: int
    height: int
    samples: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.width % BLOCK or self.height % BLOCK:
            raise ValueError(
                f"dimensions not multiple of 8: {self.width}x{self.height}")
        self.samples = np.asarray(self.samples, dtype=np.uint8)
        if self.samples.size != self.width * self.height:
            raise ValueError(
                f"sample count {self.samples.size} != {self.width}x{self.height}")
        self.samples = self.samples.reshape(self.height, self.width)

    @property
    def blocks_x(self) -> int:
        return self.width // BLOCK

    @property
    def blocks_y(self) -> int:
        return self.height // BLOCK

    def block(self, bx: int, by: int) -> np.ndarray:
        """Original 8x8 block at block coordinates (bx, by)."""
        self._check_block(bx, by)
        return self.samples[by * BLOCK:(by + 1) * BLOCK, bx * BLOCK:(bx + 1) * BLOCK]

    def _check_block(self, bx: int, by: int):
        if not (0 <= bx < self.blocks_x and 0 <= by < self.blocks_y):
            raise ValueError(f"block ({bx},{by}) out of range")


@dataclass
class ReferenceContext:
    """Five reconstructed neighbor blocks in canonical order."""

    blocks: np.ndarray                 # (5, 8, 8) uint8
    availability: tuple = field(default=(False,) * 5)

    def flatten(self) -> np.ndarray:
        """320 samples: canonical block order, row-major per block."""
        return self.blocks.reshape(-1)


@dataclass
class RefArray:
    """33 substituted reference samples, bottom-left end first.

    values[0:8]   below-left run (bottom-most first)
    values[8:16]  left run (bottom-most first)
    values[16]    corner
    values[17:25] top run (left to right)
    values[25:33] top-right run
    """

    values: np.ndarray        # (33,) uint8, fully substituted
    available: np.ndarray     # (33,) bool, pre-substitution availability


def load_frame(path, fmt: str = "pgm-gray", width: int | None = None,
               height: int | None = None) -> Frame:
    """Read a frame from a binary PGM (P5, maxval 255) or headerless raw file."""
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "pgm-gray":
        w, h, payload = _parse_pgm(data)
        return Frame(w, h, np.frombuffer(payload, dtype=np.uint8))
    if fmt == "raw-y":
        if width is None or height is None:
            raise ValueError("raw-y input requires explicit width and height")
        if len(data) != width * height:
            raise ValueError(
                f"truncated payload: got {len(data)} bytes, need {width * height}")
        return Frame(width, height, np.frombuffer(data, dtype=np.uint8))
    raise ValueError(f"unknown frame format: {fmt}")


def save_frame(frame: Frame, path):
    """Write a frame as binary PGM (P5, maxval 255)."""
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (frame.width, frame.height))
        fh.write(frame.samples.tobytes())


def _parse_pgm(data: bytes):
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            if data[pos:pos + 1].isspace():
                pos += 1
            elif data[pos:pos + 1] == b"#":
                while pos < len(data) and data[pos] != 0x0A:
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("malformed header: truncated PGM")
        return data[start:pos]

    if token() != b"P5":
        raise ValueError("malformed header: not a binary PGM (P5)")
    try:
        w, h, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise ValueError("malformed header: bad PGM numbers") from exc
    if maxval != 255:
        raise ValueError(f"malformed header: maxval {maxval} unsupported")
    pos += 1  # single whitespace after maxval
    payload = data[pos:pos + w * h]
    if len(payload) != w * h:
        raise ValueError("truncated payload")
    return w, h, payload


def _causal_clamp(xs, ys, x0: int, y0: int, width: int):
    """Clamp pixel coordinates into the causal reconstructed region.

    The region covers all rows above y0 plus, on the current block row,
    the columns left of x0.  Each coordinate is clamped independently:
    first the row (rows y0..y0+7 count only when x0 > 0), then the column
    within whatever that row allows.
    """
    ymax = y0 + BLOCK - 1 if x0 > 0 else y0 - 1
    yc = np.clip(ys, 0, ymax)
    xc = np.where(yc < y0, np.clip(xs, 0, width - 1), np.clip(xs, 0, x0 - 1))
    return xc, yc


def extract_reference_context(recon: Frame, bx: int, by: int) -> ReferenceContext:
    """Five-block neighborhood of block (bx, by) from the reconstruction so far.

    Pixels that are not yet reconstructed (or out of frame) take the value of
    the reconstructed sample at the nearest clamped coordinate; when nothing
    has been reconstructed yet, every sample is 128.
    """
    recon._check_block(bx, by)
    x0, y0 = bx * BLOCK, by * BLOCK
    if x0 == 0 and y0 == 0:
        blocks = np.full((5, BLOCK, BLOCK), MID_GRAY, dtype=np.uint8)
        return ReferenceContext(blocks, (False,) * 5)

    grid_y, grid_x = np.mgrid[0:BLOCK, 0:BLOCK]
    blocks = np.empty((5, BLOCK, BLOCK), dtype=np.uint8)
    avail = []
    for i, (dx, dy) in enumerate(CONTEXT_OFFSETS):
        xs = grid_x + (x0 + dx)
        ys = grid_y + (y0 + dy)
        causal = (ys < y0) | ((ys < y0 + BLOCK) & (xs < x0))
        in_frame = (xs >= 0) & (xs < recon.width) & (ys >= 0) & (ys < recon.height)
        ok = causal & in_frame
        xc, yc = _causal_clamp(xs, ys, x0, y0, recon.width)
        xs = np.where(ok, xs, xc)
        ys = np.where(ok, ys, yc)
        blocks[i] = recon.samples[ys, xs]
        avail.append(bool(ok.all()))
    return ReferenceContext(blocks, tuple(avail))


def extract_ref_array(recon: Frame, bx: int, by: int) -> RefArray:
    """33-sample reference array for block (bx, by), fully substituted.

    Unavailable entries are filled by scanning from the bottom-left end
    toward the top-right end, propagating the last available value; the
    bottom-left end itself copies the first available sample above it.
    """
    recon._check_block(bx, by)
    x0, y0 = bx * BLOCK, by * BLOCK
    values = np.zeros(33, dtype=np.int32)
    avail = np.zeros(33, dtype=bool)

    # below-left run: column x0-1, rows y0+15 .. y0+8 -- never causal in
    # raster order, kept for substitution symmetry.
    # left run: column x0-1, rows y0+7 .. y0
    if x0 > 0:
        rows = np.arange(y0 + 7, y0 - 1, -1)
        values[8:16] = recon.samples[rows, x0 - 1]
        avail[8:16] = True
    # corner
    if x0 > 0 and y0 > 0:
        values[16] = recon.samples[y0 - 1, x0 - 1]
        avail[16] = True
    # top and top-right runs: row y0-1, columns x0 .. x0+15
    if y0 > 0:
        cols = np.arange(x0, x0 + 16)
        ok = cols < recon.width
        values[17:33][ok] = recon.samples[y0 - 1, cols[ok]]
        avail[17:33] = ok

    if not avail.any():
        return RefArray(np.full(33, MID_GRAY, dtype=np.uint8), avail)

    if not avail[0]:
        values[0] = values[np.flatnonzero(avail)[0]]
        avail_scan = avail.copy()
        avail_scan[0] = True
    else:
        avail_scan = avail
    for i in range(1, 33):
        if not avail_scan[i]:
            values[i] = values[i - 1]
    return RefArray(values.astype(np.uint8), avail)
