"""Command-line interface.

Subcommands: encode, decode, extract-dataset, analyze-modes,
optimize-categories, bdrate, dump-pred.  Frames are binary PGM by
default; raw 8-bit luma needs --width/--height.
"""

from __future__ import annotations

import argparse
import sys

from . import codec_core, dataset, metrics, mode_space, nn_mode
from .block_model import Frame, load_frame, save_frame
from .mode_space import Scheme, partition_for_scheme
from .residual_codec import CodecConfig

SCHEME_NAMES = [s.value for s in Scheme]


def _add_frame_args(p):
    p.add_argument("--format", choices=["pgm-gray", "raw-y"], default="pgm-gray")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)


def _load(path, args) -> Frame:
    return load_frame(path, args.format, args.width, args.height)


def _registry(args, scheme: Scheme, delta1: int = 2, delta2: int = 2):
    partition = partition_for_scheme(scheme, delta1, delta2)
    symbols = partition.nm_symbols
    if not symbols:
        return None
    if not args.models:
        raise ValueError(f"missing model: {symbols[0]}")
    return nn_mode.load_registry(args.models, symbols)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nnic", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("encode", help="encode a frame to a bitstream")
    p.add_argument("input")
    p.add_argument("output")
    _add_frame_args(p)
    p.add_argument("--qp", type=int, default=27)
    p.add_argument("--scheme", choices=SCHEME_NAMES, default="anchor")
    p.add_argument("--models")
    p.add_argument("--delta1", type=int, default=2)
    p.add_argument("--delta2", type=int, default=2)
    p.add_argument("--stats", help="write the frame stats report here")
    p.add_argument("--recon", help="write the encoder reconstruction as PGM")

    p = sub.add_parser("decode", help="decode a bitstream to a PGM frame")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--models")

    p = sub.add_parser("extract-dataset", help="extract training samples")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    _add_frame_args(p)
    p.add_argument("--qp", type=int, default=27)

    p = sub.add_parser("analyze-modes", help="collect mode statistics")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    _add_frame_args(p)
    p.add_argument("--qp", type=int, default=27)
    p.add_argument("--scheme", choices=SCHEME_NAMES)
    p.add_argument("--models")
    p.add_argument("--delta1", type=int, default=2)
    p.add_argument("--delta2", type=int, default=2)

    p = sub.add_parser("optimize-categories",
                       help="grid-search the seven-mode cluster widths")
    p.add_argument("--stats", required=True)

    p = sub.add_parser("bdrate", help="BD metrics between two 4-point curves")
    p.add_argument("anchor", help="file with 4 lines: rate psnr")
    p.add_argument("test")

    p = sub.add_parser("dump-pred", help="dump block predictions as PGM files")
    p.add_argument("input")
    _add_frame_args(p)
    p.add_argument("--block", nargs=2, type=int, required=True,
                   metavar=("BX", "BY"))
    p.add_argument("--modes", required=True,
                   help="comma-separated, e.g. tm0,nm1")
    p.add_argument("--out", required=True)
    p.add_argument("--qp", type=int, default=27)
    p.add_argument("--models")
    return ap


def _read_curve(path):
    points = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            points.append((float(parts[0]), float(parts[1])))
    return points


def _run(args) -> int:
    if args.cmd == "encode":
        scheme = Scheme(args.scheme)
        frame = _load(args.input, args)
        models = None
        if scheme is not Scheme.ANCHOR:
            models = _registry(args, scheme, args.delta1, args.delta2)
        payload, recon, stats = codec_core.encode_frame(
            frame, scheme, CodecConfig(args.qp), models,
            delta1=args.delta1, delta2=args.delta2)
        with open(args.output, "wb") as fh:
            fh.write(payload)
        if args.recon:
            save_frame(recon, args.recon)
        report = stats.report()
        if args.stats:
            with open(args.stats, "w") as fh:
                fh.write(report)
        else:
            sys.stdout.write(report)
        return 0

    if args.cmd == "decode":
        with open(args.input, "rb") as fh:
            data = fh.read()
        _, _, _, scheme, d1, d2, _ = codec_core.parse_header(data)
        models = None
        if scheme is not Scheme.ANCHOR:
            models = _registry(args, scheme, d1, d2)
        recon = codec_core.decode_frame(data, models)
        save_frame(recon, args.output)
        return 0

    if args.cmd == "extract-dataset":
        frames = [_load(p, args) for p in args.inputs]
        count = dataset.extract_dataset(frames, args.out, args.qp)
        print(f"samples {count}")
        return 0

    if args.cmd == "analyze-modes":
        frames = [_load(p, args) for p in args.inputs]
        partition = models = None
        if args.scheme:
            scheme = Scheme(args.scheme)
            partition = partition_for_scheme(scheme, args.delta1, args.delta2)
            models = _registry(args, scheme, args.delta1, args.delta2)
        stats = dataset.analyze_corpus(frames, args.qp, partition, models)
        mode_space.save_stats(stats, args.out)
        nd = stats.p[0] + stats.p[1]
        print(f"blocks {stats.blocks}")
        print(f"p_nondirectional {nd:.4f}")
        return 0

    if args.cmd == "optimize-categories":
        stats = mode_space.load_stats(args.stats)
        d1, d2, total = mode_space.optimize_deltas(stats)
        print(f"delta1 {d1}")
        print(f"delta2 {d2}")
        print(f"delta_d {total:.6g}")
        return 0

    if args.cmd == "bdrate":
        anchor = _read_curve(args.anchor)
        test = _read_curve(args.test)
        print(f"bd_rate {metrics.bd_rate(anchor, test):.4f}")
        print(f"bd_psnr {metrics.bd_psnr(anchor, test):.4f}")
        return 0

    if args.cmd == "dump-pred":
        frame = _load(args.input, args)
        modes = [m.strip() for m in args.modes.split(",") if m.strip()]
        models = None
        syms = [m.upper() for m in modes if not m.lower().startswith("tm")]
        if syms:
            if not args.models:
                raise ValueError(f"missing model: {syms[0]}")
            models = nn_mode.load_registry(args.models, syms)
        bx, by = args.block
        written = dataset.dump_predictions(frame, bx, by, modes, args.out,
                                           args.qp, models)
        for path in written:
            print(path)
        return 0

    raise AssertionError("unreachable")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except (ValueError, OSError) as exc:
        print(f"nnic: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
