"""Command line: train the neural modes of a scheme from an NMDS dataset."""

from __future__ import annotations

import argparse
import os
import sys

from .data import partition_sets, read_nmds, split_dataset
from .mlp import DEFAULT_DIMS
from .train import TrainerConfig, train
from .weights import export_weights


def build_parser():
    ap = argparse.ArgumentParser(prog="nm-trainer", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("train", help="train one model per scheme category")
    p.add_argument("--dataset", required=True)
    p.add_argument("--scheme", default="app1",
                   choices=["app1", "app3", "app5", "app7"])
    p.add_argument("--delta1", type=int, default=2)
    p.add_argument("--delta2", type=int, default=2)
    p.add_argument("--out", required=True, help="model output directory")
    p.add_argument("--category", help="train only this symbol (e.g. NM3-HOR)")
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--reg-lambda", type=float, default=0.0005)
    p.add_argument("--lr", type=float, nargs="+", default=[1e-4, 1e-5, 1e-6])
    p.add_argument("--width", type=int, default=1024,
                   help="hidden layer width (desk-scale runs may shrink it)")
    p.add_argument("--init-std", type=float, default=1.0)
    p.add_argument("--max-steps", type=int, help="per-epoch step cap")
    p.add_argument("--seed", type=int, default=0)
    return ap


def _run(args) -> int:
    contexts, targets, best_tm = read_nmds(args.dataset)
    sets = partition_sets(args.scheme, args.delta1, args.delta2)
    routing = split_dataset(best_tm, sets)
    os.makedirs(args.out, exist_ok=True)
    dims = (DEFAULT_DIMS[0], args.width, args.width, args.width, DEFAULT_DIMS[-1])

    for sym, _ in sets:
        if args.category and sym != args.category:
            continue
        idx = routing[sym]
        if len(idx) == 0:
            print(f"{sym}: empty category, skipped", file=sys.stderr)
            continue
        cfg = TrainerConfig(dims=dims, reg_lambda=args.reg_lambda,
                            batch_size=args.batch_size,
                            lr_schedule=tuple(args.lr), epochs=args.epochs,
                            seed=args.seed, init_std=args.init_std,
                            max_steps_per_epoch=args.max_steps)
        model = train(contexts[idx], targets[idx], cfg)
        path = os.path.join(args.out, sym.lower() + ".nmwt")
        export_weights(model, path)
        print(f"{sym}: {len(idx)} samples, {len(cfg.log)} steps, "
              f"final loss {cfg.log[-1]:.6f} -> {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"nm-trainer: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
