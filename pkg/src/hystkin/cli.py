"""Command line interface: hystkin gen | train | eval | sweep.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import config_reference, load_config
from .datasets import Direction
from .estimators import MODEL_KINDS
from .exceptions import ConfigError, FormatError, NumericsError
from .pipeline import run_eval, run_gen, run_sweep, run_train


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hystkin",
        description="Generate data, train and compare hysteresis kinematic models "
                    "on synthetic tendon-robot plants.",
        epilog="Config file keys and defaults:\n\n" + config_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, overwrite=False, kind=False, scenario=False):
        p.add_argument("--config", required=True, help="experiment config file (ini sections)")
        p.add_argument("--out", default="hystkin-out", help="output directory (default: %(default)s)")
        p.add_argument("--seed", type=int, default=None, help="override the [train] seed")
        if overwrite:
            p.add_argument("--overwrite", action="store_true", help="replace existing dataset files")
        if kind:
            p.add_argument("--kind", choices=sorted(MODEL_KINDS), default=None,
                           help="model kind (default: all kinds)")
            p.add_argument("--direction", choices=["fwd", "inv"], default=None,
                           help="kinematic direction (default: both)")
        if scenario:
            p.add_argument("--scenario", required=True, choices=["rate-dependence", "pretension"])

    common(sub.add_parser("gen", help="simulate and write train/test dataset files"), overwrite=True)
    common(sub.add_parser("train", help="train models on the generated training files"), kind=True)
    common(sub.add_parser("eval", help="evaluate trained models and write the comparison report"))
    common(sub.add_parser("sweep", help="run a scenario sweep and write its table"), scenario=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"hystkin: error: {exc}", file=sys.stderr)
        return 1

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.values["train"]["seed"] = args.seed

        if args.command == "gen":
            manifest = run_gen(cfg, args.out, overwrite=args.overwrite)
            print(manifest, end="")
        elif args.command == "train":
            kinds = [args.kind] if args.kind else sorted(MODEL_KINDS)
            directions = ([Direction.from_token(args.direction)] if args.direction
                          else cfg.directions())
            for kind in kinds:
                for direction in directions:
                    path = run_train(cfg, args.out, kind, direction)
                    print(f"trained {kind} {direction.value} -> {path}")
        elif args.command == "eval":
            report = run_eval(cfg, args.out)
            print(report.to_table_text(), end="")
        elif args.command == "sweep":
            print(run_sweep(cfg, args.out, args.scenario), end="")
    except (ConfigError, FormatError, FileExistsError, FileNotFoundError, ValueError) as exc:
        print(f"hystkin: error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"hystkin: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
