"""Command-line entry point: ``vqpt learn | sweep-dt | validate``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import config as config_mod
from . import experiment
from .simcore import CapacityError


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", help="experiment config (JSON)")
    p.add_argument("--qubits", type=int, dest="n")
    p.add_argument("--depth", type=int, dest="d")
    p.add_argument("--num-states", type=int, dest="N")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, dest="master_seed")
    p.add_argument("--dt", type=float)
    p.add_argument("--epochs", type=int, dest="max_epochs")
    p.add_argument("--output", dest="output_dir")
    p.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqpt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="train circuits against a target and write result.json")
    _add_overrides(p)

    p = sub.add_parser("sweep-dt", help="one experiment per evolution time, written to dt_sweep.csv")
    _add_overrides(p)
    p.add_argument("--dts", required=True, help="comma-separated evolution times")

    p = sub.add_parser("validate", help="re-score saved parameters on a fresh validation set")
    p.add_argument("theta", help="theta_best.json written by learn")
    p.add_argument("config", help="config the parameters were trained with")
    p.add_argument("--round", type=int, default=1, help="which fresh validation set to draw")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _load_config(args):
    cfg = config_mod.load(args.config)
    overrides = {k: getattr(args, k, None)
                 for k in ("n", "d", "N", "trials", "master_seed", "dt", "max_epochs", "output_dir")}
    return config_mod.with_overrides(cfg, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "validate":
            cfg = config_mod.load(args.config)
            try:
                theta_doc = experiment.read_json(args.theta)
            except FileNotFoundError:
                raise config_mod.ConfigError(f"no such file: {args.theta}") from None
            report = experiment.validate(cfg, theta_doc, args.round)
            print(json.dumps(report))
            return 0
        cfg = _load_config(args)
        if args.command == "learn":
            doc = experiment.learn(cfg)
            print(json.dumps({"output_dir": cfg.output_dir, "best_trial": doc["best_trial"], **doc["summary"]}))
        else:
            dts = [float(x) for x in args.dts.split(",") if x.strip()]
            rows = experiment.sweep_dt(cfg, dts)
            print(json.dumps({"output_dir": cfg.output_dir, "rows": len(rows)}))
        return 0
    except CapacityError as err:
        print(f"vqpt: capacity exceeded: {err}", file=sys.stderr)
        return 3
    except (config_mod.ConfigError, ValueError, json.JSONDecodeError) as err:
        print(f"vqpt: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
