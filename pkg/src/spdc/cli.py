"""Command line entry point: ``spdc run|sweep|describe``."""
from __future__ import annotations

import argparse
import logging
import sys

from . import experiment as ex
from .serialize import read_spds, read_spds_header


def _overrides(args) -> dict:
    return {
        "experiment.base_seed": args.seed,
        "experiment.output_dir": args.out,
        "experiment.method": args.method,
        "experiment.trials": args.trials,
    }


def _load(args):
    try:
        return ex.load_config(args.config, _overrides(args)), ex.EXIT_OK
    except ex.InputError as exc:
        logging.error("unreadable input: %s", exc)
        return None, ex.EXIT_INPUT
    except ex.UsageError as exc:
        logging.error("invalid config: %s", exc)
        return None, ex.EXIT_CONFIG


def cmd_run(args) -> int:
    cfg, code = _load(args)
    return code if cfg is None else ex.run(cfg)


def cmd_sweep(args) -> int:
    try:
        gammas = [float(g) for g in args.gamma.split(",") if g.strip()]
    except ValueError:
        logging.error("invalid config: --gamma expects a comma-separated list of numbers")
        return ex.EXIT_CONFIG
    cfg, code = _load(args)
    return code if cfg is None else ex.gamma_sweep(cfg, gammas)


def cmd_describe(args) -> int:
    try:
        hdr = read_spds_header(args.dataset)
        read_spds(args.dataset)
    except (OSError, ex.UsageError) as exc:
        logging.error("unreadable input: %s", exc)
        return ex.EXIT_INPUT
    print(f"N={hdr['N']} d={hdr['d']} labels={'yes' if hdr['has_labels'] else 'no'}")
    return ex.EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spdc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("config")
        sp.add_argument("--seed", type=int, help="override experiment.base_seed")
        sp.add_argument("--out", help="override experiment.output_dir")
        sp.add_argument("--method", help="override experiment.method")
        sp.add_argument("--trials", type=int, help="override experiment.trials")

    r = sub.add_parser("run", help="run a multi-trial experiment")
    common(r)
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("sweep", help="repeat a run over several kernel widths")
    common(s)
    s.add_argument("--gamma", required=True, help="comma-separated gamma values")
    s.set_defaults(func=cmd_sweep)
    d = sub.add_parser("describe", help="print N, d and label presence of an .spds file")
    d.add_argument("dataset")
    d.set_defaults(func=cmd_describe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
