#! /usr/bin/env python
"""Command-line interface: ``cvdistil simulate``, ``cvdistil monotone`` and
``cvdistil validate oracle``."""
import argparse
import logging
import sys

from cvdistil import names
from cvdistil.config import ConfigError, HELP, parse_config
from cvdistil.experiment import monotone_eval, run, summarize
from cvdistil.monotones import MEASURES

logger = logging.getLogger('cvdistil.scripts.cli')


def _config_epilog():
    width = max(len(key) for key in HELP)
    return "configuration keys:\n" + "\n".join(
        "  {:{}}  {}".format(key, width, text) for key, text in HELP.items())


def build_parser():
    parser = argparse.ArgumentParser(
        prog='cvdistil',
        description="Simulate distillation of displacement noise from "
                    "squeezed and entangled Gaussian states.")
    sub = parser.add_subparsers(dest="command", metavar="{simulate,monotone}")

    simulate = sub.add_parser(
        "simulate", help="run a configured sweep and write its CSV",
        epilog=_config_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    simulate.add_argument("config", metavar="CONFIG",
                          help="experiment configuration file")
    simulate.add_argument("--output", metavar="PATH",
                          help="CSV output path; overrides the "
                               "configuration (default: standard output)")
    simulate.add_argument("--grid-points", metavar="K", type=int,
                          help="Gauss-Legendre nodes per branch; overrides "
                               "the configuration")
    simulate.add_argument("--store", metavar="DIR",
                          help="also persist the run as a Run in DIR")
    simulate.add_argument("--workers", metavar="N", type=int, default=1,
                          help="processes for the sweep points (default 1)")
    simulate.add_argument("--quiet", action="store_true",
                          help="only log warnings and errors")

    monotone = sub.add_parser(
        "monotone", help="evaluate a monotone on a covariance or mixture "
                         "file")
    monotone.add_argument("measure", choices=sorted(MEASURES))
    monotone.add_argument("file", metavar="FILE")

    validate = sub.add_parser("validate")
    validate.add_argument("target", choices=["oracle"])
    validate.add_argument("--cutoff", type=int, default=60)

    return parser


def _simulate(args):
    config = parse_config(args.config)
    if args.grid_points is not None:
        config.grid_points = args.grid_points
        config.validate()
    if args.workers < 1:
        raise ConfigError("must be at least 1", key='--workers')

    table = run(config, output=args.output, store=args.store,
                workers=args.workers)
    stream = sys.stdout if (args.output or config.output) else sys.stderr
    print(summarize(table), file=stream)


def _validate(args):
    from cvdistil.fock import validate_oracle

    for key, value in sorted(validate_oracle(cutoff=args.cutoff).items()):
        print("{}={:.3g}".format(key, value))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return names.EXIT_CONFIG

    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False)
        else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "simulate":
            _simulate(args)
        elif args.command == "monotone":
            print(monotone_eval(args.measure, args.file).line())
        else:
            _validate(args)
    except ConfigError as e:
        logger.error("configuration error: %s", e)
        return names.EXIT_CONFIG
    except (RuntimeError, ValueError, OSError, KeyError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return names.EXIT_ENGINE

    return names.EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
