#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""__main__.py file for command line application."""

from __future__ import annotations

from pathlib import Path
import argparse
import logging
import sys

from StefanExact import config_parser
from StefanExact import limit_study
from StefanExact import solve_problem
from StefanExact import sweep_parameter
from StefanExact import verify_solution
from StefanExact.modules.exceptions import NumericalError, ValidationError
from StefanExact.modules.utils import Timer
from StefanExact.run_config import FORMATS, load_config

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _add_common(
    subparser: argparse.ArgumentParser
) -> None:
    """Add the arguments shared by every command."""
    subparser.add_argument(
        "--config",
        type=Path,
        required=True,
        help="JSON run configuration",
        )
    subparser.add_argument(
        "--output",
        type=Path,
        help="output file, by default <OUTPUT_FOLDER>/<command>.<format>",
        )
    subparser.add_argument(
        "--format",
        choices=FORMATS,
        help="output format, csv unless the configuration says otherwise",
        )
    subparser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="print debug messages",
        )


def parse_args(
    argv: list[str] | None = None
) -> argparse.Namespace:
    """Argument parser."""
    description = "StefanExact"
    parser = argparse.ArgumentParser(description=description)

    subparsers = parser.add_subparsers(
        dest="subparser",
        required=True,
        help="possible actions",
        )

    # solve parser
    solve = subparsers.add_parser(
        "solve",
        help="solve the melting problem and sample the temperature profiles",
        )
    _add_common(solve)

    # verify parser
    verify = subparsers.add_parser(
        "verify",
        help="check the solution against every equation of the problem and "
        "against the finite-difference oracle",
        )
    _add_common(verify)
    verify.add_argument(
        "--nu-shift",
        type=float,
        default=0.,
        help=argparse.SUPPRESS,
        )

    # sweep parser
    sweep = subparsers.add_parser(
        "sweep",
        help="solve the problem for each value of one parameter",
        )
    _add_common(sweep)

    # limit parser
    limit = subparsers.add_parser(
        "limit",
        help="follow nu(h0) towards the prescribed temperature limit",
        )
    _add_common(limit)

    return parser.parse_args(argv)


def main(
    argv: list[str] | None = None
) -> int:
    """Run the script chosen by the user and return its exit code."""
    args = parse_args(argv)

    logging.basicConfig(
        format='%(message)s',
        level=logging.DEBUG if args.verbose else logging.INFO,
        force=True)
    config = config_parser.Config("config.txt")

    try:
        run = load_config(args.config, args.subparser)
        output_format = args.format or run.output.format
        output = args.output or run.output.path
        if output is None:
            output_folder = config.get_paths()["OUTPUT_FOLDER"]
            output = Path.cwd()/output_folder/f"{run.command}.{output_format}"

        with Timer(f"Running time for {run.command}"):
            if args.subparser == "solve":
                code = solve_problem.main(run, output, output_format)
            elif args.subparser == "verify":
                code = verify_solution.main(
                    run, output, output_format, args.nu_shift)
            elif args.subparser == "sweep":
                code = sweep_parameter.main(run, output, output_format)
            else:
                code = limit_study.main(run, output, output_format)
    except ValidationError as err:
        logging.error(f"invalid input: {err}")
        return EXIT_VALIDATION
    except NumericalError as err:
        logging.error(f"numerical failure: {type(err).__name__}: {err}")
        return EXIT_NUMERICAL
    except OSError as err:
        logging.error(f"cannot write output: {err}")
        return EXIT_VALIDATION

    return code


if __name__ == '__main__':
    sys.exit(main())
