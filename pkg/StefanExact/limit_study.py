#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Limit study.

This script follows nu(h0) towards nu_inf of the prescribed temperature
problem along a ladder of increasing h0, by default the multiples of the
threshold listed in config.txt.
"""

from __future__ import annotations

from pathlib import Path
import logging

from StefanExact import config_parser
from StefanExact.modules.limit_dirichlet import (
    convergence_study,
    temperature_convergence,
)
from StefanExact.modules.stefan_model import h0_threshold
from StefanExact.modules.utils import (
    Loading,
    table_records,
    write_json,
    write_table,
)
from StefanExact.run_config import RunConfig

config = config_parser.Config("config.txt")


def h0_ladder(
    run: RunConfig
) -> list[float]:
    """Return the ladder of the run, absolute or as threshold multiples."""
    if run.h0_ladder is not None:
        return list(run.h0_ladder)
    multipliers = run.ladder_multipliers
    if multipliers is None:
        multipliers = config.get_limit()["LADDER_MULTIPLIERS"]
    threshold = h0_threshold(run.problem)

    return [multiplier*threshold for multiplier in multipliers]


def main(
    run: RunConfig,
    output: Path,
    output_format: str
) -> int:
    """
    Run the main function of limit_study.py.

    Parameters
    ----------
    run : RunConfig
    output : Path
    output_format : str
        csv or json; the JSON document also carries the convergence of the
        liquid temperature at x = 0.1, t = 1

    Returns
    -------
    int
        exit code, 0 on success

    """
    ladder = h0_ladder(run)
    with Loading(f"Solving {len(ladder)} values of h0"):
        table = convergence_study(run.problem, ladder)
    logging.info(f"final gap |nu - nu_inf| = {table['gap'].iloc[-1]:.3e}")

    if output_format == "json":
        temperature = temperature_convergence(run.problem, ladder)
        write_json({
            "config": run.echo(),
            "threshold": h0_threshold(run.problem),
            "nu_inf": float(table["nu_inf"].iloc[0]),
            "rows": table_records(table),
            "temperature": table_records(temperature),
        }, output)
    else:
        write_table(table, output)

    return 0
