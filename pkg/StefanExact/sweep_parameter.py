#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Sweep parameter.

This script solves the melting problem for every value of one parameter and
writes one row per value. Values are solved concurrently, at most
STEFAN_EXACT_THREADS at a time; rows keep the order of the values.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from pathlib import Path
import logging
import math

import pandas as pd

from StefanExact.modules.stefan_model import (
    StefanProblem,
    TwoPhase,
    solve,
)
from StefanExact.modules.utils import (
    Loading,
    max_threads,
    table_records,
    write_json,
    write_table,
)
from StefanExact.run_config import RunConfig

SWEEP_COLUMNS = ["value", "branch", "threshold", "nu", "e_l", "f_l", "e_s",
                 "f_s"]


def sweep_row(
    value: float,
    problem: StefanProblem,
    parameter: str
) -> dict[str, object]:
    """Solve the problem with parameter set to value; nu, e_l and f_l are
    NaN when nothing melts."""
    outcome = solve(problem.with_parameter(parameter, value))
    row: dict[str, object] = {"value": value, "branch": outcome.branch,
                              "threshold": outcome.threshold}
    if isinstance(outcome, TwoPhase):
        sol = outcome.solution
        row.update(nu=sol.nu, e_l=sol.e_l, f_l=sol.f_l, e_s=sol.e_s,
                   f_s=sol.f_s)
    else:
        row.update(nu=math.nan, e_l=math.nan, f_l=math.nan, e_s=outcome.e_s,
                   f_s=outcome.f_s)
    return row


def main(
    run: RunConfig,
    output: Path,
    output_format: str
) -> int:
    """
    Run the main function of sweep_parameter.py.

    Parameters
    ----------
    run : RunConfig
        its sweep block names the parameter and its values
    output : Path
    output_format : str
        csv or json

    Returns
    -------
    int
        exit code, 0 on success

    """
    sweep = run.sweep
    threads = max_threads()
    logging.info(
        f"sweeping {sweep.parameter} over {len(sweep.values)} values on "
        f"{threads} threads")

    with Loading(f"Sweeping {sweep.parameter}"):
        with ThreadPoolExecutor(max_workers=threads) as executor:
            rows = list(executor.map(
                partial(sweep_row, problem=run.problem,
                        parameter=sweep.parameter),
                sweep.values))
    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)

    if output_format == "json":
        write_json({
            "config": run.echo(),
            "parameter": sweep.parameter,
            "rows": table_records(table),
        }, output)
    else:
        write_table(table, output)

    return 0
