#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Verify solution.

This script checks a solution against the melting problem it claims to
solve: residuals of every equation, then, when there is a front, agreement
with the finite-difference oracle. The exit code is 0 only if every check
passes.
"""

from __future__ import annotations

from pathlib import Path
import logging
import math

import pandas as pd

from StefanExact import config_parser
from StefanExact.modules.exceptions import OracleBudgetError
from StefanExact.modules.oracle_fd import (
    GridConfig,
    compare_with_solution,
    run_oracle,
)
from StefanExact.modules.residuals import (
    check_row,
    residual_report,
    skipped_row,
)
from StefanExact.modules.stefan_model import (
    SimilaritySolution,
    TwoPhase,
    build_solution,
    eval_front,
    solve,
)
from StefanExact.modules.utils import Loading, table_records, write_json, \
    write_table
from StefanExact.run_config import RunConfig

config = config_parser.Config("config.txt")


def skipped_oracle_rows(
    tolerances: dict[str, float]
) -> list[dict[str, object]]:
    """Return the oracle rows of a report where the comparison did not run."""
    return [skipped_row("oracle_nu", tolerances["ORACLE_NU"]),
            skipped_row("oracle_balance", tolerances["ORACLE_BALANCE"])]


def oracle_grid(
    run: RunConfig,
    sol: SimilaritySolution
) -> GridConfig:
    """
    Build the oracle grid from the "oracle" block of the run configuration,
    falling back to config.txt; x_max defaults to 2 s(t_end) + 8 sqrt(d_s
    t_end).
    """
    defaults = config.get_oracle()
    overrides = run.oracle
    t_end = overrides.get("t_end", defaults["T_END"])
    x_max = overrides.get(
        "x_max",
        2.*eval_front(sol, t_end) + 8.*math.sqrt(sol.problem.solid.d*t_end))

    return GridConfig(
        x_max=x_max,
        nx=overrides.get("nx", defaults["NX"]),
        t_end=t_end,
        cfl=overrides.get("cfl", defaults["CFL"]),
        t_start=overrides.get("t_start", defaults["T_START"]),
        max_steps=overrides.get("max_steps", defaults["MAX_STEPS"]))


def oracle_rows(
    run: RunConfig,
    sol: SimilaritySolution,
    tolerances: dict[str, float]
) -> list[dict[str, object]]:
    """
    Compare the solution with the finite-difference oracle.

    A run refused by the step budget gives skipped rows, like a problem
    without a front.
    """
    grid = oracle_grid(run, sol)
    try:
        with Loading(f"Running the oracle on {grid.nx} nodes"):
            oracle = run_oracle(sol.problem, grid)
    except OracleBudgetError as err:
        logging.warning(f"oracle comparison skipped: {err}")
        return skipped_oracle_rows(tolerances)
    errors = compare_with_solution(oracle, sol)
    logging.info(
        f"oracle nu_fit = {oracle.nu_fit:.10g} after {oracle.steps} steps")

    return [
        check_row("oracle_nu", errors["nu_error"], tolerances["ORACLE_NU"]),
        check_row("oracle_balance", oracle.max_balance_residual,
                  tolerances["ORACLE_BALANCE"]),
    ]


def main(
    run: RunConfig,
    output: Path,
    output_format: str,
    nu_shift: float = 0.
) -> int:
    """
    Run the main function of verify_solution.py.

    Parameters
    ----------
    run : RunConfig
    output : Path
    output_format : str
        csv or json
    nu_shift : float, optional
        added to nu before the coefficients are rebuilt, to check that the
        report catches a wrong solution. The default is 0.

    Returns
    -------
    int
        0 if every check passes, 1 otherwise

    """
    tolerances = config.get_tolerances()
    residual_grid = config.get_residual_grid()

    outcome = solve(run.problem)
    if isinstance(outcome, TwoPhase):
        sol = outcome.solution
        if nu_shift:
            logging.warning(f"nu shifted by {nu_shift:g}")
            sol = build_solution(sol.nu + nu_shift, run.problem)
    else:
        sol = outcome

    with Loading("Computing residuals"):
        report = residual_report(
            sol, tolerances,
            (residual_grid["N_X"], residual_grid["N_T"]))

    if isinstance(sol, SimilaritySolution):
        rows = oracle_rows(run, sol, tolerances)
    else:
        logging.warning(
            "no melting front below the threshold, oracle comparison skipped")
        rows = skipped_oracle_rows(tolerances)
    report = pd.concat([report, pd.DataFrame(rows)], ignore_index=True)

    failed = report[report["status"] == "fail"]
    for check, measured, tolerance in zip(
            failed["check"], failed["measured"], failed["tolerance"]):
        logging.warning(
            f"{check} failed: {measured:.3e} > tolerance {tolerance:.1e}")

    if output_format == "json":
        write_json({
            "config": run.echo(),
            "branch": outcome.branch,
            "nu": sol.nu if isinstance(sol, SimilaritySolution) else None,
            "passed": failed.empty,
            "checks": table_records(report),
        }, output)
    else:
        write_table(report, output)

    return 0 if failed.empty else 1
