#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Solve problem.

This script solves one melting problem and writes a summary (branch,
threshold, nu and coefficients) together with the temperature profiles
sampled on the (t, x) grid of the run configuration.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any
import logging
import math

import numpy as np
import pandas as pd

from StefanExact.modules.stefan_model import (
    ConductionOnly,
    SimilaritySolution,
    SolveOutcome,
    TwoPhase,
    eval_front,
    eval_liquid,
    eval_solid,
    solve,
)
from StefanExact.modules.utils import (
    Loading,
    table_records,
    write_json,
    write_table,
)
from StefanExact.run_config import DEFAULT_X_POINTS, RunConfig, Sampling

PROFILE_COLUMNS = ["t", "x", "phase", "psi", "front"]


def solution_of(
    outcome: SolveOutcome
) -> SimilaritySolution | ConductionOnly:
    """Return the similarity or the conduction solution to evaluate."""
    if isinstance(outcome, TwoPhase):
        return outcome.solution
    return outcome


def default_x_grid(
    outcome: SolveOutcome,
    t_end: float
) -> np.ndarray:
    """
    Return 101 points over [0, 4 s(t_end)], or over four solid penetration
    depths 2 sqrt(d_s t_end) when nothing melts.
    """
    if isinstance(outcome, TwoPhase):
        length = 4.*eval_front(outcome.solution, t_end)
    else:
        length = 8.*math.sqrt(outcome.problem.solid.d*t_end)
    return np.linspace(0., length, DEFAULT_X_POINTS)


def sample_profiles(
    outcome: SolveOutcome,
    sampling: Sampling
) -> pd.DataFrame:
    """
    Sample the temperature on the (t, x) grid.

    Parameters
    ----------
    outcome : SolveOutcome
    sampling : Sampling

    Returns
    -------
    pd.DataFrame
        columns t, x, phase, psi, front, one row per (t, x) ordered by t then
        x; points with x <= s(t) belong to the liquid

    """
    sol = solution_of(outcome)
    xs = sampling.x if sampling.x is not None else \
        default_x_grid(outcome, sampling.t[-1])

    rows = []
    for t in sampling.t:
        front = eval_front(sol, t)
        for x in xs:
            x = float(x)
            if isinstance(sol, SimilaritySolution) and x <= front:
                phase, psi = "liquid", eval_liquid(sol, x, t)
            else:
                phase, psi = "solid", eval_solid(sol, x, t)
            rows.append((float(t), x, phase, psi, front))

    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)


def summarize(
    outcome: SolveOutcome,
    run: RunConfig
) -> dict[str, Any]:
    summary: dict[str, Any] = {
        "config": run.echo(),
        "branch": outcome.branch,
        "threshold": outcome.threshold,
    }
    if isinstance(outcome, TwoPhase):
        sol = outcome.solution
        summary["nu"] = sol.nu
        summary["coefficients"] = {"e_l": sol.e_l, "f_l": sol.f_l,
                                   "e_s": sol.e_s, "f_s": sol.f_s}
    else:
        summary["nu"] = None
        summary["coefficients"] = {"e_s": outcome.e_s, "f_s": outcome.f_s}

    return summary


def summary_path(
    output: Path
) -> Path:
    """Return the sidecar <stem>_summary.json of a CSV output."""
    return output.with_name(f"{output.stem}_summary.json")


def main(
    run: RunConfig,
    output: Path,
    output_format: str
) -> int:
    """
    Run the main function of solve_problem.py.

    Parameters
    ----------
    run : RunConfig
    output : Path
        file where to write the profiles, or the whole document in JSON
    output_format : str
        csv or json

    Returns
    -------
    int
        exit code, 0 on success

    """
    with Loading("Solving the front equation"):
        outcome = solve(run.problem)
    summary = summarize(outcome, run)
    if isinstance(outcome, ConductionOnly):
        logging.info(
            f"conduction-only: h0 = {run.problem.h0:.17g} does not exceed the "
            f"threshold {outcome.threshold:.17g}")
    else:
        logging.info(f"two-phase: nu = {outcome.solution.nu:.17g}")

    profiles = sample_profiles(outcome, run.sampling)
    if output_format == "json":
        write_json({**summary, "profiles": table_records(profiles)}, output)
    else:
        write_table(profiles, output)
        write_json(summary, summary_path(output))

    return 0
