#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dirichlet limit.

This module contains the prescribed temperature problem Psi_l(0, t) =
t_inf t^(alpha/2) reached when h0 goes to infinity: the front equation for
nu_inf, the coefficients of its similarity solution and the convergence of the
convective solutions towards it along a ladder of increasing h0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import partial
from typing import Sequence
import logging
import math

import pandas as pd

from StefanExact.modules.exceptions import ValidationError
from StefanExact.modules.root_solver import MonotoneRootSpec, solve_monotone
from StefanExact.modules.specfun import kummer_m
from StefanExact.modules.stefan_model import (
    SimilaritySolution,
    StefanProblem,
    TwoPhase,
    _front_coefficients,
    eval_liquid,
    f1,
    h0_threshold,
    kernels,
    solid_coefficients,
    solve,
)

MAX_HALVINGS = 200


@dataclass(frozen=True)
class DirichletSolution(SimilaritySolution):
    """Similarity solution of the prescribed temperature problem,
    with e_l equal to t_inf."""

    @property
    def nu_inf(self) -> float:
        return self.nu


def f3(
    x: float,
    problem: StefanProblem
) -> float:
    """Return 1/(x M(alpha/2+1, 3/2, x^2)), decreasing from +inf to 0."""
    if not x > 0.:
        raise ValidationError(f"f3 needs x > 0, got {x}")
    return 1./(x*kummer_m(problem.alpha/2.+1., 1.5, x*x))


def dirichlet_lhs(
    x: float,
    problem: StefanProblem
) -> float:
    """
    Left-hand side of the nu_inf equation.

    k_l t_inf / (2^(alpha+1) d_l^(alpha/2+1) gamma) f3(x)
    - k_s t_i d_s^((alpha-1)/2) / (gamma d_l^((alpha+1)/2)) f1(x)
    """
    alpha = problem.alpha
    liquid_term = (problem.liquid.k*problem.t_inf
                   / (2.**(alpha+1.)*problem.liquid.d**(alpha/2.+1.)
                      * problem.gamma))
    solid_term, _ = _front_coefficients(problem)

    return liquid_term*f3(x, problem) - solid_term*f1(x, problem)


def dirichlet_residual(
    x: float,
    problem: StefanProblem
) -> float:
    """Return dirichlet_lhs(x) - x^(alpha+1)."""
    return dirichlet_lhs(x, problem) - x**(problem.alpha+1.)


def _lower_end(
    problem: StefanProblem
) -> float:
    x_lo = 1.
    for _ in range(MAX_HALVINGS):
        if dirichlet_residual(x_lo, problem) > 0.:
            return x_lo
        x_lo /= 2.
    raise ValidationError(
        f"the nu_inf equation stays negative down to x = {x_lo}")


def solve_dirichlet(
    problem: StefanProblem
) -> DirichletSolution:
    """
    Solve the prescribed temperature problem.

    The value of problem.h0 is ignored. A root always exists because the
    left-hand side decreases from +inf to -inf.

    Parameters
    ----------
    problem : StefanProblem

    Returns
    -------
    DirichletSolution

    """
    problem = replace(problem, h0=math.inf)
    spec = MonotoneRootSpec(
        residual=partial(dirichlet_residual, problem=problem),
        x_init_hi=1.,
        tol_abs=1e-12,
        tol_res=1e-10,
        x_lo=_lower_end(problem))
    nu = solve_monotone(spec)

    even, odd = kernels(problem.alpha, nu, problem.integer_order)
    e_l = problem.t_inf
    f_l = -problem.t_inf*even/odd
    e_s, f_s = solid_coefficients(nu, problem)

    return DirichletSolution(
        nu=nu, omega=problem.omega, e_l=e_l, f_l=f_l, e_s=e_s, f_s=f_s,
        problem=problem)


def _check_ladder(
    problem: StefanProblem,
    h0_ladder: Sequence[float]
) -> float:
    """Require a non-empty increasing ladder above the threshold."""
    if len(h0_ladder) == 0:
        raise ValidationError("h0 ladder must not be empty")
    if any(b <= a for a, b in zip(h0_ladder, h0_ladder[1:])):
        raise ValidationError("h0 ladder must be strictly increasing")
    threshold = h0_threshold(problem)
    below = [h0 for h0 in h0_ladder if not h0 > threshold]
    if below:
        raise ValidationError(
            f"h0 ladder values {below} do not exceed the threshold "
            f"{threshold:.17g}")
    return threshold


def _ladder_solutions(
    problem: StefanProblem,
    h0_ladder: Sequence[float]
) -> list[SimilaritySolution]:
    """Solve the problem at every h0 of the ladder."""
    solutions = []
    for h0 in h0_ladder:
        outcome = solve(replace(problem, h0=float(h0)))
        if not isinstance(outcome, TwoPhase):
            raise ValidationError(
                f"h0 = {h0} gives no melting, the ladder must stay above "
                "the threshold")
        solutions.append(outcome.solution)
    return solutions


def convergence_study(
    problem: StefanProblem,
    h0_ladder: Sequence[float]
) -> pd.DataFrame:
    """
    Compare nu(h0) with nu_inf along a ladder of increasing h0.

    Parameters
    ----------
    problem : StefanProblem
    h0_ladder : Sequence[float]
        strictly increasing, every value above the threshold

    Returns
    -------
    pd.DataFrame
        columns h0, nu, nu_inf, gap

    """
    _check_ladder(problem, h0_ladder)
    limit = solve_dirichlet(problem)
    solutions = _ladder_solutions(problem, h0_ladder)
    nus = [sol.nu for sol in solutions]
    logging.info(f"nu_inf = {limit.nu:.17g}")

    return pd.DataFrame({
        "h0": [float(h0) for h0 in h0_ladder],
        "nu": nus,
        "nu_inf": [limit.nu]*len(nus),
        "gap": [abs(nu - limit.nu) for nu in nus],
    })


def temperature_convergence(
    problem: StefanProblem,
    h0_ladder: Sequence[float],
    x: float = .1,
    t: float = 1.
) -> pd.DataFrame:
    """Compare Psi_l(x, t) with its prescribed temperature limit along the
    ladder."""
    _check_ladder(problem, h0_ladder)
    limit = solve_dirichlet(problem)
    psi_inf = eval_liquid(limit, x, t)
    psi = [eval_liquid(sol, x, t)
           for sol in _ladder_solutions(problem, h0_ladder)]

    return pd.DataFrame({
        "h0": [float(h0) for h0 in h0_ladder],
        "psi": psi,
        "psi_inf": [psi_inf]*len(psi),
        "gap": [abs(value - psi_inf) for value in psi],
    })
