#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Residuals.

This module contains the checks that a similarity solution satisfies the
melting problem: heat equation in each phase, zero temperature and Stefan
balance at the front, boundary condition at x = 0 and initial temperature
far from the front. Every check returns a relative residual.
"""

from __future__ import annotations

from typing import Iterable, Sequence
import math

import numpy as np
import pandas as pd

from StefanExact.modules.exceptions import ValidationError
from StefanExact.modules.stefan_model import (
    ConductionOnly,
    SimilaritySolution,
    curvature_kernels,
    eval_fluxes,
    eval_front,
    eval_liquid,
    eval_solid,
    front_velocity,
    gradient_kernels,
    kernels,
)

TIMES = (.1, 1., 10.)
INITIAL_POINTS = (.5, 1., 2.)
INITIAL_TIME = 1e-8

AnySolution = SimilaritySolution | ConductionOnly


def _is_prescribed(
    sol: AnySolution
) -> bool:
    return math.isinf(sol.problem.h0)


def _sample_points(
    sol: AnySolution,
    phase: str,
    t: float,
    n_x: int
) -> np.ndarray:
    """Return n_x positions strictly inside the phase at time t."""
    problem = sol.problem
    front = eval_front(sol, t)
    if phase == "liquid":
        return np.linspace(.05*front, .95*front, n_x)
    width = 2.*math.sqrt(problem.solid.d*t)
    return np.linspace(front + .05*width, front + 3.*width, n_x)


def heat_terms(
    sol: AnySolution,
    phase: str,
    x: float,
    t: float
) -> tuple[float, float, float]:
    """
    Evaluate the two sides of the heat equation of one phase.

    With Psi = t^(alpha/2) f(eta), eta = x/(2 sqrt(d t)), the derivatives
    follow from the kernels and their eta-derivatives:
    Psi_t = t^(alpha/2-1) (alpha f/2 - eta f'/2) and
    d Psi_xx = t^(alpha/2-1) f''/4.

    Parameters
    ----------
    sol : SimilaritySolution | ConductionOnly
    phase : str
        liquid or solid
    x : float
    t : float

    Returns
    -------
    tuple[float, float, float]
        Psi, Psi_t and d Psi_xx at (x, t)

    """
    problem = sol.problem
    if phase == "liquid":
        if isinstance(sol, ConductionOnly):
            raise ValidationError(
                "there is no liquid phase below the threshold")
        e, f, d = sol.e_l, sol.f_l, problem.liquid.d
    elif phase == "solid":
        e, f, d = sol.e_s, sol.f_s, problem.solid.d
    else:
        raise ValidationError(
            f"phase must be 'liquid' or 'solid', got {phase}")

    alpha, order = problem.alpha, problem.integer_order
    eta = x/(2.*math.sqrt(d*t))
    even, odd = kernels(alpha, eta, order)
    g_even, g_odd = gradient_kernels(alpha, eta, order)
    c_even, c_odd = curvature_kernels(alpha, eta, order)
    value = e*even + f*odd
    slope = e*g_even + f*g_odd
    curvature = e*c_even + f*c_odd

    scale = t**(alpha/2.-1.)
    return (t*scale*value,
            scale*(alpha/2.*value - eta*slope),
            scale*curvature/2.)


def pde_residual(
    sol: AnySolution,
    phase: str,
    n_x: int = 50,
    n_t: int = 50
) -> float:
    """
    Heat equation residual |Psi_t - d Psi_xx| / max|Psi| on an n_x by n_t
    grid strictly inside the phase, t in [0.5, 2], with the derivatives of
    heat_terms.
    """
    if phase not in ("liquid", "solid"):
        raise ValidationError(
            f"phase must be 'liquid' or 'solid', got {phase}")

    worst = 0.
    scale = 0.
    for t in np.linspace(.5, 2., n_t):
        for x in _sample_points(sol, phase, t, n_x):
            psi, psi_t, psi_xx = heat_terms(sol, phase, float(x), float(t))
            worst = max(worst, abs(psi_t - psi_xx))
            scale = max(scale, abs(psi))

    return worst/scale


def interface_residual(
    sol: SimilaritySolution,
    times: Iterable[float] = TIMES
) -> tuple[float, float]:
    """Return max |Psi_l(s, t)| and max |Psi_s(s, t)| over t_inf t^(alpha/2)."""
    liquid, solid = 0., 0.
    problem = sol.problem
    for t in times:
        front = eval_front(sol, t)
        scale = problem.t_inf*t**(problem.alpha/2.)
        liquid = max(liquid, abs(eval_liquid(sol, front, t))/scale)
        solid = max(solid, abs(eval_solid(sol, front, t))/scale)

    return liquid, solid


def stefan_residual(
    sol: SimilaritySolution,
    times: Iterable[float] = TIMES
) -> float:
    """Relative residual of k_s Psi_s,x - k_l Psi_l,x = gamma s^alpha s'."""
    worst = 0.
    problem = sol.problem
    for t in times:
        front = eval_front(sol, t)
        liquid, solid = eval_fluxes(sol, front, t)
        latent = problem.gamma*front**problem.alpha*front_velocity(sol, t)
        scale = max(abs(liquid), abs(solid), abs(latent))
        worst = max(worst, abs(solid - liquid - latent)/scale)

    return worst


def convective_residual(
    sol: AnySolution,
    times: Iterable[float] = TIMES
) -> float:
    """
    Relative residual of the condition at x = 0.

    The convective condition k Psi_x = h0 t^(-1/2) (Psi - t_inf t^(alpha/2))
    is checked on the liquid, or on the solid when nothing melts; for the
    prescribed temperature limit Psi_l(0, t) = t_inf t^(alpha/2) is checked.
    """
    worst = 0.
    problem = sol.problem
    for t in times:
        bulk = problem.t_inf*t**(problem.alpha/2.)
        if _is_prescribed(sol):
            worst = max(worst, abs(eval_liquid(sol, 0., t) - bulk)/bulk)
            continue
        liquid_flux, solid_flux = eval_fluxes(sol, 0., t)
        if isinstance(sol, ConductionOnly):
            flux, surface = solid_flux, eval_solid(sol, 0., t)
        else:
            flux, surface = liquid_flux, eval_liquid(sol, 0., t)
        transfer = problem.h0/math.sqrt(t)*(surface - bulk)
        scale = max(abs(flux), abs(transfer))
        worst = max(worst, abs(flux - transfer)/scale)

    return worst


def initial_residual(
    sol: AnySolution,
    xs: Iterable[float] = INITIAL_POINTS,
    t: float = INITIAL_TIME
) -> float:
    """Return max |Psi_s(x, t) + t_i x^alpha| / (t_i x^alpha) at small t."""
    problem = sol.problem
    worst = 0.
    for x in xs:
        target = -problem.t_i*x**problem.alpha
        worst = max(worst, abs(eval_solid(sol, x, t) - target)/abs(target))

    return worst


def check_row(
    check: str,
    measured: float,
    tolerance: float
) -> dict[str, object]:
    """Return a report row, pass when measured <= tolerance."""
    status = "pass" if measured <= tolerance else "fail"
    return {"check": check, "measured": measured, "tolerance": tolerance,
            "status": status}


def skipped_row(
    check: str,
    tolerance: float
) -> dict[str, object]:
    """Return a report row for a check that does not apply."""
    return {"check": check, "measured": math.nan, "tolerance": tolerance,
            "status": "skipped"}


def residual_report(
    sol: AnySolution,
    tolerances: dict[str, float],
    grid_points: Sequence[int] = (50, 50)
) -> pd.DataFrame:
    """
    Run every check that applies to the solution.

    Parameters
    ----------
    sol : SimilaritySolution | ConductionOnly
    tolerances : dict[str, float]
        keys PDE, INTERFACE, STEFAN, CONVECTIVE, INITIAL
    grid_points : Sequence[int], optional
        (n_x, n_t) of the heat equation check. The default is (50, 50).

    Returns
    -------
    pd.DataFrame
        columns check, measured, tolerance, status

    """
    n_x, n_t = grid_points
    rows = []
    if isinstance(sol, ConductionOnly):
        rows.append(check_row("pde_solid",
                              pde_residual(sol, "solid", n_x, n_t),
                              tolerances["PDE"]))
    else:
        for phase in ("liquid", "solid"):
            rows.append(check_row(f"pde_{phase}",
                                  pde_residual(sol, phase, n_x, n_t),
                                  tolerances["PDE"]))
        liquid, solid = interface_residual(sol)
        rows.append(check_row("interface_liquid", liquid,
                              tolerances["INTERFACE"]))
        rows.append(check_row("interface_solid", solid,
                              tolerances["INTERFACE"]))
        rows.append(check_row("stefan_balance", stefan_residual(sol),
                              tolerances["STEFAN"]))
    name = "boundary_temperature" if _is_prescribed(sol) else \
        "convective_boundary"
    rows.append(check_row(name, convective_residual(sol),
                          tolerances["CONVECTIVE"]))
    rows.append(check_row("initial_condition", initial_residual(sol),
                          tolerances["INITIAL"]))

    return pd.DataFrame(rows)
