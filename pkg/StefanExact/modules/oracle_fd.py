#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Finite-difference oracle.

This module contains an explicit front-tracking solver of the melting problem,
used only to cross-check the similarity solution. Each phase is mapped onto a
fixed grid in xi: x = xi s(t) in the liquid and x = s(t) + xi (x_max - s(t))
in the solid, which adds an advection term xi s'(t) dPsi/dx (liquid) and
(1 - xi) s'(t) dPsi/dx (solid) to the heat equation. The front moves by
explicit Euler steps of the Stefan condition, with second order one-sided
gradients at the interface; the convective condition at x = 0 enters through a
ghost node and the solid is held at -t_i x_max^alpha at x = x_max.

The run starts from the exact profiles at t_start > 0, where the convective
condition is no longer singular, and is marched independently from there.
A run whose estimated number of steps exceeds the grid budget is refused
before it starts; the step shrinks with the square of the liquid layer.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math

from numba import njit
import numpy as np
import pandas as pd

from StefanExact.modules.exceptions import (
    FrontExitError,
    OracleBudgetError,
    OracleStabilityError,
    ValidationError,
)
from StefanExact.modules.stefan_model import (
    SimilaritySolution,
    StefanProblem,
    TwoPhase,
    eval_front,
    eval_liquid,
    eval_solid,
    solve,
)

EXIT_FRACTION = .8
BOUND_SLACK = 1.01
STATUS_OK = 0
STATUS_UNSTABLE = 1
STATUS_FRONT_EXIT = 2


@dataclass(frozen=True)
class GridConfig:
    """
    Discretization of an oracle run.

    Attributes
    ----------
    x_max : float
        length of the domain
    nx : int
        total number of nodes, a quarter of them (at least 50) in the liquid
    t_end : float
    cfl : float
        ratio of the time step to the explicit stability limit
    t_start : float
        time of the warm start from the exact profiles
    max_steps : int
        largest number of time steps a run may take

    """

    x_max: float
    nx: int = 400
    t_end: float = 1.
    cfl: float = .4
    t_start: float = .01
    max_steps: int = 10_000_000

    def __post_init__(self) -> None:
        if not self.x_max > 0.:
            raise ValidationError("x_max must be > 0")
        if int(self.nx) != self.nx or self.nx < 200:
            raise ValidationError("nx must be an integer >= 200")
        if not 0. < self.cfl <= .4:
            raise ValidationError("cfl must be in (0, 0.4]")
        if not self.t_start > 0.:
            raise ValidationError("t_start must be > 0")
        if not self.t_end > self.t_start:
            raise ValidationError("t_end must be > t_start")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValidationError("max_steps must be a positive integer")

    @property
    def liquid_nodes(self) -> int:
        return max(int(self.nx)//4, 50)

    @property
    def solid_nodes(self) -> int:
        return int(self.nx) - self.liquid_nodes


@dataclass(frozen=True)
class OracleRun:
    """
    Result of an oracle run.

    Attributes
    ----------
    front_trajectory : pd.DataFrame
        columns t, s
    temp_snapshots : pd.DataFrame
        columns t, x, phase, psi
    nu_fit : float
        least squares fit of s(t) = 2 nu sqrt(d_l t)
    max_balance_residual : float
        largest relative mismatch, over the accepted steps, between the
        latent heat released by a step and the flux jump after it
    steps : int
    grid : GridConfig

    """

    front_trajectory: pd.DataFrame
    temp_snapshots: pd.DataFrame
    nu_fit: float
    max_balance_residual: float
    steps: int
    grid: GridConfig


@njit
def _interface_gradients(u, w, dx_l, dx_s):
    n = u.size
    g_l = (3.*u[n-1] - 4.*u[n-2] + u[n-3])/(2.*dx_l)
    g_s = (-3.*w[0] + 4.*w[1] - w[2])/(2.*dx_s)
    return g_l, g_s


@njit
def _march(u, w, s, t, t_target, alpha, gamma, t_i, t_inf, h0, k_l, d_l,
           k_s, d_s, x_max, cfl):
    """March u (liquid) and w (solid) in place from t to t_target."""
    n_l = u.size
    n_s = w.size
    u_new = np.empty(n_l)
    w_new = np.empty(n_s)
    far_field = -t_i*x_max**alpha
    max_residual = 0.
    steps = 0

    while t < t_target*(1.-1e-14):
        dx_l = s/(n_l-1)
        dx_s = (x_max-s)/(n_s-1)
        robin = h0/(k_l*np.sqrt(t))
        dt = cfl*min(dx_l*dx_l/(d_l*(1.+dx_l*robin)), dx_s*dx_s/d_s)
        if t+dt > t_target:
            dt = t_target-t

        g_l, g_s = _interface_gradients(u, w, dx_l, dx_s)
        latent = gamma*s**alpha
        s_dot = (k_s*g_s - k_l*g_l)/latent

        lam = d_l/(dx_l*dx_l)
        for i in range(1, n_l-1):
            xi = i/(n_l-1)
            u_new[i] = u[i] + dt*(
                lam*(u[i+1] - 2.*u[i] + u[i-1])
                + xi*s_dot*(u[i+1] - u[i-1])/(2.*dx_l))
        ghost = u[1] - 2.*dx_l*robin*(u[0] - t_inf*t**(alpha/2.))
        u_new[0] = u[0] + dt*lam*(u[1] - 2.*u[0] + ghost)
        u_new[n_l-1] = 0.

        lam = d_s/(dx_s*dx_s)
        for j in range(1, n_s-1):
            xi = j/(n_s-1)
            w_new[j] = w[j] + dt*(
                lam*(w[j+1] - 2.*w[j] + w[j-1])
                + (1.-xi)*s_dot*(w[j+1] - w[j-1])/(2.*dx_s))
        w_new[0] = 0.
        w_new[n_s-1] = far_field

        s_new = s + dt*s_dot
        u[:] = u_new
        w[:] = w_new
        t += dt
        steps += 1

        if not (np.isfinite(s_new) and np.isfinite(u[0])
                and np.isfinite(w[1])) or s_new <= 0.:
            return s_new, t, steps, max_residual, STATUS_UNSTABLE
        if s_new > EXIT_FRACTION*x_max:
            return s_new, t, steps, max_residual, STATUS_FRONT_EXIT

        g_l, g_s = _interface_gradients(
            u, w, s_new/(n_l-1), (x_max-s_new)/(n_s-1))
        jump = k_s*g_s - k_l*g_l
        released = latent*(s_new-s)/dt
        residual = abs(released-jump)/max(abs(jump), abs(released), 1e-300)
        if residual > max_residual:
            max_residual = residual
        s = s_new

    return s, t, steps, max_residual, STATUS_OK


def _snapshot(
    t: float,
    s: float,
    u: np.ndarray,
    w: np.ndarray,
    x_max: float
) -> pd.DataFrame:
    """Return the temperatures of both phases at time t as a table."""
    x_l = np.linspace(0., s, u.size)
    x_s = np.linspace(s, x_max, w.size)
    return pd.DataFrame({
        "t": t,
        "x": np.concatenate([x_l, x_s]),
        "phase": ["liquid"]*u.size + ["solid"]*w.size,
        "psi": np.concatenate([u, w]),
    })


def _check_bounds(
    u: np.ndarray,
    w: np.ndarray,
    problem: StefanProblem,
    grid: GridConfig,
    t: float
) -> None:
    """Raise OracleStabilityError when a temperature leaves the bracket."""
    lower = -problem.t_i*grid.x_max**problem.alpha*BOUND_SLACK
    upper = problem.t_inf*grid.t_end**(problem.alpha/2.)*BOUND_SLACK
    low, high = min(u.min(), w.min()), max(u.max(), w.max())
    if not (lower <= low and high <= upper):
        raise OracleStabilityError(
            f"temperatures [{low:.6g}, {high:.6g}] left the bracket "
            f"[{lower:.6g}, {upper:.6g}] at t = {t:.6g}")


def fit_nu(
    times: np.ndarray,
    fronts: np.ndarray,
    d_l: float
) -> float:
    """Least squares fit of s = 2 nu sqrt(d_l t)."""
    slope = np.sum(fronts*np.sqrt(times))/np.sum(times)
    return float(slope/(2.*math.sqrt(d_l)))


def estimate_steps(
    sol: SimilaritySolution,
    grid: GridConfig,
    n_points: int = 200
) -> float:
    """
    Estimate the number of time steps of a run on the grid.

    The explicit step limit of _march is integrated over [t_start, t_end]
    along the exact front, on a geometric time grid.

    Parameters
    ----------
    sol : SimilaritySolution
    grid : GridConfig
    n_points : int, optional
        number of time intervals. The default is 200.

    Returns
    -------
    float

    """
    problem = sol.problem
    times = np.geomspace(grid.t_start, grid.t_end, n_points+1)
    middle = np.sqrt(times[1:]*times[:-1])
    s = 2.*sol.nu*np.sqrt(problem.liquid.d*middle)
    dx_l = s/(grid.liquid_nodes-1)
    dx_s = np.abs(grid.x_max-s)/(grid.solid_nodes-1)
    robin = problem.h0/(problem.liquid.k*np.sqrt(middle))
    dt = grid.cfl*np.minimum(dx_l*dx_l/(problem.liquid.d*(1.+dx_l*robin)),
                             dx_s*dx_s/problem.solid.d)

    return float(np.sum(np.diff(times)/dt))


def run_oracle(
    problem: StefanProblem,
    grid: GridConfig,
    n_samples: int = 40,
    n_snapshots: int = 3
) -> OracleRun:
    """
    Integrate the melting problem with the finite-difference oracle.

    Parameters
    ----------
    problem : StefanProblem
        h0 must exceed the threshold
    grid : GridConfig
    n_samples : int, optional
        number of front samples, geometrically spaced over
        [t_start, t_end]. The default is 40.
    n_snapshots : int, optional
        number of temperature snapshots, first and last sample included. The
        default is 3.

    Returns
    -------
    OracleRun

    Raises
    ------
    ValidationError
        below the threshold, where there is no front to track
    OracleStabilityError
        on non-finite or out of bracket temperatures
    FrontExitError
        when the front passes 0.8 x_max
    OracleBudgetError
        when the estimated number of steps exceeds grid.max_steps

    """
    outcome = solve(problem)
    if not isinstance(outcome, TwoPhase):
        raise ValidationError(
            "the oracle needs a melting front, h0 must exceed the threshold "
            f"{outcome.threshold:.17g}")
    sol = outcome.solution

    estimate = estimate_steps(sol, grid)
    if estimate > grid.max_steps:
        raise OracleBudgetError(
            f"about {estimate:.3g} time steps for nu = {sol.nu:.6g} on "
            f"{grid.nx} nodes, above the budget of {grid.max_steps}")

    s = eval_front(sol, grid.t_start)
    if s > EXIT_FRACTION*grid.x_max:
        raise FrontExitError(
            f"initial front {s:.6g} is beyond {EXIT_FRACTION} x_max")

    u = np.array([eval_liquid(sol, x, grid.t_start)
                  for x in np.linspace(0., s, grid.liquid_nodes)])
    w = np.array([eval_solid(sol, x, grid.t_start)
                  for x in np.linspace(s, grid.x_max, grid.solid_nodes)])
    u[-1] = 0.
    w[0] = 0.
    w[-1] = -problem.t_i*grid.x_max**problem.alpha

    sample_times = np.geomspace(grid.t_start, grid.t_end, n_samples)
    snapshot_at = set(np.linspace(0, n_samples-1, n_snapshots).astype(int))

    t = grid.t_start
    times, fronts = [t], [s]
    snapshots = [_snapshot(t, s, u, w, grid.x_max)] if 0 in snapshot_at else []
    total_steps = 0
    max_residual = 0.
    for index in range(1, n_samples):
        s, t, steps, residual, status = _march(
            u, w, s, t, float(sample_times[index]), problem.alpha,
            problem.gamma, problem.t_i, problem.t_inf, problem.h0,
            problem.liquid.k, problem.liquid.d, problem.solid.k,
            problem.solid.d, grid.x_max, grid.cfl)
        total_steps += steps
        max_residual = max(max_residual, residual)
        if status == STATUS_UNSTABLE:
            raise OracleStabilityError(
                f"non-finite values after {total_steps} steps, t = {t:.6g}")
        if status == STATUS_FRONT_EXIT:
            raise FrontExitError(
                f"front {s:.6g} passed {EXIT_FRACTION} x_max at t = {t:.6g}")
        _check_bounds(u, w, problem, grid, t)
        times.append(t)
        fronts.append(s)
        if index in snapshot_at:
            snapshots.append(_snapshot(t, s, u, w, grid.x_max))

    nu_fit = fit_nu(np.array(times), np.array(fronts), problem.liquid.d)
    logging.debug(
        f"oracle nx = {grid.nx}: {total_steps} steps, nu_fit = {nu_fit:.10g}, "
        f"balance residual {max_residual:.3e}")

    return OracleRun(
        front_trajectory=pd.DataFrame({"t": times, "s": fronts}),
        temp_snapshots=pd.concat(snapshots, ignore_index=True),
        nu_fit=nu_fit,
        max_balance_residual=max_residual,
        steps=total_steps,
        grid=grid)


def compare_with_solution(
    run: OracleRun,
    sol: SimilaritySolution
) -> dict[str, float]:
    """
    Measure the oracle against the similarity solution.

    Returns
    -------
    dict[str, float]
        "nu_error": relative error of nu_fit, "front_error": largest
        |s_num(t) - s(t)| over the trajectory

    """
    exact = np.array([eval_front(sol, t) for t in run.front_trajectory["t"]])
    front_error = np.max(np.abs(run.front_trajectory["s"].to_numpy() - exact))
    return {
        "nu_error": abs(run.nu_fit - sol.nu)/sol.nu,
        "front_error": float(front_error),
    }


def refinement_study(
    problem: StefanProblem,
    grid: GridConfig,
    levels: int = 2
) -> pd.DataFrame:
    """
    Run the oracle on grids with nx, 2 nx, 4 nx, ...

    Returns
    -------
    pd.DataFrame
        columns nx, nu_fit, nu_error, front_error, ratio, where ratio is the
        front error of the coarser grid over that of the current one

    """
    outcome = solve(problem)
    if not isinstance(outcome, TwoPhase):
        raise ValidationError("refinement needs a melting front")

    rows = []
    for level in range(levels):
        fine = GridConfig(x_max=grid.x_max, nx=grid.nx*2**level,
                          t_end=grid.t_end, cfl=grid.cfl,
                          t_start=grid.t_start, max_steps=grid.max_steps)
        run = run_oracle(problem, fine)
        errors = compare_with_solution(run, outcome.solution)
        ratio = (rows[-1]["front_error"]/errors["front_error"]
                 if rows else math.nan)
        rows.append({"nx": fine.nx, "nu_fit": run.nu_fit, **errors,
                     "ratio": ratio})

    return pd.DataFrame(rows)
