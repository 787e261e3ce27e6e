"""The finite-difference oracle against the similarity solution."""

import math

import numpy as np
import pytest

from StefanExact.modules.exceptions import OracleBudgetError, ValidationError
from StefanExact.modules.oracle_fd import (
    GridConfig,
    compare_with_solution,
    estimate_steps,
    fit_nu,
    refinement_study,
    run_oracle,
)
from StefanExact.modules.stefan_model import eval_front, h0_threshold, solve


@pytest.mark.parametrize("alpha, h0", [
    (0., 10.),
    (1., 5.),
    (2.5, None),
])
def test_oracle_reproduces_nu(make_problem, alpha, h0):
    problem = make_problem(alpha=alpha, h0=h0)
    grid = GridConfig(x_max=8., nx=800, t_end=1., t_start=.05)
    run = run_oracle(problem, grid)
    sol = solve(problem).solution
    errors = compare_with_solution(run, sol)
    assert errors["nu_error"] <= 2e-2
    assert run.max_balance_residual <= 5e-2

    trajectory = run.front_trajectory
    assert trajectory["t"].iloc[0] == pytest.approx(.05)
    assert trajectory["t"].iloc[-1] == pytest.approx(1.)
    assert np.all(np.diff(trajectory["s"].to_numpy()) >= 0.)

    psi = run.temp_snapshots["psi"]
    assert psi.min() >= -problem.t_i*8.**alpha*1.01
    assert psi.max() <= problem.t_inf*1.01
    assert set(run.temp_snapshots["t"]) == {trajectory["t"].iloc[0],
                                            trajectory["t"].iloc[19],
                                            trajectory["t"].iloc[-1]}


@pytest.mark.parametrize("alpha, h0", [
    (0., 10.),
    (1., 5.),
    (2.5, None),
])
def test_refinement_reduces_the_front_error(make_problem, alpha, h0):
    problem = make_problem(alpha=alpha, h0=h0)
    grid = GridConfig(x_max=8., nx=400, t_end=1., t_start=.05)
    table = refinement_study(problem, grid, levels=2)
    assert list(table["nx"]) == [400, 800]
    assert math.isnan(table["ratio"].iloc[0])
    assert table["ratio"].iloc[1] >= 1.7
    assert table["nu_fit"].iloc[1] == pytest.approx(table["nu_fit"].iloc[0],
                                                    rel=1e-2)


def test_large_latent_heat(make_problem):
    problem = make_problem(gamma=10.)
    grid = GridConfig(x_max=8., nx=200, t_end=1., t_start=.5)
    run = run_oracle(problem, grid)
    sol = solve(problem).solution
    trajectory = run.front_trajectory
    growth = trajectory["s"].iloc[-1] - trajectory["s"].iloc[0]
    exact = eval_front(sol, 1.) - eval_front(sol, .5)
    assert 0. < growth <= 1.05*exact


def test_nearly_frozen_front_is_refused(make_problem):
    problem = make_problem(gamma=1e6)
    sol = solve(problem).solution
    assert sol.nu < 1e-4
    with pytest.raises(OracleBudgetError, match="budget"):
        run_oracle(problem, GridConfig(x_max=8., t_start=.05))


def test_step_estimate_follows_the_run(make_problem):
    problem = make_problem(h0=10.)
    grid = GridConfig(x_max=8., nx=400, t_end=.2, t_start=.05)
    run = run_oracle(problem, grid)
    sol = solve(problem).solution
    assert run.steps == pytest.approx(estimate_steps(sol, grid), rel=5e-2)


def test_budget_refuses_a_thin_liquid_layer(make_problem):
    problem = make_problem(h0=.6)
    sol = solve(problem).solution
    grid = GridConfig(x_max=8., t_start=.05)
    assert sol.nu < .02
    assert estimate_steps(sol, grid) > grid.max_steps
    with pytest.raises(OracleBudgetError, match="budget"):
        run_oracle(problem, grid)

    short = GridConfig(x_max=8., t_start=.05, t_end=.051, max_steps=10**6)
    assert run_oracle(problem, short).steps <= 10**6


@pytest.mark.parametrize("changes", [
    {"nx": 100},
    {"nx": 250.5},
    {"cfl": .5},
    {"cfl": 0.},
    {"t_start": 0.},
    {"t_end": .01},
    {"x_max": -1.},
    {"max_steps": 0},
    {"max_steps": 2.5},
])
def test_grid_validation(changes):
    settings = {"x_max": 8., "nx": 400, "t_end": 1., "cfl": .4,
                "t_start": .05}
    settings.update(changes)
    with pytest.raises(ValidationError):
        GridConfig(**settings)


def test_grid_split():
    grid = GridConfig(x_max=4., nx=200)
    assert grid.liquid_nodes == 50
    assert grid.solid_nodes == 150
    assert GridConfig(x_max=4., nx=800).liquid_nodes == 200


def test_oracle_needs_a_front(make_problem):
    with pytest.raises(ValidationError, match="threshold"):
        run_oracle(make_problem(multiple=.5), GridConfig(x_max=8.))


def test_fit_nu_on_exact_fronts():
    times = np.geomspace(.05, 1., 12)
    fronts = 2.*.7*np.sqrt(2.*times)
    assert fit_nu(times, fronts, 2.) == pytest.approx(.7, rel=1e-14)


def test_threshold_multiple_sets_h0(make_problem):
    problem = make_problem(alpha=2.5)
    assert problem.h0 == pytest.approx(3.*h0_threshold(problem), rel=1e-15)
