"""Prescribed temperature limit and the convergence of nu(h0) towards it."""

from dataclasses import replace
import math

import numpy as np
import pytest
from scipy import optimize, special

from StefanExact import config_parser
from StefanExact.modules.exceptions import ValidationError
from StefanExact.modules.limit_dirichlet import (
    convergence_study,
    dirichlet_lhs,
    f3,
    solve_dirichlet,
    temperature_convergence,
)
from StefanExact.modules.residuals import residual_report
from StefanExact.modules.stefan_model import (
    eval_front,
    eval_liquid,
    front_equation_lhs,
    h0_threshold,
)

LADDER = config_parser.Config("config.txt").get_limit()["LADDER_MULTIPLIERS"]


def neumann_nu(k_l=1., d_l=1., k_s=1., d_s=1., t_i=1., t_inf=1., gamma=1.):
    """Root of the classical two-phase equation with a fixed wall temperature."""
    omega = math.sqrt(d_l/d_s)

    def residual(x):
        liquid = (k_l*t_inf*math.exp(-x*x)
                  / (gamma*d_l*math.sqrt(math.pi)*special.erf(x)))
        solid = (k_s*t_i*math.exp(-(x*omega)**2)
                 / (gamma*math.sqrt(math.pi*d_l*d_s)*special.erfc(x*omega)))
        return liquid - solid - x
    return optimize.brentq(residual, 1e-6, 10., xtol=1e-14)


def test_f3_closed_form(make_problem):
    x = .7
    expected = 2.*math.exp(-x*x)/(math.sqrt(math.pi)*special.erf(x))
    assert f3(x, make_problem()) == pytest.approx(expected, rel=1e-12)


def test_f3_decreases(make_problem):
    problem = make_problem(alpha=1.3)
    values = [f3(x, problem) for x in (.01, .1, .5, 1., 2.)]
    assert all(b < a for a, b in zip(values, values[1:]))
    with pytest.raises(ValidationError):
        f3(0., problem)


@pytest.mark.parametrize("parameters", [
    {},
    {"k_l": 1.3, "d_l": .7, "k_s": .9, "d_s": 1.6, "t_i": .8, "t_inf": 1.2,
     "gamma": 1.1},
])
def test_nu_inf_for_constant_latent_heat(make_problem, parameters):
    sol = solve_dirichlet(make_problem(**parameters))
    assert sol.nu_inf == pytest.approx(neumann_nu(**parameters), abs=1e-10)


@pytest.mark.parametrize("alpha", [0., .5, 1.5, 2., 3.2])
def test_wall_temperature_is_prescribed(make_problem, alpha):
    problem = make_problem(alpha=alpha, t_inf=1.7, d_l=.8)
    sol = solve_dirichlet(problem)
    assert math.isinf(sol.problem.h0)
    assert sol.e_l == 1.7
    for t in (.1, 1., 10.):
        assert eval_liquid(sol, 0., t) == pytest.approx(1.7*t**(alpha/2.),
                                                        rel=1e-14)


@pytest.mark.parametrize("alpha", [0., 1.2, 2., 2.7])
def test_residuals_pass(make_problem, tolerances, alpha):
    sol = solve_dirichlet(make_problem(alpha=alpha, k_s=1.3, d_s=.7))
    report = residual_report(sol, tolerances, (20, 20))
    assert "boundary_temperature" in set(report["check"])
    assert (report["status"] == "pass").all(), report.to_string()


def test_integer_route_matches_kummer_route(make_problem):
    problem = make_problem(alpha=2.)
    assert solve_dirichlet(problem).nu == pytest.approx(
        solve_dirichlet(replace(problem, alpha=2.+1e-9)).nu, rel=1e-7)


@pytest.mark.parametrize("alpha", [0., 1.5])
def test_front_equation_tends_to_limit_equation(make_problem, alpha):
    problem = make_problem(alpha=alpha, h0=1e8)
    x = .3
    assert front_equation_lhs(x, problem) == pytest.approx(
        dirichlet_lhs(x, problem), rel=1e-4, abs=1e-8)


@pytest.mark.parametrize("alpha", [0., .9, 2.4])
def test_default_ladder_converges(make_problem, alpha):
    problem = make_problem(alpha=alpha, gamma=.6, k_s=1.5)
    threshold = h0_threshold(problem)
    table = convergence_study(problem, [m*threshold for m in LADDER])
    assert list(table.columns) == ["h0", "nu", "nu_inf", "gap"]
    gaps = table["gap"].to_numpy()
    assert np.all(np.diff(gaps) < 0.)
    assert gaps[-1] < 1e-3
    assert np.all(table["nu"] < table["nu_inf"])


def test_single_value_ladder(make_problem):
    problem = make_problem()
    table = convergence_study(problem, [10.*h0_threshold(problem)])
    assert len(table) == 1


def test_ladder_validation(make_problem):
    problem = make_problem()
    threshold = h0_threshold(problem)
    with pytest.raises(ValidationError, match="threshold"):
        convergence_study(problem, [.5*threshold, 10.*threshold])
    with pytest.raises(ValidationError, match="increasing"):
        convergence_study(problem, [10.*threshold, 5.*threshold])
    with pytest.raises(ValidationError, match="empty"):
        convergence_study(problem, [])


def test_temperature_converges(make_problem):
    problem = make_problem(alpha=1.1)
    threshold = h0_threshold(problem)
    ladder = [m*threshold for m in (10., 100., 1000., 1e4)]
    table = temperature_convergence(problem, ladder)
    gaps = table["gap"].to_numpy()
    assert np.all(np.diff(gaps) < 0.)
    assert table["psi"].iloc[-1] == pytest.approx(table["psi_inf"].iloc[0],
                                                  rel=1e-2)


def test_front_of_limit_bounds_convective_fronts(make_problem):
    problem = make_problem(alpha=.4)
    limit = solve_dirichlet(problem)
    table = convergence_study(problem, [3.*h0_threshold(problem)])
    assert table["nu"].iloc[0] < limit.nu
    assert eval_front(limit, 1.) == pytest.approx(2.*limit.nu, rel=1e-15)
