#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Stefan model.

This module contains:
    - the parameterization of the two-phase melting problem with latent heat
      gamma x^alpha and a convective condition at x = 0
    - the existence threshold on h0
    - the front equation, its f1 and f2 terms and its solution
    - the coefficients of the similarity solution and its evaluation into
      temperatures, conductive fluxes and front position
    - the pure conduction solution returned below the threshold

With alpha a nonnegative integer n, every kernel is evaluated through the
repeated integrals of erfc (E_n, F_n) instead of the Kummer functions.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from functools import partial
from typing import ClassVar, Union
import logging
import math

from StefanExact.modules.exceptions import (
    BracketError,
    DivisionGuardError,
    ValidationError,
)
from StefanExact.modules.root_solver import MonotoneRootSpec, solve_monotone
from StefanExact.modules.specfun import (
    en_fn,
    gamma,
    inerfc,
    kummer_m,
    kummer_u,
)

INTEGER_TOL = 1e-12
DENOMINATOR_GUARD = 1e-300
DOMAIN_SLACK = 1e-12
SQRT_PI = math.sqrt(math.pi)

SWEEPABLE = ("alpha", "gamma", "t_i", "t_inf", "h0", "k_l", "d_l", "k_s",
             "d_s")


def _require_positive(
    name: str,
    value: float,
    allow_inf: bool = False
) -> None:
    if not value > 0. or (math.isinf(value) and not allow_inf):
        raise ValidationError(f"{name} must be > 0")


@dataclass(frozen=True)
class PhaseProps:
    """Thermal conductivity k and diffusivity d of one phase."""

    k: float
    d: float

    def __post_init__(self) -> None:
        _require_positive("k", self.k)
        _require_positive("d", self.d)


@dataclass(frozen=True)
class StefanProblem:
    """
    Parameters of the melting problem.

    Attributes
    ----------
    alpha : float
        exponent of the latent heat gamma x^alpha, alpha >= 0
    gamma : float
        latent heat coefficient
    t_i : float
        initial solid temperature -t_i x^alpha
    t_inf : float
        bulk temperature t_inf t^(alpha/2) of the convective condition
    h0 : float
        heat transfer coefficient h0 t^(-1/2); math.inf stands for the
        prescribed temperature limit
    liquid : PhaseProps
    solid : PhaseProps

    """

    alpha: float
    gamma: float
    t_i: float
    t_inf: float
    h0: float
    liquid: PhaseProps
    solid: PhaseProps

    def __post_init__(self) -> None:
        if not (self.alpha >= 0. and math.isfinite(self.alpha)):
            raise ValidationError("alpha must be >= 0")
        _require_positive("gamma", self.gamma)
        _require_positive("t_i", self.t_i)
        _require_positive("t_inf", self.t_inf)
        _require_positive("h0", self.h0, allow_inf=True)

    @property
    def omega(self) -> float:
        return math.sqrt(self.liquid.d/self.solid.d)

    @property
    def integer_order(self) -> int | None:
        """Return round(alpha) when alpha is an integer, else None."""
        n = round(self.alpha)
        if abs(self.alpha - n) < INTEGER_TOL:
            return int(n)
        return None

    def with_parameter(
        self,
        name: str,
        value: float
    ) -> StefanProblem:
        """Return a copy with one scalar parameter replaced."""
        if name not in SWEEPABLE:
            raise ValidationError(
                f"unknown parameter '{name}', expected one of "
                f"{', '.join(SWEEPABLE)}")
        if name in ("k_l", "d_l"):
            return replace(self, liquid=replace(self.liquid, **{name[0]: value}))
        if name in ("k_s", "d_s"):
            return replace(self, solid=replace(self.solid, **{name[0]: value}))
        return replace(self, **{name: value})

    def as_dict(self) -> dict[str, float]:
        values = {f.name: getattr(self, f.name) for f in fields(self)
                  if f.name not in ("liquid", "solid")}
        values.update(k_l=self.liquid.k, d_l=self.liquid.d,
                      k_s=self.solid.k, d_s=self.solid.d)
        return values


@dataclass(frozen=True)
class SimilaritySolution:
    """
    Similarity solution s(t) = 2 nu sqrt(d_l t) and the coefficients of
    Psi = t^(alpha/2) [E M(-alpha/2, 1/2, -eta^2)
    + F eta M(-alpha/2+1/2, 3/2, -eta^2)] in each phase.
    """

    nu: float
    omega: float
    e_l: float
    f_l: float
    e_s: float
    f_s: float
    problem: StefanProblem


@dataclass(frozen=True)
class TwoPhase:
    branch: ClassVar[str] = "two-phase"

    solution: SimilaritySolution
    threshold: float


@dataclass(frozen=True)
class ConductionOnly:
    """Solid heated without melting, Psi_s over x >= 0 and no front."""

    branch: ClassVar[str] = "conduction-only"

    e_s: float
    f_s: float
    threshold: float
    problem: StefanProblem


SolveOutcome = Union[TwoPhase, ConductionOnly]


def _exp(
    value: float
) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def _guard(
    name: str,
    value: float
) -> float:
    """Return value, or raise DivisionGuardError when it is too small."""
    if not abs(value) >= DENOMINATOR_GUARD:
        raise DivisionGuardError(
            f"denominator {name} = {value:.3e} is below {DENOMINATOR_GUARD}")
    return value


def kernels(
    alpha: float,
    eta: float,
    order: int | None = None
) -> tuple[float, float]:
    """
    Evaluate the even and odd similarity kernels.

    Parameters
    ----------
    alpha : float
    eta : float
    order : int | None, optional
        integer value of alpha, selecting the E_n, F_n evaluation. The
        default is None.

    Returns
    -------
    tuple[float, float]
        M(-alpha/2, 1/2, -eta^2) and eta M(-alpha/2+1/2, 3/2, -eta^2)

    """
    if order is None:
        even = kummer_m(-alpha/2., .5, -eta*eta)
        odd = eta*kummer_m(-alpha/2.+.5, 1.5, -eta*eta)
        return even, odd

    e_n, f_n = en_fn(order, eta)
    even = 2.**order*gamma(order/2.+1.)*e_n
    odd = 2.**(order-1)*gamma(order/2.+.5)*f_n

    return even, odd


def gradient_kernels(
    alpha: float,
    eta: float,
    order: int | None = None
) -> tuple[float, float]:
    """
    Evaluate half the eta-derivatives of the similarity kernels, so that
    Psi_x = t^((alpha-1)/2)/sqrt(d) [E g_even + F g_odd].
    """
    if order is None:
        g_even = alpha*eta*kummer_m(-alpha/2.+1., 1.5, -eta*eta)
        g_odd = .5*kummer_m(-alpha/2.+.5, .5, -eta*eta)
        return g_even, g_odd

    if order == 0:
        return 0., .5*_exp(-eta*eta)
    e_prev, f_prev = en_fn(order-1, eta)
    g_even = order*2.**(order-2)*gamma(order/2.)*f_prev
    g_odd = 2.**(order-2)*gamma((order+1)/2.)*e_prev

    return g_even, g_odd


def curvature_kernels(
    alpha: float,
    eta: float,
    order: int | None = None
) -> tuple[float, float]:
    """
    Evaluate the eta-derivatives of gradient_kernels, that is half the second
    eta-derivatives of the similarity kernels.

    Parameters
    ----------
    alpha : float
    eta : float
    order : int | None, optional
        integer value of alpha, selecting the E_n, F_n evaluation. The
        default is None.

    Returns
    -------
    tuple[float, float]
        alpha M(1-alpha/2, 3/2, -eta^2)
        - 4/3 alpha (1-alpha/2) eta^2 M(2-alpha/2, 5/2, -eta^2) and
        -(1-alpha) eta M(3/2-alpha/2, 3/2, -eta^2)

    """
    if order is None:
        y = -eta*eta
        c_even = (alpha*kummer_m(1.-alpha/2., 1.5, y)
                  + 4./3.*alpha*(1.-alpha/2.)*y*kummer_m(2.-alpha/2., 2.5, y))
        c_odd = -(1.-alpha)*eta*kummer_m(1.5-alpha/2., 1.5, y)
        return c_even, c_odd

    if order == 0:
        return 0., -eta*_exp(-eta*eta)
    if order == 1:
        return _exp(-eta*eta), 0.
    e_prev, f_prev = en_fn(order-2, eta)
    c_even = order*2.**(order-2)*gamma(order/2.)*e_prev
    c_odd = 2.**(order-2)*gamma((order+1)/2.)*f_prev

    return c_even, c_odd


def h0_threshold(
    problem: StefanProblem
) -> float:
    """
    Return the critical heat transfer coefficient.

    Melting starts instantaneously only for
    h0 > 2^alpha Gamma(alpha/2+1) k_s t_i d_s^((alpha-1)/2) / (t_inf sqrt(pi)).
    """
    alpha = problem.alpha
    solid = problem.solid

    return (2.**alpha*gamma(alpha/2.+1.)*solid.k*problem.t_i
            * solid.d**((alpha-1.)/2.)/(problem.t_inf*SQRT_PI))


def _front_coefficients(
    problem: StefanProblem
) -> tuple[float, float]:
    """Return the solid and convective prefactors of the front equation."""
    alpha = problem.alpha
    d_l = problem.liquid.d
    scale = problem.gamma*d_l**((alpha+1.)/2.)
    solid_term = (problem.solid.k*problem.t_i
                  * problem.solid.d**((alpha-1.)/2.)/scale)
    convective_term = problem.h0*problem.t_inf/(2.**alpha*scale)

    return solid_term, convective_term


def deltas(
    problem: StefanProblem
) -> tuple[float, float]:
    """Return Delta_1 < 0 and Delta_2 > 0, the two terms of LHS(0)."""
    solid_term, convective_term = _front_coefficients(problem)
    return -solid_term*gamma(problem.alpha/2.+1.)/SQRT_PI, convective_term


def f1(
    x: float,
    problem: StefanProblem
) -> float:
    """Return 1/U(alpha/2+1/2, 1/2, x^2 omega^2), increasing from
    Gamma(alpha/2+1)/sqrt(pi)."""
    if x < 0.:
        raise ValidationError(f"f1 needs x >= 0, got {x}")
    y = x*problem.omega
    n = problem.integer_order
    if n is None:
        return 1./kummer_u(problem.alpha/2.+.5, .5, y*y)

    return 1./(SQRT_PI*2.**n*inerfc(n, y, scaled=True))


def f2(
    x: float,
    problem: StefanProblem
) -> float:
    """Return 1/[M(alpha/2+1/2, 1/2, x^2)
    + 2 (sqrt(d_l) h0/k_l) x M(alpha/2+1, 3/2, x^2)], decreasing from 1."""
    if x < 0.:
        raise ValidationError(f"f2 needs x >= 0, got {x}")
    if math.isinf(problem.h0):
        raise ValidationError("f2 is undefined for h0 = inf")
    biot = math.sqrt(problem.liquid.d)*problem.h0/problem.liquid.k
    n = problem.integer_order
    if n is None:
        alpha = problem.alpha
        denominator = (kummer_m(alpha/2.+.5, .5, x*x)
                       + 2.*biot*x*kummer_m(alpha/2.+1., 1.5, x*x))
        return 1./denominator

    e_n, f_n = en_fn(n, x)
    bracket = gamma(n/2.+1.)*e_n + biot*gamma(n/2.+.5)*f_n

    return 1./(_exp(x*x)*2.**n*bracket)


def front_equation_lhs(
    x: float,
    problem: StefanProblem
) -> float:
    """
    Left-hand side of the front equation.

    -(k_s t_i d_s^((alpha-1)/2) / (gamma d_l^((alpha+1)/2))) f1(x)
    + (h0 t_inf / (gamma 2^alpha d_l^((alpha+1)/2))) f2(x)
    """
    solid_term, convective_term = _front_coefficients(problem)
    return -solid_term*f1(x, problem) + convective_term*f2(x, problem)


def front_residual(
    x: float,
    problem: StefanProblem
) -> float:
    """Return LHS(x) - x^(alpha+1), decreasing with a single positive root."""
    return front_equation_lhs(x, problem) - x**(problem.alpha+1.)


def liquid_coefficients(
    nu: float,
    problem: StefanProblem
) -> tuple[float, float]:
    """Return E_l and F_l from the interface and convective conditions."""
    even, odd = kernels(problem.alpha, nu, problem.integer_order)
    d_l = problem.liquid.d
    denominator = _guard(
        "k_l M + 2 sqrt(d_l) h0 nu M'",
        problem.liquid.k*even + 2.*math.sqrt(d_l)*problem.h0*odd)
    f_l = -2.*problem.h0*problem.t_inf*math.sqrt(d_l)*even/denominator
    e_l = -odd/_guard("M(-alpha/2, 1/2, -nu^2)", even)*f_l

    return e_l, f_l


def solid_coefficients(
    nu: float,
    problem: StefanProblem
) -> tuple[float, float]:
    """Return E_s, F_s making Psi_s vanish at the front and tend to
    -t_i x^alpha far from it."""
    alpha = problem.alpha
    d_s = problem.solid.d
    y = nu*problem.omega
    n = problem.integer_order
    if n is None:
        even, odd = kernels(alpha, y)
        big_m = kummer_m(alpha/2.+.5, .5, y*y)
        big_u = _guard("U(alpha/2+1/2, 1/2, nu^2 omega^2)",
                       kummer_u(alpha/2.+.5, .5, y*y))
        f_s = -problem.t_i*2.**(alpha+1.)*d_s**(alpha/2.)*big_m/big_u
        e_s = -odd/_guard("M(-alpha/2, 1/2, -nu^2 omega^2)", even)*f_s
        return e_s, f_s

    e_n, f_n = en_fn(n, y)
    # E_n - F_n = i^n erfc, computed without cancellation
    difference = _guard("i^n erfc(nu omega)", inerfc(n, y))
    scale = 2.**n*problem.t_i*d_s**(n/2.)*gamma(n+1.)/difference
    e_s = scale*f_n/(2.**n*gamma(n/2.+1.))
    f_s = -scale*e_n/(2.**(n-1)*gamma(n/2.+.5))

    return e_s, f_s


def coefficients_from_nu(
    nu: float,
    problem: StefanProblem
) -> tuple[float, float, float, float]:
    """
    Compute the coefficients of the similarity solution for a given nu.

    Parameters
    ----------
    nu : float
        front coefficient, nu > 0
    problem : StefanProblem

    Returns
    -------
    tuple[float, float, float, float]
        E_l, F_l, E_s, F_s

    Raises
    ------
    DivisionGuardError
        when a denominator underflows

    """
    if not nu > 0.:
        raise ValidationError(f"nu must be > 0, got {nu}")
    e_l, f_l = liquid_coefficients(nu, problem)
    e_s, f_s = solid_coefficients(nu, problem)

    return e_l, f_l, e_s, f_s


def build_solution(
    nu: float,
    problem: StefanProblem
) -> SimilaritySolution:
    """Build the similarity solution of problem for a given nu."""
    e_l, f_l, e_s, f_s = coefficients_from_nu(nu, problem)
    return SimilaritySolution(
        nu=nu, omega=problem.omega, e_l=e_l, f_l=f_l, e_s=e_s, f_s=f_s,
        problem=problem)


def conduction_coefficients(
    problem: StefanProblem
) -> tuple[float, float]:
    """Return E_s, F_s of the pure conduction problem below threshold."""
    alpha = problem.alpha
    k_s = problem.solid.k
    sqrt_d = math.sqrt(problem.solid.d)
    h0 = problem.h0
    g_half = gamma((alpha+1.)/2.)
    numerator = (-problem.t_i*problem.solid.d**(alpha/2.)*k_s*gamma(alpha+1.)
                 + g_half*h0*sqrt_d*problem.t_inf)
    denominator = k_s*gamma(alpha/2.+1.) + h0*sqrt_d*g_half
    e_s = numerator/denominator
    f_s = 2.*sqrt_d*h0*(e_s - problem.t_inf)/k_s

    return e_s, f_s


def _solve(
    problem: StefanProblem
) -> SolveOutcome:
    if math.isinf(problem.h0):
        raise ValidationError(
            "h0 = inf is the prescribed temperature problem, use "
            "limit_dirichlet.solve_dirichlet")
    threshold = h0_threshold(problem)

    # the branch is decided on the sign of LHS(0) = Delta_1 + Delta_2
    if not front_equation_lhs(0., problem) > 0.:
        e_s, f_s = conduction_coefficients(problem)
        logging.info(
            f"h0 = {problem.h0:.6g} does not exceed the threshold "
            f"{threshold:.6g}: conduction only")
        return ConductionOnly(e_s=e_s, f_s=f_s, threshold=threshold,
                              problem=problem)

    delta_1, delta_2 = deltas(problem)
    spec = MonotoneRootSpec(
        residual=partial(front_residual, problem=problem),
        x_init_hi=1.,
        tol_abs=1e-12,
        tol_res=1e-10*(1.+abs(delta_1)+abs(delta_2)),
        x_lo=0.)
    try:
        nu = solve_monotone(spec)
    except BracketError as err:
        raise BracketError(
            f"front equation above threshold has no bracketed root: {err}"
        ) from err
    if not nu > 0.:
        raise BracketError(f"front equation returned nu = {nu}")

    return TwoPhase(solution=build_solution(nu, problem), threshold=threshold)


def solve(
    problem: StefanProblem
) -> SolveOutcome:
    """
    Solve the melting problem.

    Parameters
    ----------
    problem : StefanProblem

    Returns
    -------
    SolveOutcome
        TwoPhase when h0 exceeds the threshold, ConductionOnly otherwise

    """
    if problem.integer_order is not None:
        return solve_integer_alpha(problem)
    return _solve(problem)


def solve_integer_alpha(
    problem: StefanProblem
) -> SolveOutcome:
    """Solve the problem for alpha = n, through E_n and F_n."""
    if problem.integer_order is None:
        raise ValidationError(
            f"alpha = {problem.alpha} is not an integer")
    return _solve(problem)


def _check_time(
    t: float
) -> None:
    if not t > 0.:
        raise ValidationError(f"t must be > 0, got {t}")


def eval_front(
    sol: SimilaritySolution | ConductionOnly,
    t: float
) -> float:
    """Return s(t) = 2 nu sqrt(d_l t), which is 0 without melting."""
    if t < 0.:
        raise ValidationError(f"t must be >= 0, got {t}")
    if isinstance(sol, ConductionOnly):
        return 0.
    return 2.*sol.nu*math.sqrt(sol.problem.liquid.d*t)


def _profile(
    e: float,
    f: float,
    alpha: float,
    order: int | None,
    x: float,
    t: float,
    d: float
) -> float:
    """Evaluate t^(alpha/2) [E even + F odd] at eta = x/(2 sqrt(d t))."""
    eta = x/(2.*math.sqrt(d*t))
    even, odd = kernels(alpha, eta, order)
    return t**(alpha/2.)*(e*even + f*odd)


def _gradient(
    e: float,
    f: float,
    alpha: float,
    order: int | None,
    x: float,
    t: float,
    d: float
) -> float:
    """Evaluate dPsi/dx of the profile with coefficients E, F."""
    eta = x/(2.*math.sqrt(d*t))
    g_even, g_odd = gradient_kernels(alpha, eta, order)
    return t**((alpha-1.)/2.)/math.sqrt(d)*(e*g_even + f*g_odd)


def eval_liquid(
    sol: SimilaritySolution,
    x: float,
    t: float
) -> float:
    """
    Evaluate the liquid temperature.

    Parameters
    ----------
    sol : SimilaritySolution
    x : float
        0 <= x <= s(t)
    t : float
        t > 0

    Returns
    -------
    float

    Raises
    ------
    ValidationError
        outside the liquid phase

    """
    if isinstance(sol, ConductionOnly):
        raise ValidationError("there is no liquid phase below the threshold")
    _check_time(t)
    front = eval_front(sol, t)
    if x < 0. or x > front*(1.+DOMAIN_SLACK):
        raise ValidationError(
            f"x = {x} is outside the liquid phase [0, {front}] at t = {t}")
    problem = sol.problem

    return _profile(sol.e_l, sol.f_l, problem.alpha, problem.integer_order,
                    x, t, problem.liquid.d)


def eval_solid(
    sol: SimilaritySolution | ConductionOnly,
    x: float,
    t: float
) -> float:
    """Evaluate the solid temperature for x >= s(t)."""
    _check_time(t)
    front = eval_front(sol, t)
    if x < 0. or x < front*(1.-DOMAIN_SLACK):
        raise ValidationError(
            f"x = {x} is outside the solid phase [{front}, inf) at t = {t}")
    problem = sol.problem

    return _profile(sol.e_s, sol.f_s, problem.alpha, problem.integer_order,
                    x, t, problem.solid.d)


def eval_fluxes(
    sol: SimilaritySolution | ConductionOnly,
    x: float,
    t: float
) -> tuple[float, float]:
    """
    Evaluate the conductive fluxes k dPsi/dx of both phases at (x, t).

    The phase that does not contain x gets NaN; at x = s(t) both are given.
    """
    _check_time(t)
    problem = sol.problem
    alpha, order = problem.alpha, problem.integer_order
    front = eval_front(sol, t)

    liquid = math.nan
    if not isinstance(sol, ConductionOnly) and 0. <= x <= front*(1.+DOMAIN_SLACK):
        liquid = problem.liquid.k*_gradient(
            sol.e_l, sol.f_l, alpha, order, x, t, problem.liquid.d)
    solid = math.nan
    if x >= 0. and x >= front*(1.-DOMAIN_SLACK):
        solid = problem.solid.k*_gradient(
            sol.e_s, sol.f_s, alpha, order, x, t, problem.solid.d)

    return liquid, solid


def front_velocity(
    sol: SimilaritySolution,
    t: float
) -> float:
    """Return s'(t) = nu sqrt(d_l/t)."""
    _check_time(t)
    return sol.nu*math.sqrt(sol.problem.liquid.d/t)
