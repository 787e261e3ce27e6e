#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Root solver.

This module contains the bracketed solver used for the front equations, whose
residual G(x) - x^(alpha+1) is positive at the origin and strictly decreasing
to minus infinity.
"""

from dataclasses import dataclass
from typing import Callable
import logging

import numpy as np
from scipy import optimize

from StefanExact.modules.exceptions import (
    BracketError,
    NonMonotoneError,
)

MAX_DOUBLINGS = 60
MONOTONE_PROBES = 8


@dataclass(frozen=True)
class MonotoneRootSpec:
    """
    Description of a strictly decreasing residual with one positive root.

    Attributes
    ----------
    residual : Callable[[float], float]
        x -> LHS(x) - x^(alpha+1)
    x_init_hi : float
        first upper probe, doubled until the residual turns negative
    tol_abs : float
        absolute tolerance on the root
    tol_res : float
        tolerance on |residual(root)|
    x_lo : float
        lower end of the bracket, where the residual must be positive

    """

    residual: Callable[[float], float]
    x_init_hi: float = 1.
    tol_abs: float = 1e-12
    tol_res: float = 1e-10
    x_lo: float = 1e-12


def _bracket(
    spec: MonotoneRootSpec
) -> tuple[float, float]:
    """Grow [x_lo, x_init_hi] by doubling until the residual changes sign."""
    lo = spec.x_lo
    if not spec.residual(lo) > 0.:
        raise BracketError(
            f"residual is not positive at the lower end x = {lo}")

    hi = spec.x_init_hi
    for _ in range(MAX_DOUBLINGS):
        if spec.residual(hi) < 0.:
            return lo, hi
        # the residual is positive there, so it is a valid lower end
        lo = hi
        hi *= 2.

    raise BracketError(
        f"no sign change up to x = {hi} after {MAX_DOUBLINGS} doublings")


def _check_monotone(
    spec: MonotoneRootSpec,
    lo: float,
    hi: float
) -> None:
    """Raise NonMonotoneError if the residual increases on [lo, hi]."""
    probes = np.linspace(lo, hi, MONOTONE_PROBES)
    values = [spec.residual(float(x)) for x in probes]
    scale = max(abs(v) for v in values)
    for (x0, v0), (x1, v1) in zip(zip(probes, values),
                                  zip(probes[1:], values[1:])):
        if v1 > v0 + 1e-12*scale:
            raise NonMonotoneError(
                f"residual increases from {v0:.6e} at x = {x0:.6g} to "
                f"{v1:.6e} at x = {x1:.6g}")


def solve_monotone(
    spec: MonotoneRootSpec
) -> float:
    """
    Find the unique positive root of a strictly decreasing residual.

    The bracket is grown by doubling x_init_hi, spot-checked for monotonicity
    at 8 points, and then refined with Brent's method, which combines
    bisection with secant and inverse quadratic steps and keeps the sign
    change inside the bracket at every iteration.

    The root is accepted when |residual(x*)| <= tol_res. A root whose
    residual is above tol_res is still accepted, with a warning, when the
    residual changes sign within 2 tol_abs of it: the residual is then
    limited by rounding in its evaluation and x* is accurate to 2 tol_abs.

    Parameters
    ----------
    spec : MonotoneRootSpec

    Returns
    -------
    float
        the root x*

    Raises
    ------
    BracketError
        when the residual is not positive at spec.x_lo, when no sign change is
        found, or when the refined root misses tol_res without a sign change
        within 2 tol_abs of it
    NonMonotoneError
        when the residual increases between two probes

    """
    lo, hi = _bracket(spec)
    _check_monotone(spec, lo, hi)

    root, info = optimize.brentq(
        spec.residual, lo, hi, xtol=spec.tol_abs, rtol=4*np.finfo(float).eps,
        maxiter=500, full_output=True)

    value = spec.residual(root)
    logging.debug(
        f"root {root:.17g} in [{lo:.6g}, {hi:.6g}] after {info.iterations} "
        f"iterations, residual {value:.3e}")
    if abs(value) > spec.tol_res:
        # brentq stops within about tol_abs of the root
        reach = 2.*spec.tol_abs
        left = spec.residual(max(root-reach, lo))
        right = spec.residual(min(root+reach, hi))
        if not left >= 0. >= right:
            raise BracketError(
                f"root {root:.17g} has residual {value:.3e} above "
                f"{spec.tol_res:.3e}")
        logging.warning(
            f"root {root:.17g} is bracketed within {reach:.1e} but its "
            f"residual {value:.3e} exceeds {spec.tol_res:.3e}")

    return float(root)
