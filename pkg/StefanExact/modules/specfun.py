#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Special functions.

This module contains:
    - the Gamma function with an explicit pole check
    - Kummer's function M(a, b, z), summed as a power series, through the
      Kummer transformation for negative arguments and through its large
      argument expansion when |z| is large
    - Kummer's function U(a, b, z), from the Gamma-weighted combination of two
      M functions, falling back to quadrature of its integral representation
      when the two terms cancel
    - the repeated integrals of the complementary error function i^n erfc
    - the even and odd combinations E_n, F_n of i^n erfc

Every function is pure and works on real scalars.
"""

import logging
import math
from typing import NamedTuple

from scipy import integrate, special

from StefanExact.modules.exceptions import (
    SeriesConvergenceError,
    SpecialFunctionOverflow,
    ValidationError,
)

SERIES_TOL = 1e-16
MAX_TERMS = 500
ASYMPTOTIC_Z = 120.
LOG_FLOAT_MAX = 709.
CANCELLATION_RATIO = 1e-6
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
MAX_ORDER = 30


class KummerArgs(NamedTuple):
    """Parameters and argument of a Kummer function."""

    a: float
    b: float
    z: float

    def check_m(self) -> None:
        if is_nonpositive_integer(self.b):
            raise ValidationError(
                f"M(a, b, z) is undefined for b = {self.b}, a nonpositive "
                "integer")

    def check_u(self) -> None:
        for name, value in (("a", self.a), ("a-b+1", self.a - self.b + 1)):
            if is_nonpositive_integer(value):
                raise ValidationError(
                    f"U(a, b, z) is not handled for {name} = {value}, a "
                    "nonpositive integer")
        if self.z < 0.:
            raise ValidationError(
                f"U(a, b, z) is real only for z >= 0, got z = {self.z}")


def is_nonpositive_integer(
    x: float
) -> bool:
    """Return True for 0, -1, -2, ..."""
    return x <= 0. and float(x).is_integer()


def gamma(
    x: float
) -> float:
    """
    Compute the Gamma function.

    Parameters
    ----------
    x : float

    Returns
    -------
    float

    Raises
    ------
    ValidationError
        at the poles x = 0, -1, -2, ...

    """
    if is_nonpositive_integer(x):
        raise ValidationError(f"Gamma has a pole at x = {x}")
    return float(special.gamma(x))


def _power_series(
    a: float,
    b: float,
    z: float
) -> float:
    """Sum the power series of M(a, b, z) until the terms stop contributing."""
    term = 1.
    total = 1.
    for s in range(1, MAX_TERMS):
        term *= (a+s-1)/((b+s-1)*s)*z
        total += term
        if term == 0.:
            return total
        next_ratio = abs((a+s)/((b+s)*(s+1))*z)
        if abs(term) < SERIES_TOL*abs(total) and next_ratio < 1.:
            return total
    raise SeriesConvergenceError(
        f"M({a}, {b}, {z}) did not converge in {MAX_TERMS} terms")


def _asymptotic_sum(
    p: float,
    q: float,
    z: float
) -> float:
    """Sum (p)_k (q)_k / (k! z^k), truncated at its smallest term."""
    term = 1.
    total = 1.
    for k in range(1, MAX_TERMS):
        next_term = term*(p+k-1)*(q+k-1)/(k*z)
        if next_term == 0.:
            return total
        if abs(next_term) >= abs(term):
            return total
        term = next_term
        total += term
        if abs(term) < SERIES_TOL*abs(total):
            return total
    return total


def _scaled_exp(
    log_scale: float,
    sign: float,
    series: float
) -> float:
    if log_scale > LOG_FLOAT_MAX:
        return math.copysign(math.inf, sign*series)
    return sign*math.exp(log_scale)*series


def _asymptotic_positive(
    a: float,
    b: float,
    z: float
) -> float:
    """Large positive z expansion of M(a, b, z)."""
    # M(a, b, z) ~ Gamma(b)/Gamma(a) e^z z^(a-b) sum (b-a)_k (1-a)_k / k! z^k
    series = _asymptotic_sum(b-a, 1.-a, z)
    log_scale = (z + (a-b)*math.log(z) + special.gammaln(b)
                 - special.gammaln(a))
    sign = special.gammasgn(b)*special.gammasgn(a)
    return _scaled_exp(float(log_scale), float(sign), series)


def _asymptotic_negative(
    a: float,
    b: float,
    y: float
) -> float:
    """Large negative z expansion of M(a, b, z)."""
    # M(a, b, -y) ~ Gamma(b)/Gamma(b-a) y^(-a) sum (a)_k (a-b+1)_k / k! y^k
    series = _asymptotic_sum(a, a-b+1., y)
    log_scale = (-a*math.log(y) + special.gammaln(b)
                 - special.gammaln(b-a))
    sign = special.gammasgn(b)*special.gammasgn(b-a)
    return _scaled_exp(float(log_scale), float(sign), series)


def kummer_m(
    a: float,
    b: float,
    z: float
) -> float:
    """
    Compute Kummer's function M(a, b, z).

    The power series is summed until a term falls below 1e-16 times the
    partial sum, with a cap of 500 terms. Negative arguments go through
    M(a, b, z) = e^z M(b-a, b, -z), so that the summed series has terms of one
    sign whenever b > 0 and b-a > 0. For |z| beyond 120 the large argument
    expansions are used instead.

    Parameters
    ----------
    a : float
    b : float
        must not be zero or a negative integer
    z : float

    Returns
    -------
    float
        +-inf when the value overflows a double

    Raises
    ------
    ValidationError
        when b is a nonpositive integer
    SeriesConvergenceError
        when the term cap is reached first

    """
    KummerArgs(a, b, z).check_m()
    if z == 0. or a == 0.:
        return 1.
    if is_nonpositive_integer(a):
        # terminating sum, a polynomial of degree -a
        return _power_series(a, b, z)
    if z < 0.:
        c = b-a
        if is_nonpositive_integer(c):
            return math.exp(z)*_power_series(c, b, -z)
        if -z > ASYMPTOTIC_Z:
            return _asymptotic_negative(a, b, -z)
        return math.exp(z)*_power_series(c, b, -z)
    if z > ASYMPTOTIC_Z:
        return _asymptotic_positive(a, b, z)
    return _power_series(a, b, z)


def _u_quadrature(
    a: float,
    b: float,
    z: float
) -> float:
    """
    Integrate U(a, b, z) = z^-a / Gamma(a) int_0^inf e^-s s^(a-1)
    (1+s/z)^(b-a-1) ds.

    For a < 1 the substitution u = s^a removes the endpoint singularity.
    """
    power = b-a-1.
    if a < 1.:
        def integrand(u: float) -> float:
            s = u**(1./a)
            return math.exp(-s)*(1.+s/z)**power
        weight = 1./a
    else:
        def integrand(s: float) -> float:
            return math.exp(-s)*s**(a-1.)*(1.+s/z)**power
        weight = 1.

    value, _ = integrate.quad(
        integrand, 0., math.inf, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
        limit=200)

    return weight*value*z**(-a)/gamma(a)


def kummer_u(
    a: float,
    b: float,
    z: float
) -> float:
    """
    Compute Kummer's function U(a, b, z) for real z >= 0.

    Parameters
    ----------
    a : float
    b : float
    z : float

    Returns
    -------
    float

    Raises
    ------
    ValidationError
        when a or a-b+1 is a nonpositive integer, when z < 0, or when U is
        unbounded at z = 0

    """
    KummerArgs(a, b, z).check_u()

    if float(b).is_integer():
        # the two-term formula has poles at integer b
        if a > 0. and z > 0.:
            return _u_quadrature(a, b, z)
        raise ValidationError(
            f"U({a}, {b}, {z}) with integer b needs a > 0 and z > 0")

    if z == 0.:
        if b < 1.:
            return gamma(1.-b)/gamma(a-b+1.)
        raise ValidationError(f"U({a}, {b}, 0) is unbounded for b >= 1")

    first = gamma(1.-b)/gamma(a-b+1.)*kummer_m(a, b, z)
    second = gamma(b-1.)/gamma(a)*z**(1.-b)*kummer_m(a-b+1., 2.-b, z)
    total = first+second

    largest = max(abs(first), abs(second))
    if math.isfinite(total) and abs(total) >= CANCELLATION_RATIO*largest:
        return total

    logging.debug(
        f"U({a}, {b}, {z}): terms {first:.3e} and {second:.3e} cancel, "
        "switching to quadrature")
    if a > 0.:
        return _u_quadrature(a, b, z)
    raise SpecialFunctionOverflow(
        f"U({a}, {b}, {z}) lost all significant digits to cancellation")


def _check_order(
    n: int
) -> None:
    if int(n) != n or n < 0 or n > MAX_ORDER:
        raise ValidationError(
            f"order n must be an integer in [0, {MAX_ORDER}], got {n}")


def _inerfc_forward(
    n: int,
    x: float,
    scaled: bool
) -> float:
    """Forward recurrence of i^n erfc(x), stable for x <= 0 and small x."""
    if scaled:
        previous = 2./math.sqrt(math.pi)
        current = float(special.erfcx(x))
    else:
        previous = 2./math.sqrt(math.pi)*math.exp(-x*x)
        current = float(special.erfc(x))
    for k in range(1, n+1):
        previous, current = current, (-x*current + 0.5*previous)/k

    return current


def _inerfc_backward(
    n: int,
    x: float,
    scaled: bool
) -> float:
    """Backward recurrence of the ratios of i^k erfc(x), for positive x."""
    # ratios r_k = f_k/f_(k-1) from r_(k-1) = 1/(2 (k r_k + x)), r_top = 0
    top = max(n+10, math.ceil((math.sqrt(2.*n) + 20./x)**2/2.) + 10)
    ratio = 0.
    product = 1.
    for k in range(top, 1, -1):
        ratio = 1./(2.*(k*ratio + x))
        if k-1 <= n:
            product *= ratio
    first = special.erfcx(x) if scaled else special.erfc(x)

    return float(first)*product


def inerfc(
    n: int,
    x: float,
    scaled: bool = False
) -> float:
    """
    Compute the repeated integral i^n erfc(x).

    The three-term recurrence
    i^n erfc(x) = -(x/n) i^(n-1) erfc(x) + i^(n-2) erfc(x) / (2n)
    is run forwards when x <= 0 or x sqrt(2(n+1)) <= 5, where it is stable
    enough; otherwise the ratios of consecutive orders are obtained by running
    it backwards from a far starting order, and multiplied onto erfc(x).

    Parameters
    ----------
    n : int
        order, 0 <= n <= 30
    x : float
    scaled : bool, optional
        if True return e^(x^2) i^n erfc(x), which does not underflow for
        large positive x. The default is False.

    Returns
    -------
    float

    Raises
    ------
    SpecialFunctionOverflow
        when the result is not representable

    """
    _check_order(n)
    if n == 0:
        value = float(special.erfcx(x) if scaled else special.erfc(x))
    elif x == 0.:
        value = 1./(2.**n*gamma(n/2.+1.))
    elif x < 0. or x*math.sqrt(2.*(n+1)) <= 5.:
        value = _inerfc_forward(n, x, scaled)
    else:
        value = _inerfc_backward(n, x, scaled)

    if not math.isfinite(value):
        raise SpecialFunctionOverflow(f"i^{n} erfc({x}) overflows")

    return value


def en_fn(
    n: int,
    z: float
) -> tuple[float, float]:
    """
    Compute the even and odd parts of i^n erfc.

    E_n(z) = [i^n erfc(z) + i^n erfc(-z)]/2 and
    F_n(z) = [i^n erfc(-z) - i^n erfc(z)]/2, so that E_0 = 1 and F_0 = erf.

    Parameters
    ----------
    n : int
    z : float

    Returns
    -------
    tuple[float, float]
        E_n(z), F_n(z)

    """
    _check_order(n)
    if n == 0:
        return 1., float(special.erf(z))
    plus = inerfc(n, z)
    minus = inerfc(n, -z)

    return 0.5*(plus+minus), 0.5*(minus-plus)
