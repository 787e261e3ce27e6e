#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exceptions.

This module contains the exception hierarchy shared by the library and the
command line application. Validation problems derive from ValueError,
numerical failures derive from ArithmeticError, so that the command line can
map each family onto its own exit code.
"""


class StefanExactError(Exception):
    """Base class of every error raised by StefanExact."""


class ValidationError(StefanExactError, ValueError):
    """Invalid parameters, or evaluation outside the domain of a phase."""


class ConfigError(ValidationError):
    """Invalid run configuration document."""

    def __init__(
        self,
        message: str,
        field: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        self.field = field
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class NumericalError(StefanExactError, ArithmeticError):
    """A numerical procedure failed to deliver its accuracy target."""


class SeriesConvergenceError(NumericalError):
    """A power or asymptotic series hit its term cap before converging."""


class SpecialFunctionOverflow(NumericalError):
    """A special function value is not representable as a float."""


class DivisionGuardError(NumericalError):
    """A denominator underflowed below the guard magnitude."""


class BracketError(NumericalError):
    """No sign change could be bracketed for a monotone root."""


class NonMonotoneError(NumericalError):
    """A residual expected to be strictly decreasing was found increasing."""


class OracleStabilityError(NumericalError):
    """The finite-difference oracle produced non-finite or unbounded values."""


class FrontExitError(NumericalError):
    """The tracked front left the computational domain."""


class OracleBudgetError(NumericalError):
    """An oracle run would take more time steps than its budget allows."""
