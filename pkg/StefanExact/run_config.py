#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Run configuration.

This script turns the JSON document given with --config into a validated
RunConfig. A document looks like

{
  "problem": {"alpha": 0, "gamma": 1, "t_i": 1, "t_inf": 1, "h0": 10,
              "liquid": {"k": 1, "d": 1}, "solid": {"k": 1, "d": 1}},
  "sampling": {"x": [0, 0.5, 1], "t": [0.1, 1, 10]},
  "sweep": {"parameter": "h0", "values": [1, 10, 100]},
  "limit": {"h0_ladder": [10, 100]},
  "oracle": {"nx": 400, "t_start": 0.05, "t_end": 1, "x_max": 8,
             "max_steps": 10000000},
  "output": {"path": "out.csv", "format": "csv"}
}

where only "problem" is required, "sweep" is required by the sweep command,
and "h0" may be left out by the limit command.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
import json
import math

from StefanExact.modules.exceptions import ConfigError, ValidationError
from StefanExact.modules.stefan_model import (
    SWEEPABLE,
    PhaseProps,
    StefanProblem,
)

COMMANDS = ("solve", "verify", "sweep", "limit")
FORMATS = ("csv", "json")
DEFAULT_TIMES = (.1, 1., 10.)
DEFAULT_X_POINTS = 101

_TOP_KEYS = {"command", "problem", "sampling", "sweep", "limit", "oracle",
             "output"}
_PROBLEM_KEYS = {"alpha", "gamma", "t_i", "t_inf", "h0", "liquid", "solid"}
_PHASE_KEYS = {"k", "d"}
_SAMPLING_KEYS = {"x", "t"}
_SWEEP_KEYS = {"parameter", "values"}
_LIMIT_KEYS = {"h0_ladder", "multipliers"}
_ORACLE_KEYS = {"x_max", "nx", "t_start", "t_end", "cfl", "max_steps"}
_ORACLE_INTEGERS = {"nx", "max_steps"}
_OUTPUT_KEYS = {"path", "format"}


@dataclass(frozen=True)
class Sampling:
    """Profile sampling; x None means 101 points over [0, 4 s(t_end)]."""

    t: tuple[float, ...] = DEFAULT_TIMES
    x: tuple[float, ...] | None = None


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class OutputSpec:
    path: Path | None = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration.

    Attributes
    ----------
    command : str
        one of solve, verify, sweep, limit
    problem : StefanProblem
    sampling : Sampling
    sweep : SweepSpec | None
    h0_ladder : tuple[float, ...] | None
        absolute h0 values of the limit study
    ladder_multipliers : tuple[float, ...] | None
        h0 values of the limit study as multiples of the threshold
    oracle : dict[str, float | int]
        overrides of the default oracle grid
    output : OutputSpec
    integer_alpha : bool
        True when alpha is an integer and the E_n, F_n route is taken

    """

    command: str
    problem: StefanProblem
    sampling: Sampling = Sampling()
    sweep: SweepSpec | None = None
    h0_ladder: tuple[float, ...] | None = None
    ladder_multipliers: tuple[float, ...] | None = None
    oracle: dict[str, float | int] = field(default_factory=dict)
    output: OutputSpec = OutputSpec()
    integer_alpha: bool = False

    def echo(self) -> dict[str, Any]:
        """Return the configuration as it is recorded in summaries."""
        return {
            "command": self.command,
            "problem": {key: (None if math.isinf(value) else value)
                        for key, value in self.problem.as_dict().items()},
            "route": "integer" if self.integer_alpha else "kummer",
        }


def _reject_unknown(
    section: dict[str, Any],
    allowed: set[str],
    where: str
) -> None:
    """Raise ConfigError on the first key of section not in allowed."""
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in {where}",
                              field=f"{where}.{key}")


def _object(
    value: Any,
    where: str
) -> dict[str, Any]:
    """Return value when it is a JSON object."""
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be an object", field=where)
    return value


def _number(
    value: Any,
    name: str
) -> float:
    """Return value as a float, rejecting booleans and non-numbers."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number", field=name)
    return float(value)


def _numbers(
    value: Any,
    name: str
) -> tuple[float, ...]:
    """Return a non-empty list of numbers as a tuple of floats."""
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of numbers",
                          field=name)
    return tuple(_number(item, name) for item in value)


def _increasing(
    values: tuple[float, ...],
    name: str
) -> tuple[float, ...]:
    """Return values when they are strictly increasing."""
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name} must be strictly increasing", field=name)
    return values


def _phase(
    value: Any,
    name: str
) -> PhaseProps:
    """Parse the k and d of one phase."""
    section = _object(value, name)
    _reject_unknown(section, _PHASE_KEYS, name)
    for key in _PHASE_KEYS:
        if key not in section:
            raise ConfigError(f"{name}.{key} is required",
                              field=f"{name}.{key}")
    try:
        return PhaseProps(k=_number(section["k"], f"{name}.k"),
                          d=_number(section["d"], f"{name}.d"))
    except ConfigError:
        raise
    except ValidationError as err:
        raise ConfigError(f"{name}.{err}", field=name) from err


def _problem(
    value: Any,
    command: str
) -> StefanProblem:
    """Parse the problem block; only the limit command may omit h0."""
    section = _object(value, "problem")
    _reject_unknown(section, _PROBLEM_KEYS, "problem")
    required = _PROBLEM_KEYS - ({"h0"} if command == "limit" else set())
    for key in sorted(required):
        if key not in section:
            raise ConfigError(f"problem.{key} is required",
                              field=f"problem.{key}")
    scalars = {key: _number(section[key], key)
               for key in ("alpha", "gamma", "t_i", "t_inf", "h0")
               if key in section}
    scalars.setdefault("h0", math.inf)
    liquid = _phase(section["liquid"], "liquid")
    solid = _phase(section["solid"], "solid")
    try:
        return StefanProblem(liquid=liquid, solid=solid, **scalars)
    except ValidationError as err:
        raise ConfigError(str(err), field=str(err).split()[0]) from err


def _sampling(
    value: Any
) -> Sampling:
    """Parse the sampling block, with positive increasing times."""
    section = _object(value, "sampling")
    _reject_unknown(section, _SAMPLING_KEYS, "sampling")
    times = DEFAULT_TIMES
    if "t" in section:
        times = _increasing(_numbers(section["t"], "sampling.t"),
                            "sampling.t")
        if times[0] <= 0.:
            raise ConfigError("sampling.t must be > 0", field="sampling.t")
    xs = None
    if "x" in section:
        xs = _increasing(_numbers(section["x"], "sampling.x"), "sampling.x")
        if xs[0] < 0.:
            raise ConfigError("sampling.x must be >= 0", field="sampling.x")

    return Sampling(t=times, x=xs)


def _sweep(
    value: Any
) -> SweepSpec:
    """Parse the sweep block: a sweepable parameter and its values."""
    section = _object(value, "sweep")
    _reject_unknown(section, _SWEEP_KEYS, "sweep")
    parameter = section.get("parameter")
    if parameter not in SWEEPABLE:
        raise ConfigError(
            f"sweep.parameter must be one of {', '.join(SWEEPABLE)}",
            field="sweep.parameter")
    if "values" not in section:
        raise ConfigError("sweep.values is required", field="sweep.values")

    return SweepSpec(parameter=parameter,
                     values=_numbers(section["values"], "sweep.values"))


def _limit(
    value: Any
) -> tuple[tuple[float, ...] | None, tuple[float, ...] | None]:
    section = _object(value, "limit")
    _reject_unknown(section, _LIMIT_KEYS, "limit")
    if len(section) > 1:
        raise ConfigError("limit takes either h0_ladder or multipliers",
                          field="limit")
    ladder = multipliers = None
    if "h0_ladder" in section:
        ladder = _increasing(_numbers(section["h0_ladder"], "limit.h0_ladder"),
                             "limit.h0_ladder")
    if "multipliers" in section:
        multipliers = _increasing(
            _numbers(section["multipliers"], "limit.multipliers"),
            "limit.multipliers")

    return ladder, multipliers


def _oracle(
    value: Any
) -> dict[str, float | int]:
    """Parse the oracle block; nx and max_steps must be integers."""
    section = _object(value, "oracle")
    _reject_unknown(section, _ORACLE_KEYS, "oracle")
    grid = {}
    for key, item in section.items():
        number = _number(item, f"oracle.{key}")
        if key in _ORACLE_INTEGERS:
            if not number.is_integer():
                raise ConfigError(f"oracle.{key} must be an integer",
                                  field=f"oracle.{key}")
            number = int(number)
        grid[key] = number
    return grid


def _output(
    value: Any
) -> OutputSpec:
    """Parse the output block."""
    section = _object(value, "output")
    _reject_unknown(section, _OUTPUT_KEYS, "output")
    output_format = section.get("format", "csv")
    if output_format not in FORMATS:
        raise ConfigError("output.format must be csv or json",
                          field="output.format")
    path = section.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path must be a string", field="output.path")

    return OutputSpec(path=Path(path) if path else None, format=output_format)


def parse_config(
    text: str,
    command: str | None = None
) -> RunConfig:
    """
    Parse and validate a JSON run configuration.

    Parameters
    ----------
    text : str
        JSON document
    command : str | None, optional
        command chosen on the command line, which must agree with the
        "command" key of the document when both are given. The default is
        None.

    Returns
    -------
    RunConfig

    Raises
    ------
    ConfigError
        on malformed JSON, with line and column, or naming the offending
        field

    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"invalid JSON: {err.msg}", line=err.lineno,
                          column=err.colno) from err

    document = _object(document, "configuration")
    _reject_unknown(document, _TOP_KEYS, "configuration")

    declared = document.get("command")
    if declared is not None and declared not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}",
                          field="command")
    if command is not None and declared is not None and command != declared:
        raise ConfigError(
            f"command '{command}' does not match '{declared}' in the "
            "configuration", field="command")
    command = command or declared
    if command not in COMMANDS:
        raise ConfigError("command is required", field="command")

    if "problem" not in document:
        raise ConfigError("problem is required", field="problem")
    problem = _problem(document["problem"], command)

    sampling = _sampling(document["sampling"]) if "sampling" in document \
        else Sampling()
    sweep = _sweep(document["sweep"]) if "sweep" in document else None
    if command == "sweep" and sweep is None:
        raise ConfigError("sweep is required by the sweep command",
                          field="sweep")
    ladder, multipliers = _limit(document["limit"]) if "limit" in document \
        else (None, None)
    oracle = _oracle(document["oracle"]) if "oracle" in document else {}
    output = _output(document["output"]) if "output" in document \
        else OutputSpec()

    return RunConfig(
        command=command,
        problem=problem,
        sampling=sampling,
        sweep=sweep,
        h0_ladder=ladder,
        ladder_multipliers=multipliers,
        oracle=oracle,
        output=output,
        integer_alpha=problem.integer_order is not None)


def load_config(
    path: Path,
    command: str | None = None
) -> RunConfig:
    """Read the JSON file at path and parse it for command."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err.strerror}") from err
    return parse_config(text, command)
