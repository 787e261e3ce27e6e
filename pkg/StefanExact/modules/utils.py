#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Utils.

This module contains:
    - the implementation of a loading animation and of a timer
    - the writers of tables and JSON documents with a fixed float format
    - the number of threads allowed for sweeps
"""

from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Iterator
import json
import logging
import math
import os

from rich.console import Console
import pandas as pd

FLOAT_FORMAT = "%.17g"
THREADS_VARIABLE = "STEFAN_EXACT_THREADS"


@contextmanager
def Loading(
    message: str
) -> Iterator[None]:
    """
    Implement loading animation.

    The animation goes to stderr, so that nothing but data reaches stdout.

    Parameters
    ----------
    message : str
        text to print during the animation

    Returns
    -------
    None

    """
    console = Console(stderr=True)
    try:
        with console.status(f"[bold green]{message}..."):
            yield
    finally:
        console.log(f"[bold green]{message}... Done")


@contextmanager
def Timer(
    description: str
) -> Iterator[None]:
    """
    Implement timer.

    Parameters
    ----------
    description : str
        text to print

    Returns
    -------
    None

    """
    start = datetime.now()
    try:
        yield
    finally:
        elapsed = datetime.now()-start
        logging.info(f"{description}, elapsed: {elapsed}")


def _finite_or_none(
    value: Any
) -> Any:
    """Replace non-finite floats with None, recursively."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite_or_none(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(item) for item in value]
    return value


def write_table(
    table: pd.DataFrame,
    path: Path
) -> None:
    """
    Write a table as CSV with 17 significant digits and '\\n' line endings.

    Parameters
    ----------
    table : pd.DataFrame
    path : Path

    Returns
    -------
    None

    """
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                 lineterminator="\n")
    logging.info(f"{len(table)} rows written to {path}")


def table_records(
    table: pd.DataFrame
) -> list[dict[str, Any]]:
    """Return the rows of a table as dictionaries of plain Python values."""
    return [
        {key: (value.item() if hasattr(value, "item") else value)
         for key, value in row.items()}
        for row in table.to_dict(orient="records")]


def write_json(
    document: dict[str, Any],
    path: Path
) -> None:
    """
    Write a JSON document; non-finite floats become null.

    Floats use the shortest representation that reads back to the same
    double, so identical inputs give identical files.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_finite_or_none(document), indent=2, allow_nan=False)
    with open(path, "w", encoding="utf-8", newline="\n") as stream:
        stream.write(text + "\n")
    logging.info(f"JSON written to {path}")


def max_threads() -> int:
    """Return the sweep concurrency, capped by STEFAN_EXACT_THREADS."""
    default = os.cpu_count() or 1
    value = os.environ.get(THREADS_VARIABLE)
    if value is None:
        return default
    try:
        threads = int(value)
    except ValueError:
        logging.warning(
            f"{THREADS_VARIABLE}={value!r} is not an integer, using {default}")
        return default

    return max(threads, 1)
