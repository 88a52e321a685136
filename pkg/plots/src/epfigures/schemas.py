"""Validation and loading of the simulation suite's CSV/JSON files.

The renderers consume only the documented file schemas; each loader checks
the header exactly and parses data rows before any drawing happens, so schema
violations fail before an output file is created.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class SchemaMismatch(Exception):
    """Input file does not conform to the documented schema."""


class MissingColumn(SchemaMismatch):
    """A required column is absent from the header."""


# Documented header schemas, keyed by logical table kind.
TRAJECTORY = ["t", "x", "y", "z", "x_I", "y_I", "z_I", "logNorm", "D"]
DRIVE = ["t", "ReJcd", "ImJcd", "deltaCD"]
ADIABATICITY = ["t", "a_pm", "a_mp", "I_pm"]
ADIABATICITY_SWEEP = ["T", "direction", "maxA"]
PERIOD_SWEEP = ["T", "direction", "cdMode", "Dbar", "maxA"]
TOPOLOGY = ["jMin", "xT_cd", "xT_nocd", "enclosedEPs"]

# Columns that hold strings rather than floats.
_STRING_COLUMNS = {"direction", "cdMode"}


def load_table(path: Path | str, columns: list[str]) -> dict[str, np.ndarray]:
    """Load a CSV against an exact header schema.

    Returns a column-name -> array mapping (float arrays except for the
    documented string columns).  Raises MissingColumn when a required column
    is absent, SchemaMismatch for extra columns, empty files, ragged rows,
    or non-numeric data.
    """
    path = Path(path)
    if not path.is_file():
        raise SchemaMismatch(f"{path}: input file does not exist")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        for col in columns:
            if col not in header:
                raise MissingColumn(f"{path}: missing required column {col!r}")
        if header != columns:
            raise SchemaMismatch(
                f"{path}: header {header} does not match schema {columns}"
            )
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    if any(len(row) != len(columns) for row in rows):
        raise SchemaMismatch(f"{path}: ragged row (expected {len(columns)} fields)")

    out: dict[str, np.ndarray] = {}
    for k, name in enumerate(columns):
        values = [row[k].strip() for row in rows]
        if name in _STRING_COLUMNS:
            out[name] = np.array(values)
        else:
            try:
                out[name] = np.array([float(v) for v in values])
            except ValueError as exc:
                raise SchemaMismatch(f"{path}: non-numeric value in column {name!r}: {exc}") from None
    return out


SUMMARY_KEYS = {"T", "direction", "cdMode", "Dbar", "DbarFine", "xT", "enclosedEPs", "maxA"}


def load_summary(path: Path | str) -> dict:
    """Load a loop-summary JSON and check its key set."""
    path = Path(path)
    if not path.is_file():
        raise SchemaMismatch(f"{path}: input file does not exist")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(payload, dict) or set(payload) != SUMMARY_KEYS:
        raise SchemaMismatch(
            f"{path}: summary keys {sorted(payload) if isinstance(payload, dict) else payload} "
            f"do not match {sorted(SUMMARY_KEYS)}"
        )
    return payload
