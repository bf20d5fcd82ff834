"""Record loading and schema validation for the figure renderer.

Inputs are the CSV/JSON record files written by the experiment CLI. The
renderer never recomputes physics: every plotted series is a column from
these files or a documented analytic curve.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

SWEEP_COLUMNS = (
    "d", "trial", "seed", "purity", "kappa", "outcome_index",
    "fidelity_standard", "fidelity_hw", "fidelity_matched",
    "linear_fidelity_hw", "spectral_error_hw", "spectral_error_matched",
    "analytic_hw_fidelity",
)

CAPACITY_COLUMNS = (
    "d", "trial", "seed", "purity", "kappa", "von_neumann_entropy",
    "renyi2_entropy", "kind",
)

_INT_COLUMNS = {"d", "trial", "seed", "outcome_index"}
_TEXT_COLUMNS = {"kind"}


class SchemaError(ValueError):
    """Input file does not match the documented record schema."""


def _coerce(row: dict, path) -> dict:
    out = {}
    for key, value in row.items():
        if key in _TEXT_COLUMNS:
            out[key] = str(value)
        elif key in _INT_COLUMNS:
            out[key] = int(value)
        else:
            try:
                out[key] = float(value)
            except (TypeError, ValueError):
                raise SchemaError(
                    f"{path}: column {key!r} has non-numeric value "
                    f"{value!r}") from None
    return out


def _validate(rows: list, columns, path) -> list:
    if not rows:
        raise SchemaError(f"{path}: no records")
    for col in columns:
        if col not in rows[0]:
            raise SchemaError(f"{path}: missing column {col!r}")
    return [_coerce(row, path) for row in rows]


def read_records(path, columns) -> list:
    """Parse one CSV or JSON record file and validate it against the
    required column set, naming the offending column on mismatch."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    if path.suffix.lower() == ".json":
        payload = json.loads(path.read_text())
        if not isinstance(payload, list):
            raise SchemaError(f"{path}: expected a JSON array of records")
        rows = payload
    else:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    return _validate(rows, columns, path)


def read_many(paths, columns) -> list:
    records = []
    for p in paths:
        records.extend(read_records(p, columns))
    return records
