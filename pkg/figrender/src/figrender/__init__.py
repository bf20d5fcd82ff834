"""Figure rendering for group-structured estimation experiment outputs."""

from .figures import FigureSpec, render
from .io import (CAPACITY_COLUMNS, SWEEP_COLUMNS, SchemaError, read_many,
                 read_records)

__all__ = [
    "FigureSpec",
    "render",
    "SchemaError",
    "read_records",
    "read_many",
    "SWEEP_COLUMNS",
    "CAPACITY_COLUMNS",
]
