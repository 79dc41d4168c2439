"""Figure rendering for the weak-measurement control simulator's CSV output."""

__version__ = "0.1.0"

from .render import KINDS, FigureJob, render
from .schema import SchemaError, Table, check_table, parse_table

__all__ = ["KINDS", "FigureJob", "render", "SchemaError", "Table", "check_table", "parse_table"]
