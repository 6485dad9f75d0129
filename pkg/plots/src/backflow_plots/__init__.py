"""Publication-style figures from backflow sweep CSV files."""

__version__ = "0.1.0"

from .reader import SchemaError, SweepTable, read_tables
from .figures import FigureSpec, render

__all__ = ["FigureSpec", "SchemaError", "SweepTable", "read_tables", "render", "__version__"]
