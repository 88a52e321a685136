"""Figure renderers for the epdrive simulation suite's CSV/JSON outputs."""

from .figures import FigureId, FigureSpec, render_figure
from .schemas import MissingColumn, SchemaMismatch, load_summary, load_table

__version__ = "1.0.0"

__all__ = [
    "FigureId",
    "FigureSpec",
    "MissingColumn",
    "SchemaMismatch",
    "load_summary",
    "load_table",
    "render_figure",
]
