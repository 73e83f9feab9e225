"""poolfig: grouped-bar chart renderer for poolsim summary.csv files."""

from .errors import MissingCell, PoolFigError, SchemaMismatch
from .render import FIGURE_IDS, FigureSpec, load_summary, render

__version__ = "0.1.0"

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "MissingCell",
    "PoolFigError",
    "SchemaMismatch",
    "load_summary",
    "render",
    "__version__",
]
