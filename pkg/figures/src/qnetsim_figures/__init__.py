"""Figure rendering for qnetsim experiment CSVs."""

from .render import (
    FIGURE_IDS,
    FigureInputError,
    FigureSpec,
    MetricsPoint,
    build_figure,
    load_points,
    render,
)

__version__ = "0.1.0"
