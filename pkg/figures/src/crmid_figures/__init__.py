"""Figure rendering for crmid experiment output."""

from .render import (
    REQUIRED_NETWORKS,
    Figure,
    FigureDataError,
    FigureJob,
    Series,
    draw,
    load_series,
    render,
)

__all__ = [
    "REQUIRED_NETWORKS",
    "Figure",
    "FigureDataError",
    "FigureJob",
    "Series",
    "draw",
    "load_series",
    "render",
]

__version__ = "1.0.0"
