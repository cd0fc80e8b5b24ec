"""Rendering for lattice-game outputs: reads only the documented file formats."""

__version__ = "0.1.0"

from .formats import FormatError, read_heatmap, read_rho, read_snapshot, read_timeseries
from .render import (
    FOUR_CLASS_PALETTE,
    PURE_PALETTE,
    render_heatmap,
    render_rho,
    render_snapshot,
    render_timeseries,
)
