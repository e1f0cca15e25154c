"""Figure rendering for biclique-lab CSV output."""

from .render import (
    PALETTE,
    STYLE_P25,
    STYLE_P50,
    STYLE_P90,
    STYLE_SOLVABLE,
    PlotSpec,
    PlottedSeries,
    RenderResult,
    render,
    render_to_file,
)
from .schemas import (
    KINDS,
    SCHEMAS,
    CurvePoint,
    DistanceRow,
    PhaseRow,
    SchemaError,
    parse_curve,
    parse_distance,
    parse_phase,
    split_csv,
    validate_header,
)

__version__ = "0.1.0"

__all__ = [
    "PALETTE",
    "STYLE_P25",
    "STYLE_P50",
    "STYLE_P90",
    "STYLE_SOLVABLE",
    "PlotSpec",
    "PlottedSeries",
    "RenderResult",
    "render",
    "render_to_file",
    "KINDS",
    "SCHEMAS",
    "CurvePoint",
    "DistanceRow",
    "PhaseRow",
    "SchemaError",
    "parse_curve",
    "parse_distance",
    "parse_phase",
    "split_csv",
    "validate_header",
    "__version__",
]
