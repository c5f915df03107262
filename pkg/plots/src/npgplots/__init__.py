"""Charts for the npglin benchmark metrics CSVs."""

from .render import PlotSpec, dump_text, render
from .schema import SchemaError, read_rows
from .series import Series, build_series

__all__ = [
    "PlotSpec",
    "SchemaError",
    "Series",
    "build_series",
    "dump_text",
    "read_rows",
    "render",
]
