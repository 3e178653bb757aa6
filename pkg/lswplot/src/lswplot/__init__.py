"""lswplot: figures from lswlab's delimited output files."""

__version__ = "0.1.0"

from .curvefile import CurveFile, RecordFile, SchemaError, read_curve, read_record
from .render import (
    build_campaign_figure,
    build_exclusion_figure,
    render_campaign,
    render_exclusion,
)
