"""Panels rendered from flatmagic run CSVs: orbit and noise curves with 95%
confidence bands, ratio traces with the theory line, witness knee plots."""

from .panels import PanelSpec, Series, extract_series, render
from .schema import EXPECTED_COLUMNS, Row, SchemaError, read_many, read_rows

__version__ = "0.1.0"
