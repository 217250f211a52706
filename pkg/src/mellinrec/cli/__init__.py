"""Command line interface and recurrence-file format."""
from .main import build_parser, main, run
from .recfile import (
    LinearRhs,
    RecurrenceFile,
    UnresolvedSymbol,
    format_recurrence_file,
    parse_ics_text,
    parse_recurrence_file,
)

__all__ = [
    "LinearRhs",
    "RecurrenceFile",
    "UnresolvedSymbol",
    "build_parser",
    "format_recurrence_file",
    "main",
    "parse_ics_text",
    "parse_recurrence_file",
    "run",
]
