"""Report generation: hints, scratchblocks text, console/CSV/JSON output and annotated projects."""

from .annotate import BlockNotFound, annotate_document, annotate_project, annotate_sb3
from .hints import (
    FALLBACK_LOCALE,
    HintCatalog,
    MissingHintKey,
    default_catalog,
    parse_properties,
    render_hint,
    self_check,
)
from .scratchblocks import MARKER, find_unit, render_scratchblocks, render_unit
from .writers import (
    console_lines,
    csv_header,
    csv_row,
    csv_text,
    dump_json,
    format_issue,
    issue_counts,
    json_report,
    metrics_lines,
    write_csv,
    write_json_report,
)

__all__ = [
    "BlockNotFound",
    "FALLBACK_LOCALE",
    "HintCatalog",
    "MARKER",
    "MissingHintKey",
    "annotate_document",
    "annotate_project",
    "annotate_sb3",
    "console_lines",
    "csv_header",
    "csv_row",
    "csv_text",
    "default_catalog",
    "dump_json",
    "find_unit",
    "format_issue",
    "issue_counts",
    "json_report",
    "metrics_lines",
    "parse_properties",
    "render_hint",
    "render_scratchblocks",
    "render_unit",
    "self_check",
    "write_csv",
    "write_json_report",
]
