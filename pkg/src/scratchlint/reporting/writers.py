"""Console, CSV and JSON report writers."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import Iterable, Optional, Sequence

from ..finders.base import Issue, finder_ids
from ..metrics import METRIC_NAMES, MetricsRecord
from ..project.nodes import Program
from .hints import FALLBACK_LOCALE, HintCatalog, render_hint
from .scratchblocks import find_unit, render_unit


def format_issue(issue: Issue, hint: str) -> str:
    where = issue.actor if not issue.block_ids else f"{issue.actor}/{issue.block_ids[0]}"
    return f"[{issue.severity.value}] {issue.finder_id} @ {where}: {hint}"


def console_lines(issues: Iterable[Issue], locale: str = FALLBACK_LOCALE, catalog: Optional[HintCatalog] = None) -> list[str]:
    return [format_issue(i, render_hint(i, locale, catalog)) for i in issues]


def metrics_lines(name: str, metrics: MetricsRecord) -> list[str]:
    values = metrics.as_dict()
    return [f"{name}: " + ", ".join(f"{key}={values[key]}" for key in METRIC_NAMES)]


def issue_counts(issues: Iterable[Issue]) -> Counter:
    return Counter(i.finder_id for i in issues)


def csv_header(ids: Optional[Sequence[str]] = None) -> list[str]:
    return ["project", *METRIC_NAMES, *(finder_ids() if ids is None else ids)]


def csv_row(project: str, metrics: MetricsRecord, counts, ids: Optional[Sequence[str]] = None) -> list:
    ids = finder_ids() if ids is None else ids
    values = metrics.as_dict()
    return [project, *(values[m] for m in METRIC_NAMES), *(counts.get(fid, 0) for fid in ids)]


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """RFC 4180 text: CRLF line ends, fields quoted only when needed."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def write_csv(records, ids: Optional[Sequence[str]] = None) -> str:
    """``records`` holds ``(project, MetricsRecord, {finder id: count})`` triples."""
    ids = finder_ids() if ids is None else list(ids)
    return csv_text(csv_header(ids), (csv_row(p, m, c, ids) for p, m, c in records))


def issue_entry(program: Program, issue: Issue, locale: str, catalog: Optional[HintCatalog] = None) -> dict:
    unit = find_unit(program, issue.actor, issue.script_top_block_id)
    return {
        "finderId": issue.finder_id,
        "category": issue.category.value,
        "severity": issue.severity.value,
        "actor": issue.actor,
        "scriptTopBlockId": issue.script_top_block_id,
        "blockIds": list(issue.block_ids),
        "hintKey": issue.hint_key,
        "hintParams": issue.params,
        "hint": render_hint(issue, locale, catalog),
        "scratchblocks": render_unit(unit, issue.block_ids) if unit is not None else None,
    }


def json_report(
    program: Program,
    issues: Sequence[Issue],
    metrics: MetricsRecord,
    locale: str = FALLBACK_LOCALE,
    catalog: Optional[HintCatalog] = None,
) -> dict:
    ordered = sorted(issues, key=Issue.sort_key)
    return {
        "project": {"id": program.project_id, "name": program.name},
        "metrics": metrics.as_dict(),
        "issues": [issue_entry(program, i, locale, catalog) for i in ordered],
        "diagnostics": list(program.diagnostics),
    }


def dump_json(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def write_json_report(program, issues, metrics, locale: str = FALLBACK_LOCALE, catalog=None) -> str:
    return dump_json(json_report(program, issues, metrics, locale, catalog))
