"""Command-line entry point: fetch or load projects, analyze them and write reports."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .fetcher import (
    FetchError,
    Fetcher,
    MalformedId,
    NotADirectory,
    ProjectSource,
    SourceKind,
    default_cache_dir,
    read_id_list,
    scan_folder,
)
from .finders.base import FinderConfig, UnknownFinder, finder_infos, run_all
from .metrics import compute_metrics
from .project import inventory_from_program, parse_project, parse_project_data
from .project.archive import inventory_from_archive, read_sb3
from .reporting import (
    FALLBACK_LOCALE,
    annotate_project,
    annotate_sb3,
    console_lines,
    csv_header,
    csv_row,
    csv_text,
    default_catalog,
    dump_json,
    issue_counts,
    json_report,
    metrics_lines,
    self_check,
)

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2
REPORT_FORMATS = {".csv": "csv", ".json": "json"}


class Mode(str, Enum):
    CHECK = "CHECK"
    STATS = "STATS"


@dataclass
class CliConfig:
    mode: Mode
    path: Optional[str] = None
    project_id: Optional[int] = None
    id_list: Optional[str] = None
    output: Optional[str] = None
    locale: str = FALLBACK_LOCALE
    finders: Optional[frozenset] = None
    ignore_loose: bool = False
    annotate: bool = False
    fail_on_issue: bool = False
    jobs: int = 1
    long_script_threshold: int = 12
    cache_dir: Optional[str] = None
    finder_config: FinderConfig = field(default_factory=FinderConfig)

    @property
    def report_format(self) -> Optional[str]:
        return REPORT_FORMATS.get(Path(self.output).suffix.lower()) if self.output else None


def _registry_text() -> str:
    lines = ["finders (id, category, hint keys):"]
    for info in finder_infos():
        lines.append(f"  {info.id:34} {info.category.value:13} {', '.join(info.hint_keys)}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scratchlint",
        description="Static analysis of Scratch 3.0 projects: bug patterns, code smells and metrics.",
        epilog=_registry_text(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    mode = parser.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", action="store_const", dest="mode", const=Mode.CHECK, help="run the issue finders")
    mode.add_argument("--stats", action="store_const", dest="mode", const=Mode.STATS, help="compute code metrics")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--path", help="a .sb3 or project .json file, or a folder of them")
    source.add_argument("--projectid", type=_positive_int, help="id of a shared project to download")
    source.add_argument("--idlist", help="file listing one project id per line")
    parser.add_argument("--output", help="report file; the format follows the extension (.csv or .json)")
    parser.add_argument("--lang", default=FALLBACK_LOCALE, help="hint language (en, de, es); default en")
    parser.add_argument("--finders", help="comma separated finder ids to run (default: all)")
    parser.add_argument("--ignore-loose", action="store_true", help="skip blocks that are not attached to a hat")
    parser.add_argument("--annotate", action="store_true", help="also write a copy of each project with hint comments")
    parser.add_argument("--fail-on-issue", action="store_true", help="exit with 1 when any issue is found")
    parser.add_argument("--jobs", type=_positive_int, default=1, help="projects analyzed in parallel")
    parser.add_argument("--long-script-threshold", type=_non_negative_int, default=12, help="block limit for long_script")
    parser.add_argument("--cache-dir", help="where downloaded projects are kept (env SCRATCHLINT_CACHE)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    parser.add_argument("--version", action="version", version=f"scratchlint {__version__}")
    return parser


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must not be negative: {text!r}")
    return value


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.output and Path(args.output).suffix.lower() not in REPORT_FORMATS:
        parser.error(f"--output: unknown report extension {Path(args.output).suffix or '(none)'!r}, use .csv or .json")
    finders = None
    if args.finders is not None:
        finders = frozenset(f.strip() for f in args.finders.split(",") if f.strip())
    try:
        finder_config = FinderConfig(finders, args.ignore_loose, args.long_script_threshold)
    except UnknownFinder as exc:
        parser.error(f"--finders: {exc}")
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    return CliConfig(
        mode=args.mode,
        path=args.path,
        project_id=args.projectid,
        id_list=args.idlist,
        output=args.output,
        locale=args.lang,
        finders=finders,
        ignore_loose=args.ignore_loose,
        annotate=args.annotate,
        fail_on_issue=args.fail_on_issue,
        jobs=args.jobs,
        long_script_threshold=args.long_script_threshold,
        cache_dir=args.cache_dir,
        finder_config=finder_config,
    )


@dataclass
class ProjectResult:
    name: str
    console: list = field(default_factory=list)
    report: Optional[dict] = None
    row: Optional[list] = None
    annotated: Optional[tuple] = None
    issue_count: int = 0
    error: Optional[str] = None


def load(source: ProjectSource, path: Optional[str] = None):
    """Parse one source; returns (program, assets, raw json text, archive bytes or None)."""
    location = path or source.location
    if source.kind is SourceKind.LOCAL_SB3:
        data = Path(location).read_bytes()
        raw, entries = read_sb3(data)
        program = parse_project_data(raw, name=source.resolved_name, source_path=location)
        return program, inventory_from_archive(raw, entries), json.dumps(raw, ensure_ascii=False), data
    text = Path(location).read_text(encoding="utf-8")
    program = parse_project(text, name=source.resolved_name, project_id=source.project_id, source_path=location)
    return program, inventory_from_program(program), text, None


def analyze(source: ProjectSource, path: Optional[str], config: CliConfig) -> ProjectResult:
    result = ProjectResult(source.resolved_name)
    try:
        program, assets, raw, archive = load(source, path)
        metrics = compute_metrics(program)
        if config.mode is Mode.STATS:
            result.console = metrics_lines(program.name, metrics)
            result.report = {"project": {"id": program.project_id, "name": program.name}, "metrics": metrics.as_dict()}
            result.row = csv_row(program.name, metrics, {}, ())
            return result
        issues = run_all(program, assets, config.finder_config)
        result.issue_count = len(issues)
        result.console = [f"== {program.name}: {len(issues)} issue(s)"] + console_lines(issues, config.locale)
        result.report = json_report(program, issues, metrics, config.locale)
        result.row = csv_row(program.name, metrics, issue_counts(issues), config.finder_config.enabled_ids())
        if config.annotate:
            annotated = annotate_project(raw, issues, config.locale)
            if archive is not None:
                result.annotated = (f"{program.name}_annotated.sb3", annotate_sb3(archive, annotated))
            else:
                result.annotated = (f"{program.name}_annotated.json", annotated.encode("utf-8"))
    except Exception as exc:  # noqa: BLE001  a broken project is reported, the batch goes on
        result.error = f"{source.location}: {type(exc).__name__}: {exc}"
    return result


def _analyze_task(task):
    return analyze(*task)


def collect_sources(config: CliConfig) -> list[ProjectSource]:
    if config.path is not None:
        path = Path(config.path)
        if path.is_dir():
            return scan_folder(path)
        if not path.is_file():
            raise FileNotFoundError(f"no such file or directory: {path}")
        return [ProjectSource.local(path)]
    if config.project_id is not None:
        return [ProjectSource.remote(config.project_id)]
    return read_id_list(config.id_list)


def run(config: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    self_check()
    if config.locale not in default_catalog().locales:
        print(f"warning: no hints for language {config.locale!r}, using English", file=err)
    try:
        sources = collect_sources(config)
    except (MalformedId, NotADirectory, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR

    failed = False
    paths: list[Optional[str]] = [None] * len(sources)
    remote = [n for n, s in enumerate(sources) if s.kind is SourceKind.REMOTE_ID]
    if remote:
        fetcher = Fetcher(Path(config.cache_dir) if config.cache_dir else default_cache_dir())
        fetched = fetcher.fetch_many([sources[n].project_id for n in remote], jobs=min(config.jobs, 4) or 1)
        for n, got in zip(remote, fetched):
            paths[n] = got if isinstance(got, FetchError) else str(got)

    tasks, results = [], [None] * len(sources)
    for n, source in enumerate(sources):
        if isinstance(paths[n], FetchError):
            results[n] = ProjectResult(source.resolved_name, error=f"{source.location}: {paths[n]}")
        else:
            tasks.append((n, (source, paths[n], config)))
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            done = pool.map(_analyze_task, [t for _, t in tasks])
            for (n, _), result in zip(tasks, done):
                results[n] = result
    else:
        for n, task in tasks:
            results[n] = _analyze_task(task)

    total_issues = 0
    for result in results:
        if result.error:
            failed = True
            print(f"error: {result.error}", file=err)
            continue
        total_issues += result.issue_count
        for line in result.console:
            print(line, file=out)

    ok = [r for r in results if not r.error]
    if config.output:
        _write_report(config, ok)
    if config.annotate:
        folder = Path(config.output).parent if config.output else Path.cwd()
        for result in ok:
            if result.annotated:
                name, data = result.annotated
                (folder / name).write_bytes(data)
    if failed:
        return EXIT_ERROR
    if config.fail_on_issue and total_issues:
        return EXIT_ERROR
    return EXIT_OK


def _write_report(config: CliConfig, results: list[ProjectResult]) -> None:
    target = Path(config.output)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    if config.report_format == "csv":
        ids = () if config.mode is Mode.STATS else config.finder_config.enabled_ids()
        data = csv_text(csv_header(ids), [r.row for r in results])
    else:
        reports = [r.report for r in results]
        data = dump_json(reports[0] if len(reports) == 1 and not _is_batch(config) else reports)
    tmp = target.with_name(f".{target.name}.{os.getpid()}.part")
    tmp.write_text(data, encoding="utf-8", newline="")
    os.replace(tmp, target)


def _is_batch(config: CliConfig) -> bool:
    return config.id_list is not None or (config.path is not None and Path(config.path).is_dir())


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return run(config)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
