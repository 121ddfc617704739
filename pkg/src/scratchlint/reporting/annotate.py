"""Write issue hints back into a project as workspace comments."""

from __future__ import annotations

import io
import json
import zipfile
from typing import Iterable, Optional

from ..finders.base import Issue
from .hints import FALLBACK_LOCALE, HintCatalog, render_hint

COMMENT_OFFSET_X = 200
COMMENT_WIDTH = 300
COMMENT_HEIGHT = 200
# fixed timestamp keeps the written archive byte-stable
ZIP_DATE = (1980, 1, 1, 0, 0, 0)


class BlockNotFound(LookupError):
    pass


def _position(blocks: dict, block_id: str) -> tuple[float, float]:
    """Stored x/y of the block, or of the nearest ancestor that has one."""
    seen = set()
    current = block_id
    while current is not None and current not in seen:
        seen.add(current)
        block = blocks.get(current)
        if isinstance(block, list):
            if len(block) >= 5:
                return block[3], block[4]
            return 0, 0
        if not isinstance(block, dict):
            break
        if isinstance(block.get("x"), (int, float)) and isinstance(block.get("y"), (int, float)):
            return block["x"], block["y"]
        current = block.get("parent")
    return 0, 0


def _target_for(targets: list, issue: Issue) -> dict:
    block_id = issue.block_ids[0] if issue.block_ids else None
    if block_id is not None:
        for target in targets:
            if block_id in (target.get("blocks") or {}):
                return target
        raise BlockNotFound(f"block {block_id!r} of issue {issue.finder_id} is not in the project")
    for target in targets:
        if target.get("name") == issue.actor or (issue.actor == "Stage" and target.get("isStage")):
            return target
    raise BlockNotFound(f"actor {issue.actor!r} of issue {issue.finder_id} is not in the project")


def annotate_document(document: dict, issues: Iterable[Issue], locale: str = FALLBACK_LOCALE, catalog: Optional[HintCatalog] = None) -> dict:
    """Add one comment per issue to a parsed project.json document (modified in place)."""
    targets = document.get("targets") or []
    counter = 0
    for issue in sorted(issues, key=Issue.sort_key):
        target = _target_for(targets, issue)
        blocks = target.get("blocks") or {}
        comments = target.setdefault("comments", {})
        counter += 1
        comment_id = f"lint_{counter}"
        while comment_id in comments:
            counter += 1
            comment_id = f"lint_{counter}"
        block_id = issue.block_ids[0] if issue.block_ids else None
        x, y = _position(blocks, block_id) if block_id is not None else (0, 0)
        comments[comment_id] = {
            "blockId": block_id,
            "x": x + COMMENT_OFFSET_X,
            "y": y,
            "width": COMMENT_WIDTH,
            "height": COMMENT_HEIGHT,
            "minimized": False,
            "text": render_hint(issue, locale, catalog),
        }
        block = blocks.get(block_id) if block_id is not None else None
        if isinstance(block, dict) and not block.get("comment"):
            block["comment"] = comment_id
    return document


def annotate_project(raw_json: str, issues: Iterable[Issue], locale: str = FALLBACK_LOCALE, catalog: Optional[HintCatalog] = None) -> str:
    document = annotate_document(json.loads(raw_json), issues, locale, catalog)
    return json.dumps(document, ensure_ascii=False, separators=(",", ":"))


def annotate_sb3(archive: bytes, annotated_json: str) -> bytes:
    """Copy every asset of ``archive`` unchanged and replace its project.json."""
    out = io.BytesIO()
    with zipfile.ZipFile(io.BytesIO(archive)) as source, zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as target:
        names = sorted(n for n in source.namelist() if n != "project.json")
        target.writestr(zipfile.ZipInfo("project.json", ZIP_DATE), annotated_json.encode("utf-8"), zipfile.ZIP_DEFLATED)
        for name in names:
            target.writestr(zipfile.ZipInfo(name, ZIP_DATE), source.read(name), zipfile.ZIP_DEFLATED)
    return out.getvalue()
