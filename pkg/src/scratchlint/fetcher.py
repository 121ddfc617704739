"""Locate projects to analyze: local files, folders, remote ids and id lists.

Remote projects are fetched in two steps: the public project API hands out an
access token, then the project host serves the project JSON for that token.
Downloads land in a cache directory as ``<id>.json``.
"""

from __future__ import annotations

import io
import json
import logging
import os
import tempfile
import time
import urllib.error
import urllib.request
import zipfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__

log = logging.getLogger(__name__)

API_URL = "https://api.scratch.mit.edu/projects/{id}"
PROJECTS_URL = "https://projects.scratch.mit.edu/{id}?token={token}"
USER_AGENT = f"scratchlint/{__version__} (static analysis; batch download)"
MAX_CONCURRENT = 4
RETRIES = 3
TIMEOUT = 30.0


class SourceKind(str, Enum):
    LOCAL_SB3 = "LOCAL_SB3"
    LOCAL_JSON = "LOCAL_JSON"
    REMOTE_ID = "REMOTE_ID"


class FetchError(Exception):
    pass


class NotFound(FetchError):
    pass


class NetworkError(FetchError):
    pass


class MalformedId(ValueError):
    def __init__(self, line: int, text: str):
        super().__init__(f"line {line}: not a project id: {text!r}")
        self.line = line
        self.text = text


class NotADirectory(NotADirectoryError):
    pass


@dataclass(frozen=True)
class ProjectSource:
    kind: SourceKind
    location: str
    resolved_name: str

    @property
    def project_id(self) -> Optional[int]:
        return int(self.location) if self.kind is SourceKind.REMOTE_ID else None

    @classmethod
    def local(cls, path) -> "ProjectSource":
        path = Path(path)
        kind = SourceKind.LOCAL_SB3 if path.suffix.lower() == ".sb3" else SourceKind.LOCAL_JSON
        return cls(kind, str(path), path.stem)

    @classmethod
    def remote(cls, project_id: int) -> "ProjectSource":
        if isinstance(project_id, bool) or not isinstance(project_id, int) or project_id <= 0:
            raise ValueError(f"project ids are positive integers, got {project_id!r}")
        return cls(SourceKind.REMOTE_ID, str(project_id), str(project_id))


def scan_folder(path) -> list[ProjectSource]:
    """Every ``*.sb3`` and ``*.json`` file directly inside ``path``, sorted by name."""
    path = Path(path)
    if not path.is_dir():
        raise NotADirectory(f"not a directory: {path}")
    files = [p for p in path.iterdir() if p.is_file() and p.suffix.lower() in (".sb3", ".json")]
    return [ProjectSource.local(p) for p in sorted(files, key=lambda p: p.name)]


def parse_id(text: str) -> int:
    text = text.strip()
    if not text.isdigit() or int(text) <= 0:
        raise ValueError(text)
    return int(text)


def read_id_list(path) -> list[ProjectSource]:
    """One id per line; blank lines and ``#`` comments are skipped."""
    sources = []
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                sources.append(ProjectSource.remote(parse_id(text)))
            except ValueError:
                raise MalformedId(number, text) from None
    return sources


def default_cache_dir() -> Path:
    configured = os.environ.get("SCRATCHLINT_CACHE")
    if configured:
        return Path(configured)
    return Path(tempfile.gettempdir()) / "scratchlint-cache"


@dataclass
class Fetcher:
    cache_dir: Path
    api_url: str = ""
    projects_url: str = ""
    retries: int = RETRIES
    backoff: float = 1.0
    delay: float = 0.0
    timeout: float = TIMEOUT
    opener: Callable = urllib.request.urlopen

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        self.api_url = self.api_url or os.environ.get("SCRATCHLINT_API_URL", API_URL)
        self.projects_url = self.projects_url or os.environ.get("SCRATCHLINT_PROJECTS_URL", PROJECTS_URL)

    def cached_path(self, project_id: int) -> Path:
        return self.cache_dir / f"{project_id}.json"

    def _get(self, url: str) -> bytes:
        request = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
        attempt = 0
        while True:
            try:
                with self.opener(request, timeout=self.timeout) as response:
                    return response.read()
            except urllib.error.HTTPError as exc:
                if exc.code in (403, 404, 410):
                    raise NotFound(f"{url}: HTTP {exc.code}") from None
                error = exc
            except (urllib.error.URLError, OSError) as exc:
                error = exc
            attempt += 1
            if attempt > self.retries:
                raise NetworkError(f"{url}: {error}") from None
            wait = self.backoff * 2 ** (attempt - 1)
            log.info("retrying %s in %.1fs (%s)", url, wait, error)
            time.sleep(wait)

    def fetch(self, project_id: int) -> Path:
        """Path of the cached project JSON, downloading it first when needed."""
        if isinstance(project_id, bool) or not isinstance(project_id, int) or project_id <= 0:
            raise NotFound(f"invalid project id {project_id!r}")
        target = self.cached_path(project_id)
        if target.exists():
            return target
        meta = self._get(self.api_url.format(id=project_id))
        try:
            token = json.loads(meta).get("project_token", "")
        except (ValueError, AttributeError):
            raise NetworkError(f"project {project_id}: unreadable metadata") from None
        if self.delay:
            time.sleep(self.delay)
        content = _project_json(self._get(self.projects_url.format(id=project_id, token=token or "")))
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        # write then rename so concurrent runs never see a partial file
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, prefix=f".{project_id}.", suffix=".part")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(content)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def fetch_many(self, ids: Sequence[int], jobs: int = MAX_CONCURRENT) -> list:
        """Fetch in parallel; results (path or exception) come back in input order."""
        def one(pid):
            try:
                return self.fetch(pid)
            except FetchError as exc:
                return exc

        with ThreadPoolExecutor(max_workers=max(1, min(jobs, MAX_CONCURRENT))) as pool:
            return list(pool.map(one, ids))


def _project_json(content: bytes) -> bytes:
    """Some projects are served as a zip archive; keep only the project.json."""
    if content[:2] == b"PK":
        try:
            with zipfile.ZipFile(io.BytesIO(content)) as archive:
                return archive.read("project.json")
        except (zipfile.BadZipFile, KeyError):
            raise NetworkError("project content is neither JSON nor an sb3 archive") from None
    return content


def fetch_project(project_id: int, cache_dir=None, **options) -> Path:
    return Fetcher(Path(cache_dir) if cache_dir else default_cache_dir(), **options).fetch(project_id)
