"""Reading ``.sb3`` archives and the asset inventory they carry."""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass, field
from typing import Optional

from .nodes import Program
from .parser import MalformedProject, parse_project_data


class NotAnArchive(ValueError):
    pass


class NoProjectJson(ValueError):
    pass


@dataclass(frozen=True)
class AssetInventory:
    costumes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    sounds: dict[str, tuple[str, ...]] = field(default_factory=dict)
    missing_by_actor: dict[str, tuple[str, ...]] = field(default_factory=dict)
    # False when built from a bare project.json: file presence is unknown
    from_archive: bool = False

    @property
    def missing(self) -> tuple[str, ...]:
        return tuple(name for names in self.missing_by_actor.values() for name in names)

    def has_costume(self, actor: str, name: str) -> bool:
        return name in self.costumes.get(actor, ()) and name not in self.missing_by_actor.get(actor, ())

    def has_sound(self, actor: str, name: str) -> bool:
        return name in self.sounds.get(actor, ()) and name not in self.missing_by_actor.get(actor, ())


def inventory_from_program(program: Program) -> AssetInventory:
    """Inventory for a project loaded without its archive: declarations only."""
    return AssetInventory(
        costumes={a.name: a.costume_names for a in program.actors},
        sounds={a.name: a.sound_names for a in program.actors},
    )


def _asset_file(asset: dict) -> Optional[str]:
    if isinstance(asset.get("md5ext"), str):
        return asset["md5ext"]
    if isinstance(asset.get("assetId"), str) and isinstance(asset.get("dataFormat"), str):
        return f"{asset['assetId']}.{asset['dataFormat']}"
    return None


def inventory_from_archive(data: dict, entries: set[str]) -> AssetInventory:
    costumes, sounds, missing = {}, {}, {}
    for target in data.get("targets", []):
        if not isinstance(target, dict):
            continue
        actor = str(target.get("name", ""))
        absent = []
        for key, store in (("costumes", costumes), ("sounds", sounds)):
            names = []
            for asset in target.get(key) or []:
                if not isinstance(asset, dict):
                    continue
                name = str(asset.get("name", ""))
                names.append(name)
                filename = _asset_file(asset)
                if filename is None or filename not in entries:
                    absent.append(name)
            store[actor] = tuple(names)
        missing[actor] = tuple(absent)
    return AssetInventory(costumes, sounds, missing, from_archive=True)


def read_sb3(archive_bytes: bytes) -> tuple[dict, set[str]]:
    """Return the decoded project.json and the set of archive entry names."""
    try:
        archive = zipfile.ZipFile(io.BytesIO(archive_bytes))
    except zipfile.BadZipFile as exc:
        raise NotAnArchive(str(exc)) from exc
    with archive:
        names = set(archive.namelist())
        if "project.json" not in names:
            raise NoProjectJson("archive has no project.json entry")
        raw = archive.read("project.json")
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedProject(f"project.json is not valid JSON: {exc}") from exc
    return data, names


def load_sb3(archive_bytes: bytes, *, name: str = "project", project_id=None, source_path=None):
    """Parse an ``.sb3`` archive into ``(Program, AssetInventory)``."""
    data, names = read_sb3(archive_bytes)
    program = parse_project_data(data, name=name, project_id=project_id, source_path=source_path)
    return program, inventory_from_archive(data, names)
