"""Issue finder framework: issues, the registry, configuration and the runner."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional

from ..project.archive import AssetInventory, inventory_from_program
from ..project.nodes import ActorDefinition, Program, Script
from ..project.visitor import Visitor, traverse

log = logging.getLogger(__name__)


class Category(str, Enum):
    SYNTAX_ERROR = "SYNTAX_ERROR"
    SCRATCH_BUG = "SCRATCH_BUG"
    GENERAL_BUG = "GENERAL_BUG"
    CODE_SMELL = "CODE_SMELL"

    @property
    def severity(self) -> "Severity":
        return Severity.SMELL if self is Category.CODE_SMELL else Severity.BUG

    @property
    def rank(self) -> int:
        return list(Category).index(self)


class Severity(str, Enum):
    BUG = "BUG"
    SMELL = "SMELL"


@dataclass(frozen=True)
class Issue:
    finder_id: str
    category: Category
    actor: str
    block_ids: tuple[str, ...]
    script_top_block_id: Optional[str] = None
    hint_key: str = ""
    hint_params: tuple[tuple[str, str], ...] = ()

    @property
    def severity(self) -> Severity:
        return self.category.severity

    @property
    def params(self) -> dict[str, str]:
        return dict(self.hint_params)

    @property
    def identity(self) -> tuple:
        """Deduplication key.  Issues without blocks are told apart by their parameters."""
        key = (self.finder_id, self.actor, tuple(sorted(self.block_ids)))
        return key if self.block_ids else key + (self.hint_params,)

    def sort_key(self) -> tuple:
        return (self.category.rank, self.finder_id, self.actor, self.block_ids, self.hint_params)


class UnknownFinder(ValueError):
    pass


@dataclass(frozen=True)
class FinderInfo:
    id: str
    category: Category
    summary: str
    hint_keys: tuple[str, ...]
    default_enabled: bool = True


REGISTRY: dict[str, type["Finder"]] = {}


def register(cls: type["Finder"]) -> type["Finder"]:
    if cls.id in REGISTRY:
        raise ValueError(f"duplicate finder id {cls.id!r}")
    REGISTRY[cls.id] = cls
    return cls


def finder_ids() -> list[str]:
    """Registered finder ids in stable catalog order (category, then id)."""
    _load_catalog()
    return sorted(REGISTRY, key=lambda fid: (REGISTRY[fid].category.rank, fid))


def finder_infos() -> list[FinderInfo]:
    return [REGISTRY[fid].info() for fid in finder_ids()]


def _load_catalog() -> None:
    from . import catalog  # noqa: F401  registers every finder on import


@dataclass(frozen=True)
class FinderConfig:
    enabled: Optional[frozenset] = None
    ignore_loose: bool = False
    long_script_threshold: int = 12

    def __post_init__(self):
        if self.enabled is not None:
            ids = set(finder_ids())
            unknown = sorted(set(self.enabled) - ids)
            if unknown:
                raise UnknownFinder(f"unknown finder id(s): {', '.join(unknown)}")
            object.__setattr__(self, "enabled", frozenset(self.enabled))
        if self.long_script_threshold < 0:
            raise ValueError("long script threshold must be non-negative")

    def enabled_ids(self) -> list[str]:
        ids = finder_ids()
        return ids if self.enabled is None else [fid for fid in ids if fid in self.enabled]


def without_loose(program: Program) -> Program:
    def strip(actor: ActorDefinition) -> ActorDefinition:
        return replace(actor, scripts=tuple(s for s in actor.scripts if not s.is_loose))

    return replace(program, stage=strip(program.stage), sprites=tuple(strip(s) for s in program.sprites))


class Context:
    """What a finder sees: the program (minus loose scripts when configured),
    the asset inventory, the configuration and lazily computed analyses."""

    def __init__(self, program: Program, assets: Optional[AssetInventory] = None, config: Optional[FinderConfig] = None):
        self.full_program = program
        self.config = config or FinderConfig()
        self.program = without_loose(program) if self.config.ignore_loose else program
        self.assets = assets if assets is not None else inventory_from_program(program)

    @cached_property
    def cfg(self):
        from ..flow.cfg import build_cfg

        return build_cfg(self.program)

    @cached_property
    def dataflow(self):
        from ..flow.dataflow import definitely_defined

        return definitely_defined(self.cfg)

    @cached_property
    def triggers(self):
        from ..flow.events import collect_triggers

        return collect_triggers(self.program)


class Finder(Visitor):
    """Base class of all finders.

    Subclasses set ``id``, ``category`` and ``summary`` and either override
    visitor hooks (the default :meth:`check` traverses the program) or
    override :meth:`check` itself.  Issues are added with :meth:`report`.
    """

    id: str = ""
    category: Category = Category.CODE_SMELL
    summary: str = ""
    hint_keys: tuple[str, ...] = ()
    # finders that must see loose scripts even with ignore_loose set
    sees_loose: bool = False

    def __init__(self, context: Context):
        super().__init__()
        self.context = context
        self.issues: list[Issue] = []

    @classmethod
    def info(cls) -> FinderInfo:
        return FinderInfo(cls.id, cls.category, cls.summary, cls.hint_keys or (cls.id,))

    def check(self) -> list[Issue]:
        traverse(self.context.program, self)
        return self.issues

    def report(
        self,
        block_ids: Iterable[Optional[str]],
        *,
        actor: Optional[ActorDefinition] = None,
        top: Optional[str] = None,
        hint_key: Optional[str] = None,
        **params,
    ) -> None:
        actor = actor or self.actor
        if top is None and self.unit is not None and actor is self.actor:
            top = self.unit.top_block_id
        ids = tuple(dict.fromkeys(b for b in block_ids if b is not None))
        merged = {"actor": actor.name, **{k: _text(v) for k, v in params.items()}}
        self.issues.append(
            Issue(
                finder_id=self.id,
                category=self.category,
                actor=actor.name,
                block_ids=ids,
                script_top_block_id=top,
                hint_key=hint_key or self.id,
                hint_params=tuple(sorted(merged.items())),
            )
        )


def _text(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def run_finder(finder_id: str, context: Context) -> list[Issue]:
    _load_catalog()
    cls = REGISTRY[finder_id]
    if cls.sees_loose and context.config.ignore_loose:
        context = Context(context.full_program, context.assets, replace(context.config, ignore_loose=False))
    return cls(context).check()


def finalize(issues: Iterable[Issue]) -> list[Issue]:
    """Deduplicate and sort issues deterministically."""
    unique: dict[tuple, Issue] = {}
    for issue in sorted(issues, key=Issue.sort_key):
        unique.setdefault(issue.identity, issue)
    return sorted(unique.values(), key=Issue.sort_key)


def run_all(
    program: Program,
    assets: Optional[AssetInventory] = None,
    config: Optional[FinderConfig] = None,
    diagnostics: Optional[list] = None,
    on_error: Optional[Callable[[str, BaseException], None]] = None,
) -> list[Issue]:
    """Run every enabled finder; a failing finder becomes a diagnostic line."""
    context = Context(program, assets, config)
    found: list[Issue] = []
    for finder_id in context.config.enabled_ids():
        try:
            found.extend(run_finder(finder_id, context))
        except Exception as exc:  # noqa: BLE001  one broken rule must not stop the others
            message = f"finder {finder_id} failed: {type(exc).__name__}: {exc}"
            log.warning(message)
            if diagnostics is not None:
                diagnostics.append(message)
            if on_error is not None:
                on_error(finder_id, exc)
    return finalize(found)


def script_of(actor: ActorDefinition, top_block_id: str) -> Optional[Script]:
    for script in actor.scripts:
        if script.top_block_id == top_block_id:
            return script
    return None
