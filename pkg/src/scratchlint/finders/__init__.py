"""Issue finders: the framework and the catalog of bug patterns and smells."""

from .base import (
    REGISTRY,
    Category,
    Context,
    Finder,
    FinderConfig,
    FinderInfo,
    Issue,
    Severity,
    UnknownFinder,
    finder_ids,
    finder_infos,
    finalize,
    register,
    run_all,
    run_finder,
)

__all__ = [
    "REGISTRY",
    "Category",
    "Context",
    "Finder",
    "FinderConfig",
    "FinderInfo",
    "Issue",
    "Severity",
    "UnknownFinder",
    "finalize",
    "finder_ids",
    "finder_infos",
    "register",
    "run_all",
    "run_finder",
]
