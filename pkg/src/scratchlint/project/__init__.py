"""Project model: parsing ``.sb3``/``project.json`` into an immutable AST."""

from .archive import AssetInventory, NoProjectJson, NotAnArchive, inventory_from_program, load_sb3
from .nodes import (
    ActorDefinition,
    Event,
    EventKind,
    Expression,
    ListDecl,
    Parameter,
    ParamKind,
    ProcedureDefinition,
    Program,
    Scope,
    Script,
    Statement,
    VariableDecl,
    represented_block_ids,
)
from .parser import MalformedProject, decode_input, parse_project, parse_project_data
from .visitor import Visitor, traverse

__all__ = [
    "ActorDefinition",
    "AssetInventory",
    "Event",
    "EventKind",
    "Expression",
    "ListDecl",
    "MalformedProject",
    "NoProjectJson",
    "NotAnArchive",
    "Parameter",
    "ParamKind",
    "ProcedureDefinition",
    "Program",
    "Scope",
    "Script",
    "Statement",
    "VariableDecl",
    "Visitor",
    "decode_input",
    "inventory_from_program",
    "load_sb3",
    "parse_project",
    "parse_project_data",
    "represented_block_ids",
    "traverse",
]
