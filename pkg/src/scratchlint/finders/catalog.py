"""Imports every finder module so that the registry is complete."""

from . import clones, general, scratch_bugs, smells, syntax  # noqa: F401
