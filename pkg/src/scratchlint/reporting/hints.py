"""Localized hint texts loaded from ``locales/<lang>.properties`` bundles."""

from __future__ import annotations

import re
import string
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

FALLBACK_LOCALE = "en"


class MissingHintKey(KeyError):
    """The fallback locale has no text for a hint key (a defect in the tool)."""


_ESCAPE = re.compile(r"\\(u[0-9a-fA-F]{4}|.)")
_CONTROL = {"n": "\n", "t": "\t", "r": "\r", "f": "\f"}


def _unescape(value: str) -> str:
    def sub(match):
        code = match.group(1)
        if code[0] == "u" and len(code) == 5:
            return chr(int(code[1:], 16))
        return _CONTROL.get(code, code)

    return _ESCAPE.sub(sub, value)


def _logical_lines(text: str):
    pending = ""
    for raw in text.splitlines():
        line = raw.lstrip() if pending else raw.strip()
        if not pending and (not line or line[0] in "#!"):
            continue
        trailing = len(line) - len(line.rstrip("\\"))
        if trailing % 2:
            pending += line[:-1]
            continue
        yield pending + line
        pending = ""
    if pending:
        yield pending


def parse_properties(text: str) -> dict[str, str]:
    """``key=value`` reader with comments, line continuations and backslash escapes."""
    result = {}
    for line in _logical_lines(text):
        key, sep, value = line.partition("=")
        if sep:
            result[key.strip()] = _unescape(value.strip())
    return result


class _KeepMissing(dict):
    def __missing__(self, key):
        return "{" + key + "}"


class HintCatalog:
    def __init__(self, bundles: Mapping[str, Mapping[str, str]]):
        if FALLBACK_LOCALE not in bundles:
            raise ValueError("the English bundle is required")
        self.bundles = {lang: dict(texts) for lang, texts in bundles.items()}

    @classmethod
    def load(cls) -> "HintCatalog":
        bundles = {}
        for entry in resources.files(__package__).joinpath("locales").iterdir():
            if entry.name.endswith(".properties"):
                bundles[entry.name[: -len(".properties")]] = parse_properties(entry.read_text(encoding="utf-8"))
        return cls(bundles)

    @property
    def locales(self) -> list[str]:
        return sorted(self.bundles)

    def template(self, key: str, locale: str = FALLBACK_LOCALE) -> str:
        text = self.bundles.get(locale, {}).get(key)
        if text is None:
            text = self.bundles[FALLBACK_LOCALE].get(key)
        if text is None:
            raise MissingHintKey(key)
        return text

    def render(self, key: str, params: Mapping[str, str], locale: str = FALLBACK_LOCALE) -> str:
        # placeholders without a parameter stay visible rather than raising
        return string.Formatter().vformat(self.template(key, locale), (), _KeepMissing(params))

    def missing_keys(self, keys) -> list[str]:
        english = self.bundles[FALLBACK_LOCALE]
        return sorted(k for k in keys if k not in english)


@lru_cache(maxsize=1)
def default_catalog() -> HintCatalog:
    return HintCatalog.load()


def render_hint(issue, locale: str = FALLBACK_LOCALE, catalog: Optional[HintCatalog] = None) -> str:
    catalog = catalog or default_catalog()
    return catalog.render(issue.hint_key, issue.params, locale)


def all_hint_keys() -> set[str]:
    from ..finders.base import finder_infos

    return {key for info in finder_infos() for key in info.hint_keys}


def self_check(catalog: Optional[HintCatalog] = None) -> None:
    """Raise MissingHintKey unless every registered hint key has English text."""
    missing = (catalog or default_catalog()).missing_keys(all_hint_keys())
    if missing:
        raise MissingHintKey(", ".join(missing))
