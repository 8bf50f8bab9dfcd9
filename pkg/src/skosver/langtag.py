"""Language tags (RFC 4646 subset) with private-use ``x-...`` chains.

Only the syntax needed for labels and notation tags is handled: a primary
language subtag, generic subtags, and a single private-use part introduced
by the ``x`` singleton.  No registry lookups are made.

>>> parse_language_tag("de-x-notation").private
('notation',)
>>> str(make_notation_tag("numerical"))
'x-notation-numerical'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import MalformedTag

__all__ = [
    "LanguageTag",
    "parse_language_tag",
    "make_notation_tag",
    "notation_kind_of",
    "NOTATION_SUBTAG",
    "NO_LINGUISTIC_CONTENT",
]

NOTATION_SUBTAG = "notation"
NO_LINGUISTIC_CONTENT = "zxx"

_ALNUM = re.compile(r"[A-Za-z0-9]+\Z")
_ALPHA = re.compile(r"[A-Za-z]+\Z")


@dataclass(frozen=True)
class LanguageTag:
    primary: str
    subtags: tuple[str, ...] = ()
    # index of the ``x`` singleton in (primary,) + subtags
    private_index: Optional[int] = None

    def __str__(self) -> str:
        return "-".join((self.primary,) + self.subtags)

    def __lt__(self, other: "LanguageTag") -> bool:
        return str(self) < str(other)

    @property
    def private(self) -> tuple[str, ...]:
        """Subtags following the ``x`` singleton (empty if none)."""
        if self.private_index is None:
            return ()
        return ((self.primary,) + self.subtags)[self.private_index + 1:]

    @property
    def base(self) -> Optional[str]:
        """The non-private part of the tag, or None for wholly private tags."""
        if self.private_index == 0:
            return None
        parts = (self.primary,) + self.subtags
        end = len(parts) if self.private_index is None else self.private_index
        return "-".join(parts[:end])


def parse_language_tag(text: str) -> LanguageTag:
    """Parse ``text`` into a lowercase-normalized :class:`LanguageTag`.

    Raises MalformedTag with the offset of the offending subtag.
    """
    if not isinstance(text, str) or not text:
        raise MalformedTag("empty language tag", 0)

    parts = text.split("-")
    offsets = []
    pos = 0
    for part in parts:
        offsets.append(pos)
        pos += len(part) + 1

    parts_lc = [p.lower() for p in parts]
    private_index = None
    for i, (part, off) in enumerate(zip(parts_lc, offsets)):
        if not part:
            raise MalformedTag("empty subtag", off)
        if not _ALNUM.match(part):
            bad = next(j for j, ch in enumerate(part) if not ch.isascii() or not ch.isalnum())
            raise MalformedTag(f"illegal character {parts[i][bad]!r}", off + bad)
        if private_index is not None:
            # private-use subtags: any length (notation kinds exceed 8 chars)
            continue
        if part == "x":
            private_index = i
            continue
        if i == 0:
            if not (2 <= len(part) <= 8 and _ALPHA.match(part)):
                raise MalformedTag(f"bad primary language subtag {parts[0]!r}", off)
        elif len(part) == 1:
            raise MalformedTag(f"unsupported extension singleton {parts[i]!r}", off)
        elif len(part) > 8:
            raise MalformedTag(f"subtag {parts[i]!r} longer than 8 characters", off)

    if private_index is not None and private_index == len(parts_lc) - 1:
        raise MalformedTag("private-use singleton 'x' without subtags", offsets[private_index])

    return LanguageTag(parts_lc[0], tuple(parts_lc[1:]), private_index)


def _check_kind(kind: str) -> None:
    if not isinstance(kind, str) or not kind or not re.fullmatch(r"[a-z0-9]+", kind):
        raise MalformedTag(f"notation kind must be lowercase alphanumeric, got {kind!r}", 0)


def make_notation_tag(kind: str, base: Optional[str] = None) -> LanguageTag:
    """Build ``x-notation-<kind>`` or ``<base>-x-notation-<kind>``."""
    _check_kind(kind)
    if base is None:
        return parse_language_tag(f"x-{NOTATION_SUBTAG}-{kind}")
    base_tag = parse_language_tag(base)
    if base_tag.private_index is not None:
        raise MalformedTag(f"base tag {base!r} already has a private-use part", 0)
    return parse_language_tag(f"{base_tag}-x-{NOTATION_SUBTAG}-{kind}")


def notation_kind_of(tag: LanguageTag) -> Optional[str]:
    private = tag.private
    if len(private) == 2 and private[0] == NOTATION_SUBTAG:
        return private[1]
    return None
