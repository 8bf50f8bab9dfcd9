"""Snapshot model of a SKOS vocabulary: concepts, labels, notations,
hierarchy and nested schemes/collections.

Snapshots are immutable; every operation returns a new snapshot.  Concepts
are keyed by plain codes (``FR``, ``CA-NT``), containers by prefixed names
(``iso3166-2:FR-regions``), so a member reference is unambiguous.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import (
    DuplicateCode,
    InvalidCode,
    MembershipCycle,
    SelfHierarchy,
    UnknownCode,
)
from .langtag import LanguageTag, parse_language_tag

__all__ = [
    "Label",
    "Notation",
    "Concept",
    "ContainerKind",
    "Container",
    "Snapshot",
    "Violation",
    "is_code",
    "is_container_id",
    "add_concept",
    "add_container",
    "link_hierarchy",
    "add_member",
    "validate",
]

_CODE_RE = re.compile(r"[A-Z0-9](?:[A-Z0-9-]*[A-Z0-9])?\Z")
_CONTAINER_RE = re.compile(r"[a-z][a-z0-9-]*:(?:[A-Za-z0-9](?:[A-Za-z0-9_-]*[A-Za-z0-9_])?)?\Z")
_KIND_RE = re.compile(r"[a-z0-9]+\Z")


def is_code(value: str) -> bool:
    """True for concept codes: uppercase alphanumerics and inner hyphens."""
    return isinstance(value, str) and bool(_CODE_RE.match(value))


def is_container_id(value: str) -> bool:
    """True for container ids of the form ``prefix:local`` (local may be empty)."""
    return isinstance(value, str) and bool(_CONTAINER_RE.match(value))


@dataclass(frozen=True, order=True)
class Label:
    text: str
    lang: LanguageTag

    @classmethod
    def of(cls, text: str, lang: str) -> "Label":
        return cls(text, parse_language_tag(lang))


@dataclass(frozen=True, order=True)
class Notation:
    kind: str
    value: str


@dataclass(frozen=True)
class Concept:
    code: str
    pref_labels: frozenset = frozenset()
    alt_labels: frozenset = frozenset()
    notations: frozenset = frozenset()
    broader: frozenset = frozenset()
    narrower: frozenset = frozenset()

    def __post_init__(self):
        for name in ("pref_labels", "alt_labels", "notations", "broader", "narrower"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    def pref_label(self, lang: str = "en") -> Optional[str]:
        """Text of the preferred label in ``lang``, if exactly one exists."""
        tag = parse_language_tag(lang)
        found = [l.text for l in self.pref_labels if l.lang == tag]
        return found[0] if len(found) == 1 else None


class ContainerKind(str, enum.Enum):
    SCHEME = "scheme"
    COLLECTION = "collection"


@dataclass(frozen=True)
class Container:
    id: str
    kind: ContainerKind
    members: tuple = ()
    notation_kinds: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kind", ContainerKind(self.kind))
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "notation_kinds", frozenset(self.notation_kinds))


def _frozen_map(mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One published state of a vocabulary.

    ``deprecated`` lists codes retired when this snapshot was produced; they
    are not present in ``concepts``.
    """

    version: str = "first"
    concepts: Mapping[str, Concept] = field(default_factory=dict)
    containers: Mapping[str, Container] = field(default_factory=dict)
    deprecated: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "concepts", _frozen_map(self.concepts))
        object.__setattr__(self, "containers", _frozen_map(self.containers))
        object.__setattr__(self, "deprecated", frozenset(self.deprecated))

    def __eq__(self, other):
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (
            self.version == other.version
            and dict(self.concepts) == dict(other.concepts)
            and dict(self.containers) == dict(other.containers)
            and self.deprecated == other.deprecated
        )

    __hash__ = None

    @property
    def roots(self) -> frozenset:
        """Concepts without a broader concept."""
        return frozenset(c for c, concept in self.concepts.items() if not concept.broader)

    def __contains__(self, code) -> bool:
        return code in self.concepts or code in self.containers

    def __len__(self) -> int:
        return len(self.concepts)

    def concept(self, code: str) -> Concept:
        try:
            return self.concepts[code]
        except KeyError:
            raise UnknownCode(f"unknown concept {code!r} in version {self.version!r}", code) from None

    def evolve(self, **changes) -> "Snapshot":
        return replace(self, **changes)

    def with_concepts(self, concepts: Iterable[Concept]) -> "Snapshot":
        merged = dict(self.concepts)
        merged.update((c.code, c) for c in concepts)
        return self.evolve(concepts=merged)


@dataclass(frozen=True, order=True)
class Violation:
    kind: str
    code: str
    other: Optional[str] = None

    def __str__(self) -> str:
        if self.other is None:
            return f"{self.kind}({self.code})"
        return f"{self.kind}({self.code}, {self.other})"


def add_concept(snapshot: Snapshot, concept: Concept) -> Snapshot:
    if not is_code(concept.code):
        raise InvalidCode(f"invalid concept code {concept.code!r}", concept.code)
    if concept.code in snapshot:
        raise DuplicateCode(f"code {concept.code!r} already present", concept.code)
    return snapshot.with_concepts([concept])


def add_container(snapshot: Snapshot, container: Container) -> Snapshot:
    if not is_container_id(container.id):
        raise InvalidCode(f"invalid container id {container.id!r}", container.id)
    if container.id in snapshot:
        raise DuplicateCode(f"container {container.id!r} already present", container.id)
    containers = dict(snapshot.containers)
    containers[container.id] = container
    return snapshot.evolve(containers=containers)


def link_hierarchy(snapshot: Snapshot, broader: str, narrower: str) -> Snapshot:
    """Record ``broader`` skos:narrower ``narrower`` and its inverse."""
    if broader == narrower:
        raise SelfHierarchy(f"{broader!r} cannot be broader than itself", broader)
    parent = snapshot.concept(broader)
    child = snapshot.concept(narrower)
    return snapshot.with_concepts([
        replace(parent, narrower=parent.narrower | {narrower}),
        replace(child, broader=child.broader | {broader}),
    ])


def _member_edges(containers: Mapping[str, Container]) -> dict:
    return {
        cid: [m for m in c.members if m in containers]
        for cid, c in containers.items()
    }


def _reaches(edges: dict, start: str, target: str) -> bool:
    stack, seen = [start], set()
    while stack:
        node = stack.pop()
        if node == target:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(edges.get(node, ()))
    return False


def add_member(snapshot: Snapshot, container: str, member: str) -> Snapshot:
    if container not in snapshot.containers:
        raise UnknownCode(f"unknown container {container!r}", container)
    if member not in snapshot:
        raise UnknownCode(f"unknown member {member!r}", member)
    box = snapshot.containers[container]
    if member in box.members:
        raise DuplicateCode(f"{member!r} already a member of {container!r}", member)
    if member in snapshot.containers and _reaches(_member_edges(snapshot.containers), member, container):
        raise MembershipCycle(f"adding {member!r} to {container!r} creates a cycle", container)
    containers = dict(snapshot.containers)
    containers[container] = replace(box, members=box.members + (member,))
    return snapshot.evolve(containers=containers)


def _cycle_groups(containers: Mapping[str, Container]) -> list:
    """Strongly connected groups of containers that lie on a membership cycle."""
    edges = _member_edges(containers)
    on_cycle = [
        cid for cid in containers
        if any(_reaches(edges, m, cid) for m in edges[cid])
    ]
    groups, assigned = [], set()
    for cid in sorted(on_cycle):
        if cid in assigned:
            continue
        group = {o for o in on_cycle if _reaches(edges, cid, o) and _reaches(edges, o, cid)}
        assigned |= group
        groups.append(sorted(group))
    return groups


def validate(snapshot: Snapshot, notation_style: Optional[str] = None) -> list:
    """Collect every invariant violation of ``snapshot``, sorted.

    With ``notation_style="zxx"`` concepts carrying more than one notation
    are reported too, since that style allows only one code label.
    """
    out = []
    concepts = snapshot.concepts
    containers = snapshot.containers

    for code, concept in concepts.items():
        if code != concept.code or not is_code(code):
            out.append(Violation("InvalidCode", code))
        langs = [l.lang for l in concept.pref_labels]
        if len(langs) != len(set(langs)):
            out.append(Violation("DuplicatePrefLabel", code))
        if any(not l.text for l in concept.pref_labels | concept.alt_labels):
            out.append(Violation("EmptyLabel", code))
        if any(not _KIND_RE.match(n.kind) or not n.value for n in concept.notations):
            out.append(Violation("InvalidNotation", code))
        if notation_style == "zxx" and len(concept.notations) > 1:
            out.append(Violation("StyleUnrepresentable", code))
        if code in concept.broader or code in concept.narrower:
            out.append(Violation("SelfHierarchy", code))
        for parent in concept.broader - {code}:
            if parent not in concepts:
                out.append(Violation("UnknownReference", code, parent))
            elif code not in concepts[parent].narrower:
                out.append(Violation("BrokenInverse", parent, code))
        for child in concept.narrower - {code}:
            if child not in concepts:
                out.append(Violation("UnknownReference", code, child))
            elif code not in concepts[child].broader:
                out.append(Violation("BrokenInverse", code, child))
        if code in snapshot.deprecated:
            out.append(Violation("DeprecatedPresent", code))

    for cid, box in containers.items():
        if cid != box.id or not is_container_id(cid):
            out.append(Violation("InvalidCode", cid))
        if len(set(box.members)) != len(box.members):
            out.append(Violation("DuplicateMember", cid))
        if box.kind is ContainerKind.COLLECTION and box.notation_kinds:
            out.append(Violation("CollectionNotationKinds", cid))
        for member in box.members:
            if member not in snapshot:
                out.append(Violation("UnknownReference", cid, member))

    for group in _cycle_groups(containers):
        out.append(Violation("MembershipCycle", group[0], " ".join(group[1:]) or None))

    return sorted(set(out), key=lambda v: (v.kind, v.code, v.other or ""))
