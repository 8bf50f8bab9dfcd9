"""Cross-version identity graph and resolution queries.

Every version of a scheme gets its own URI namespace (``<base>first/``,
``<base>newsletter-1/``, ...).  Concepts of consecutive versions are linked
by mapping edges derived from the ledger's change events, so a code can be
followed forward ("what became of it") or backward ("where did it come
from"), or looked up by date.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional

from .errors import UnknownCode, UnknownVersion
from .ledger import Ledger, Relation, apply_newsletter
from .model import Snapshot

__all__ = [
    "VersionedUri",
    "MappingEdge",
    "Version",
    "VersionGraph",
    "build_version_graph",
    "resolve_forward",
    "resolve_backward",
    "valid_at",
    "CURRENT",
]

CURRENT = "current"


@dataclass(frozen=True, order=True)
class VersionedUri:
    namespace: str
    code: str

    def __str__(self) -> str:
        return self.namespace + self.code


class MappingEdge(NamedTuple):
    source: VersionedUri
    target: VersionedUri
    relation: Relation


class Version(NamedTuple):
    id: str
    namespace: str
    date: Optional[dt.date]
    # id of the newsletter that produced this version; None for the initial one
    newsletter: Optional[str] = None


class VersionGraph:
    """Snapshots of every version plus the mapping edges between them.

    Built once by :func:`build_version_graph` and read-only afterwards.
    """

    def __init__(self, versions, snapshots, edges, current_alias, scheme_id="scheme"):
        self.versions = tuple(versions)
        self.snapshots: Mapping[str, Snapshot] = MappingProxyType(dict(snapshots))
        self.edges = frozenset(edges)
        self.current_alias = current_alias
        self.scheme_id = scheme_id
        self._index = {v.id: i for i, v in enumerate(self.versions)}
        for i, v in enumerate(self.versions):
            if v.newsletter is not None:
                self._index.setdefault(v.newsletter, i)
        self._index.setdefault(CURRENT, len(self.versions) - 1)
        self._by_namespace = {v.namespace: i for i, v in enumerate(self.versions)}
        # step tables: (version index, code) -> codes in the next / previous version
        self._forward = {}
        self._backward = {}
        for edge in sorted(self.edges):
            i = self._by_namespace[edge.source.namespace]
            self._forward.setdefault((i, edge.source.code), []).append(edge.target.code)
            self._backward.setdefault((i + 1, edge.target.code), []).append(edge.source.code)

    def __repr__(self):
        return f"VersionGraph({len(self.versions)} versions, {len(self.edges)} edges)"

    def index(self, version: str) -> int:
        """Position of ``version`` (version id, newsletter id or ``current``)."""
        try:
            return self._index[version]
        except KeyError:
            raise UnknownVersion(f"unknown version {version!r}") from None

    def version(self, version: str) -> Version:
        return self.versions[self.index(version)]

    def snapshot(self, version: str) -> Snapshot:
        return self.snapshots[self.version(version).id]

    def uri(self, version: str, code: str) -> VersionedUri:
        return VersionedUri(self.version(version).namespace, code)

    def edges_from(self, uri: VersionedUri) -> list:
        return sorted(e for e in self.edges if e.source == uri)

    def edges_to(self, uri: VersionedUri) -> list:
        return sorted(e for e in self.edges if e.target == uri)


def build_version_graph(ledger: Ledger, base_uri: str) -> VersionGraph:
    if not base_uri.endswith("/"):
        raise ValueError(f"base URI must end with '/': {base_uri!r}")
    initial = ledger.initial
    versions = [Version(initial.version, f"{base_uri}{initial.version}/", ledger.initial_date)]
    snapshots = {initial.version: initial}
    edges = []
    current = initial
    for n, newsletter in enumerate(ledger.newsletters, start=1):
        vid = f"newsletter-{n}"
        if vid in snapshots:
            raise ValueError(f"initial version label {vid!r} collides with a newsletter version")
        nxt, templates = apply_newsletter(current, newsletter, version=vid)
        ns_old, ns_new = versions[-1].namespace, f"{base_uri}{vid}/"
        for t in templates:
            if t.relation is Relation.DEPRECATED:
                continue
            edges.append(MappingEdge(VersionedUri(ns_old, t.source), VersionedUri(ns_new, t.target), t.relation))
        versions.append(Version(vid, ns_new, newsletter.date, newsletter.id))
        snapshots[vid] = nxt
        current = nxt
    return VersionGraph(versions, snapshots, edges, f"{base_uri}{CURRENT}/", ledger.scheme_id)


def _endpoints(graph: VersionGraph, code: str, from_version: str, to_version: str):
    i, j = graph.index(from_version), graph.index(to_version)
    snap = graph.snapshots[graph.versions[i].id]
    if code not in snap.concepts:
        raise UnknownCode(f"{code!r} does not exist in version {graph.versions[i].id!r}", code)
    return i, j


def _walk(graph, table, code, i, j, direction):
    codes = {code}
    k = i
    while k != j:
        codes = {nxt for c in codes for nxt in table.get((k, c), ())}
        k += direction
        if not codes:
            break
    ns = graph.versions[j].namespace
    return frozenset(VersionedUri(ns, c) for c in codes)


def resolve_forward(graph: VersionGraph, code: str, from_version: str, to_version: str) -> frozenset:
    """Concepts of ``to_version`` that ``code`` in ``from_version`` became.

    All mapping relations are followed alike, whether split, merge, rename
    or unchanged.
    """
    i, j = _endpoints(graph, code, from_version, to_version)
    if j < i:
        raise ValueError(f"{to_version!r} precedes {from_version!r}; use resolve_backward")
    return _walk(graph, graph._forward, code, i, j, +1)


def resolve_backward(graph: VersionGraph, code: str, from_version: str, to_version: str) -> frozenset:
    i, j = _endpoints(graph, code, from_version, to_version)
    if j > i:
        raise ValueError(f"{to_version!r} follows {from_version!r}; use resolve_forward")
    return _walk(graph, graph._backward, code, i, j, -1)


def valid_at(graph: VersionGraph, code: str, date: dt.date) -> Optional[VersionedUri]:
    """URI of ``code`` in the version in force on ``date``, if it exists there.

    A newsletter is in force from its own date onwards.  An initial version
    without a date is taken to be in force before the first newsletter.
    """
    chosen = None
    for version in graph.versions:
        if version.date is None:
            if version.newsletter is None:
                chosen = version
            continue
        if version.date <= date:
            chosen = version
        else:
            break
    if chosen is None or code not in graph.snapshots[chosen.id].concepts:
        return None
    return VersionedUri(chosen.namespace, code)
