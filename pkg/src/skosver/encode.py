"""Encode snapshots, groupings and version mappings as SKOS triples."""
from __future__ import annotations

from typing import Iterable, Optional

from .errors import StyleUnrepresentable, UnknownCode
from .langtag import NO_LINGUISTIC_CONTENT, make_notation_tag, notation_kind_of, parse_language_tag
from .ledger import Relation
from .model import ContainerKind, Snapshot
from .rdf import RDF_TYPE, Literal, PrefixMap, Triple, Uri
from .versions import VersionGraph

__all__ = [
    "SKOS",
    "OWL",
    "ISO3166",
    "DEFAULT_PREFIXES",
    "NOTATION_STYLES",
    "notation_property",
    "notation_property_name",
    "encode_snapshot",
    "encode_grouping",
    "encode_mappings",
    "version_prefixes",
    "notation_facts",
    "notation_triples",
]

SKOS = "http://www.w3.org/2004/02/skos/core#"
OWL = "http://www.w3.org/2002/07/owl#"
ISO3166 = "http://iso.org/iso3166/"

DEFAULT_PREFIXES = PrefixMap([
    ("iso3166", ISO3166),
    ("iso3166-1", ISO3166 + "1/"),
    ("iso3166-2", ISO3166 + "2/"),
    ("iso3166-3", ISO3166 + "3/"),
    ("skos", SKOS),
    ("owl", OWL),
])

NOTATION_STYLES = ("property", "langtag", "zxx")

# the relation name as printed in the original proposal, and its fixed spelling
SPELLINGS = {"paper": "notationPropery", "corrected": "notationProperty"}

_PROPERTY_NAMES = {
    "twoletter": "twoLetterCode",
    "threeletter": "threeLetterCode",
    "numerical": "numericalCode",
}

_RELATION_PREDICATES = {
    Relation.SAME_AS: Uri(OWL + "sameAs"),
    Relation.EXACT_MATCH: Uri(SKOS + "exactMatch"),
    Relation.NARROW_MATCH: Uri(SKOS + "narrowMatch"),
    Relation.BROAD_MATCH: Uri(SKOS + "broadMatch"),
}


def _skos(name: str) -> Uri:
    return Uri(SKOS + name)


def notation_property_name(kind: str) -> str:
    return _PROPERTY_NAMES.get(kind, kind + "Code")


def notation_property(kind: str, vocab_namespace: str = ISO3166) -> Uri:
    return Uri(vocab_namespace + notation_property_name(kind))


def _container_uri(cid: str, prefixes: PrefixMap) -> Uri:
    try:
        return prefixes.expand(cid)
    except KeyError:
        raise UnknownCode(f"no namespace declared for container {cid!r}", cid) from None


def _member_uri(member: str, snapshot: Snapshot, prefixes: PrefixMap, concept_namespace: str) -> Uri:
    if member in snapshot.containers:
        return _container_uri(member, prefixes)
    return Uri(concept_namespace + member)


def _container_triples(snapshot, prefixes, concept_namespace):
    out = set()
    for cid, box in snapshot.containers.items():
        uri = _container_uri(cid, prefixes)
        cls = "ConceptScheme" if box.kind is ContainerKind.SCHEME else "Collection"
        out.add(Triple(uri, RDF_TYPE, _skos(cls)))
        for member in box.members:
            out.add(Triple(uri, _skos("member"), _member_uri(member, snapshot, prefixes, concept_namespace)))
    return out


def encode_snapshot(
    snapshot: Snapshot,
    prefixes: PrefixMap = DEFAULT_PREFIXES,
    notation_style: str = "property",
    *,
    concept_namespace: str = ISO3166,
    vocab_namespace: str = ISO3166,
    spelling: str = "corrected",
    containers: bool = True,
) -> frozenset:
    """Triples for every concept (and, by default, container) of ``snapshot``.

    ``notation_style`` picks how codes are written:

    ``property``
        one labelling property per notation kind (``iso3166:twoLetterCode``),
        declared on each scheme that lists the kind;
    ``langtag``
        ``skos:prefLabel`` literals tagged ``x-notation-<kind>``;
    ``zxx``
        a single ``skos:prefLabel`` tagged ``zxx``; concepts with more than
        one notation raise StyleUnrepresentable.
    """
    if notation_style not in NOTATION_STYLES:
        raise ValueError(f"unknown notation style {notation_style!r}")
    if spelling not in SPELLINGS:
        raise ValueError(f"unknown spelling {spelling!r}")
    out = set()
    zxx = parse_language_tag(NO_LINGUISTIC_CONTENT)
    for code, concept in snapshot.concepts.items():
        s = Uri(concept_namespace + code)
        out.add(Triple(s, RDF_TYPE, _skos("Concept")))
        for label in concept.pref_labels:
            out.add(Triple(s, _skos("prefLabel"), Literal(label.text, label.lang)))
        for label in concept.alt_labels:
            out.add(Triple(s, _skos("altLabel"), Literal(label.text, label.lang)))
        for parent in concept.broader:
            out.add(Triple(s, _skos("broader"), Uri(concept_namespace + parent)))
        for child in concept.narrower:
            out.add(Triple(s, _skos("narrower"), Uri(concept_namespace + child)))
        if notation_style == "zxx" and len(concept.notations) > 1:
            raise StyleUnrepresentable(
                f"{code!r} has {len(concept.notations)} notations; the zxx style allows one", code
            )
        for n in concept.notations:
            if notation_style == "property":
                out.add(Triple(s, notation_property(n.kind, vocab_namespace), Literal(n.value)))
            elif notation_style == "langtag":
                out.add(Triple(s, _skos("prefLabel"), Literal(n.value, make_notation_tag(n.kind))))
            else:
                out.add(Triple(s, _skos("prefLabel"), Literal(n.value, zxx)))

    if containers:
        out |= _container_triples(snapshot, prefixes, concept_namespace)
        if notation_style == "property":
            declare = _skos(SPELLINGS[spelling])
            for cid, box in snapshot.containers.items():
                if box.kind is ContainerKind.SCHEME:
                    for kind in box.notation_kinds:
                        out.add(Triple(_container_uri(cid, prefixes), declare, notation_property(kind, vocab_namespace)))
    return frozenset(out)


def encode_grouping(
    snapshot: Snapshot,
    prefixes: PrefixMap = DEFAULT_PREFIXES,
    *,
    concept_namespace: str = ISO3166,
) -> frozenset:
    """Type and ``skos:member`` triples of the containers only."""
    return frozenset(_container_triples(snapshot, prefixes, concept_namespace))


def encode_mappings(graph: VersionGraph, prefixes: Optional[PrefixMap] = None) -> frozenset:
    return frozenset(
        Triple(Uri(str(e.source)), _RELATION_PREDICATES[e.relation], Uri(str(e.target)))
        for e in graph.edges
    )


def version_prefixes(graph: VersionGraph) -> PrefixMap:
    """``<scheme>-v0`` ... ``<scheme>-vN`` plus ``<scheme>-current``."""
    stem = graph.scheme_id
    entries = [(f"{stem}-v{i}", v.namespace) for i, v in enumerate(graph.versions)]
    entries.append((f"{stem}-current", graph.current_alias))
    return PrefixMap(entries)


# -- notation facts, independent of style ----------------------------------

def notation_facts(triples: Iterable[Triple], vocab_namespace: str = ISO3166) -> frozenset:
    """Extract ``(subject, kind, value)`` from either notation style."""
    by_property = {notation_property(k, vocab_namespace): k for k in _PROPERTY_NAMES}
    facts = set()
    pref = _skos("prefLabel")
    for s, p, o in triples:
        if not isinstance(o, Literal):
            continue
        if p == pref and o.lang is not None:
            kind = notation_kind_of(o.lang)
            if kind is not None:
                facts.add((s, kind, o.text))
        elif o.lang is None and p.value.startswith(vocab_namespace):
            name = p.value[len(vocab_namespace):]
            kind = by_property.get(p)
            if kind is None and name.endswith("Code") and len(name) > 4:
                kind = name[:-4]
            if kind is not None:
                facts.add((s, kind, o.text))
    return frozenset(facts)


def notation_triples(facts: Iterable, style: str, vocab_namespace: str = ISO3166) -> frozenset:
    """Inverse of :func:`notation_facts` for the ``property``/``langtag`` styles."""
    if style == "property":
        return frozenset(Triple(s, notation_property(k, vocab_namespace), Literal(v)) for s, k, v in facts)
    if style == "langtag":
        return frozenset(Triple(s, _skos("prefLabel"), Literal(v, make_notation_tag(k))) for s, k, v in facts)
    raise ValueError(f"style {style!r} does not carry notation kinds")
