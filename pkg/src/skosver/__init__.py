"""SKOS encoding of versioned authority files such as ISO 3166 country codes.

Typical use::

    from skosver import load_ledger, build_version_graph, resolve_forward

    graph = build_version_graph(load_ledger("canada.tsv"), "http://iso.org/iso3166/2/")
    resolve_forward(graph, "CA-NF", "first", "current")
"""
from .errors import (
    ConflictingEvents,
    DuplicateCode,
    InvalidCode,
    MalformedTag,
    MembershipCycle,
    ParseError,
    SelfHierarchy,
    SkosverError,
    StyleUnrepresentable,
    UnknownCode,
    UnknownVersion,
    VocabError,
)
from .langtag import LanguageTag, make_notation_tag, notation_kind_of, parse_language_tag
from .model import (
    Concept,
    Container,
    ContainerKind,
    Label,
    Notation,
    Snapshot,
    Violation,
    add_concept,
    add_container,
    add_member,
    link_hierarchy,
    validate,
)
from .ledger import (
    ChangeEvent,
    ChangeKind,
    EdgeTemplate,
    Ledger,
    Newsletter,
    Relation,
    apply_newsletter,
    classify_change,
    load_ledger,
    parse_ledger,
)
from .versions import (
    MappingEdge,
    VersionedUri,
    VersionGraph,
    build_version_graph,
    resolve_backward,
    resolve_forward,
    valid_at,
)
from .rdf import Literal, PrefixMap, Triple, Uri, emit_turtle, parse_turtle_subset
from .encode import (
    DEFAULT_PREFIXES,
    encode_grouping,
    encode_mappings,
    encode_snapshot,
    notation_facts,
    version_prefixes,
)

__version__ = "0.1.0"
