"""Change ledgers: an initial snapshot plus dated newsletters of change events.

The on-disk form is a tab-separated text file (``#`` starts a comment line)::

    prefix      <name>  <namespace>                      (optional, repeatable)
    scheme      <scheme-id>  <initial-version>  [<date>]
    concept     <code>  <broader|->  <pref-label|->  <lang|->  <kind=value,...|->
    label       <code>  pref|alt  <text>  <lang>
    container   <id>  scheme|collection  <member,...|->  [<notation-kind,...|->]
    newsletter  <id>  <YYYY-MM-DD>
    create      <code>  <pref-label>  <lang>  [<broader>]
    dissolve    <code>
    split       <old>  <new,...>  [<label|label|...>  <lang>]
    merge       <old,...>  <new>  [<label>  <lang>]
    rename      <code>  <new-pref-label>  <lang>
    recode      <old>  <new>

Event records belong to the most recent ``newsletter`` record.
"""
from __future__ import annotations

import datetime as dt
import enum
import io
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Optional, TextIO, Union

from .errors import (
    ConflictingEvents,
    DuplicateCode,
    InvalidCode,
    MalformedTag,
    ParseError,
    UnknownCode,
)
from .langtag import parse_language_tag
from .model import (
    Concept,
    Container,
    ContainerKind,
    Label,
    Notation,
    Snapshot,
    is_code,
    is_container_id,
)

__all__ = [
    "ChangeKind",
    "Relation",
    "ChangeEvent",
    "Newsletter",
    "Ledger",
    "EdgeTemplate",
    "MappingRule",
    "classify_change",
    "apply_newsletter",
    "parse_ledger",
    "load_ledger",
]


class ChangeKind(str, enum.Enum):
    CREATION = "creation"
    DISSOLUTION = "dissolution"
    SPLIT = "split"
    MERGE = "merge"
    RENAME = "rename"
    RECODE = "recode"


class Relation(str, enum.Enum):
    SAME_AS = "same_as"
    EXACT_MATCH = "exact_match"
    NARROW_MATCH = "narrow_match"
    BROAD_MATCH = "broad_match"
    # marker for dissolved concepts; never materialized as an edge
    DEPRECATED = "deprecated"


class MappingRule(NamedTuple):
    """How one kind of change links the old version to the new one.

    Edges always run from the old-version concept (subject) to the
    new-version concept (object).  ``relation`` is None for creations,
    which have no predecessor.
    """

    relation: Optional[Relation]
    subject_side: str = "old"
    object_side: str = "new"


_RULES = {
    ChangeKind.CREATION: MappingRule(None),
    ChangeKind.DISSOLUTION: MappingRule(Relation.DEPRECATED),
    ChangeKind.SPLIT: MappingRule(Relation.NARROW_MATCH),
    ChangeKind.MERGE: MappingRule(Relation.BROAD_MATCH),
    ChangeKind.RENAME: MappingRule(Relation.EXACT_MATCH),
    ChangeKind.RECODE: MappingRule(Relation.EXACT_MATCH),
}


def classify_change(kind: ChangeKind) -> MappingRule:
    return _RULES[ChangeKind(kind)]


@dataclass(frozen=True)
class ChangeEvent:
    kind: ChangeKind
    subjects: tuple = ()
    objects: tuple = ()
    # keyed by object code
    new_labels: Mapping[str, Label] = field(default_factory=dict)
    new_notations: Mapping[str, frozenset] = field(default_factory=dict)
    # parent of a created concept
    broader: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ChangeKind(self.kind))
        object.__setattr__(self, "subjects", tuple(self.subjects))
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "broader", tuple(self.broader))
        self._check_arity()

    def _check_arity(self):
        k, ns, no = self.kind, len(self.subjects), len(self.objects)
        if k is ChangeKind.CREATION:
            ok = ns == 0 and no == 1
        elif k is ChangeKind.DISSOLUTION:
            ok = ns == 1 and no == 0
        elif k is ChangeKind.SPLIT:
            ok = ns == 1 and no >= 2 and len(set(self.objects)) == no
        elif k is ChangeKind.MERGE:
            ok = ns >= 2 and no == 1 and len(set(self.subjects)) == ns
        elif k is ChangeKind.RENAME:
            ok = ns == no == 1 and self.subjects == self.objects and bool(self.new_labels)
        else:
            ok = ns == no == 1 and self.subjects != self.objects
        if not ok:
            raise ValueError(
                f"{k.value} event with {ns} subject(s) and {no} object(s) violates arity rules"
            )

    @property
    def codes(self) -> frozenset:
        return frozenset(self.subjects) | frozenset(self.objects)


@dataclass(frozen=True)
class Newsletter:
    id: str
    date: dt.date
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))


@dataclass(frozen=True, eq=False)
class Ledger:
    scheme_id: str
    initial: Snapshot
    newsletters: tuple = ()
    initial_date: Optional[dt.date] = None
    # extra (prefix, namespace) pairs declared in the file
    prefixes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "newsletters", tuple(self.newsletters))
        object.__setattr__(self, "prefixes", tuple(self.prefixes))


class EdgeTemplate(NamedTuple):
    source: str
    target: Optional[str]
    relation: Relation


def _replace_pref_label(concept: Concept, label: Label) -> Concept:
    kept = {l for l in concept.pref_labels if l.lang != label.lang}
    return replace(concept, pref_labels=kept | {label})


def apply_newsletter(snapshot: Snapshot, newsletter: Newsletter, version: Optional[str] = None):
    """Apply one newsletter to ``snapshot``.

    Returns ``(new_snapshot, templates)`` where ``templates`` holds one
    :class:`EdgeTemplate` per (old concept, new concept) link, sorted by
    source then target.  Concepts no event touches get ``same_as``.
    """
    version = newsletter.id if version is None else version
    touched = {}
    for i, event in enumerate(newsletter.events):
        for code in event.codes:
            if code in touched and touched[code] != i:
                raise ConflictingEvents(
                    f"newsletter {newsletter.id}: {code!r} touched by more than one event", code
                )
            touched[code] = i

    old = snapshot.concepts
    for event in newsletter.events:
        for code in event.subjects:
            if code not in old:
                raise UnknownCode(f"newsletter {newsletter.id}: unknown code {code!r}", code)
        for code in event.objects:
            if not is_code(code):
                raise InvalidCode(f"newsletter {newsletter.id}: invalid code {code!r}", code)
            if code not in event.subjects and code in snapshot:
                raise DuplicateCode(f"newsletter {newsletter.id}: {code!r} already exists", code)
        for code in event.broader:
            if code not in old:
                raise UnknownCode(f"newsletter {newsletter.id}: unknown parent {code!r}", code)

    concepts = dict(old)
    # where children of a replaced concept attach, and what replaces it in containers
    parent_repl: dict = {}
    member_repl: dict = {}
    templates = []
    deprecated = set()

    def labels_for(event, code, fallback=frozenset()):
        label = event.new_labels.get(code)
        if label is None:
            return fallback
        return frozenset(l for l in fallback if l.lang != label.lang) | {label}

    for event in newsletter.events:
        kind = event.kind
        rule = classify_change(kind)
        if kind is ChangeKind.CREATION:
            code = event.objects[0]
            concepts[code] = Concept(
                code,
                pref_labels=labels_for(event, code),
                notations=event.new_notations.get(code, frozenset()),
                broader=event.broader,
            )
        elif kind is ChangeKind.DISSOLUTION:
            code = event.subjects[0]
            del concepts[code]
            deprecated.add(code)
            parent_repl[code] = []
            member_repl[code] = []
            templates.append(EdgeTemplate(code, None, rule.relation))
        elif kind is ChangeKind.RENAME:
            code = event.subjects[0]
            concept = old[code]
            label = event.new_labels[code]
            concept = _replace_pref_label(concept, label)
            if code in event.new_notations:
                concept = replace(concept, notations=event.new_notations[code])
            concepts[code] = concept
            templates.append(EdgeTemplate(code, code, rule.relation))
        elif kind is ChangeKind.RECODE:
            src, dst = event.subjects[0], event.objects[0]
            concept = old[src]
            notations = event.new_notations.get(
                dst,
                frozenset(Notation(n.kind, dst if n.value == src else n.value) for n in concept.notations),
            )
            del concepts[src]
            concepts[dst] = replace(
                concept,
                code=dst,
                pref_labels=labels_for(event, dst, concept.pref_labels),
                notations=notations,
                narrower=frozenset(),
            )
            parent_repl[src] = [dst]
            member_repl[src] = [dst]
            templates.append(EdgeTemplate(src, dst, rule.relation))
        elif kind is ChangeKind.SPLIT:
            src = event.subjects[0]
            concept = old[src]
            del concepts[src]
            for dst in event.objects:
                keep = concept if dst == src else Concept(dst)
                concepts[dst] = Concept(
                    dst,
                    pref_labels=labels_for(event, dst, keep.pref_labels),
                    alt_labels=keep.alt_labels,
                    notations=event.new_notations.get(dst, keep.notations),
                    broader=concept.broader,
                )
                templates.append(EdgeTemplate(src, dst, rule.relation))
            parent_repl[src] = [src] if src in event.objects else []
            member_repl[src] = list(event.objects)
        elif kind is ChangeKind.MERGE:
            dst = event.objects[0]
            keep = old[dst] if dst in event.subjects else Concept(dst)
            parents = frozenset().union(*(old[s].broader for s in event.subjects))
            for src in event.subjects:
                del concepts[src]
                parent_repl[src] = [dst]
                member_repl[src] = [dst]
                templates.append(EdgeTemplate(src, dst, rule.relation))
            concepts[dst] = Concept(
                dst,
                pref_labels=labels_for(event, dst, keep.pref_labels),
                alt_labels=keep.alt_labels,
                notations=event.new_notations.get(dst, keep.notations),
                broader=parents,
            )

    for code in sorted(old):
        if code not in touched:
            templates.append(EdgeTemplate(code, code, Relation.SAME_AS))

    # rewire hierarchy through replacements, then rebuild narrower as the inverse
    broader_of = {}
    for code, concept in concepts.items():
        parents = set()
        for parent in concept.broader:
            parents.update(parent_repl.get(parent, [parent]))
        parents.discard(code)
        broader_of[code] = frozenset(p for p in parents if p in concepts)
    narrower_of = {code: set() for code in concepts}
    for code, parents in broader_of.items():
        for parent in parents:
            narrower_of[parent].add(code)
    concepts = {
        code: replace(c, broader=broader_of[code], narrower=frozenset(narrower_of[code]))
        for code, c in concepts.items()
    }

    containers = {}
    for cid, box in snapshot.containers.items():
        members = []
        for member in box.members:
            for new in member_repl.get(member, [member]):
                if new not in members:
                    members.append(new)
        containers[cid] = replace(box, members=tuple(members))

    new_snapshot = Snapshot(version, concepts, containers, deprecated)
    templates.sort(key=lambda t: (t.source, t.target or ""))
    return new_snapshot, templates


# -- reading ---------------------------------------------------------------

_KINDS = {
    "create": ChangeKind.CREATION,
    "dissolve": ChangeKind.DISSOLUTION,
    "split": ChangeKind.SPLIT,
    "merge": ChangeKind.MERGE,
    "rename": ChangeKind.RENAME,
    "recode": ChangeKind.RECODE,
}
_PREFIX_RE = re.compile(r"[A-Za-z](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?\Z")


class _Reader:
    def __init__(self, lines: Iterable[str]):
        self.lines = lines
        self.lineno = 0
        self.scheme_id = None
        self.initial_version = None
        self.initial_date = None
        self.prefixes = []
        self.concepts = {}
        self.concept_lines = {}
        self.labels = []
        self.containers = {}
        self.container_lines = {}
        self.newsletters = []
        self.current = None
        self.codes = None  # codes alive at the current point, once newsletters start

    def fail(self, message, column=0):
        raise ParseError(message, self.lineno, column)

    def read(self) -> Ledger:
        for raw in self.lines:
            self.lineno += 1
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            record = fields[0]
            handler = getattr(self, "r_" + record, None)
            if handler is None:
                if record in _KINDS:
                    self.event(record, fields[1:])
                    continue
                self.fail(f"unknown record type {record!r}", 1)
            handler(fields[1:])
        if self.scheme_id is None:
            self.fail("missing 'scheme' header record")
        self.seal_initial()
        self.close_newsletter()
        return Ledger(
            self.scheme_id,
            self.initial,
            self.newsletters,
            self.initial_date,
            tuple(self.prefixes),
        )

    def arity(self, fields, low, high=None, record=""):
        high = low if high is None else high
        if not low <= len(fields) <= high:
            want = str(low) if low == high else f"{low}-{high}"
            self.fail(f"{record} record takes {want} field(s), got {len(fields)}")

    def date(self, text):
        try:
            return dt.date.fromisoformat(text)
        except ValueError:
            self.fail(f"invalid ISO 8601 date {text!r}")

    def label(self, text, lang):
        if not text:
            self.fail("empty label")
        try:
            return Label(text, parse_language_tag(lang))
        except MalformedTag as exc:
            self.fail(f"bad language tag {lang!r}: {exc}")

    def code(self, text, what="code"):
        if not is_code(text):
            self.fail(f"invalid {what} {text!r}")
        return text

    def codes_list(self, text):
        if not text or text == "-":
            return []
        return [self.code(c.strip()) for c in text.split(",")]

    # -- header and initial snapshot

    def initial_only(self, record):
        if self.scheme_id is None:
            self.fail(f"{record} record before 'scheme' header")
        if self.newsletters or self.current is not None:
            self.fail(f"{record} record after the first newsletter")

    def r_prefix(self, fields):
        self.arity(fields, 2, record="prefix")
        name, ns = fields
        if not _PREFIX_RE.match(name):
            self.fail(f"invalid prefix name {name!r}")
        if not re.match(r"[A-Za-z][A-Za-z0-9+.-]*:\S*\Z", ns):
            self.fail(f"namespace {ns!r} is not an absolute URI")
        self.prefixes.append((name, ns))

    def r_scheme(self, fields):
        if self.scheme_id is not None:
            self.fail("duplicate 'scheme' header")
        self.arity(fields, 2, 3, record="scheme")
        if not _PREFIX_RE.match(fields[0]):
            self.fail(f"invalid scheme id {fields[0]!r}")
        self.scheme_id = fields[0]
        if not re.match(r"[A-Za-z0-9][A-Za-z0-9_.-]*\Z", fields[1]):
            self.fail(f"invalid version label {fields[1]!r}")
        self.initial_version = fields[1]
        if len(fields) == 3 and fields[2] not in ("", "-"):
            self.initial_date = self.date(fields[2])

    def r_concept(self, fields):
        self.initial_only("concept")
        self.arity(fields, 5, record="concept")
        code, broader, text, lang, notations = fields
        self.code(code)
        if code in self.concepts or code in self.containers:
            raise DuplicateCode(f"line {self.lineno}: code {code!r} already present", code)
        labels = set()
        if text != "-":
            labels.add(self.label(text, lang))
        parsed = set()
        if notations != "-":
            for item in notations.split(","):
                kind, sep, value = item.partition("=")
                kind, value = kind.strip(), value.strip()
                if not sep or not re.fullmatch(r"[a-z0-9]+", kind) or not value:
                    self.fail(f"bad notation {item!r}; expected kind=value")
                parsed.add(Notation(kind, value))
        parents = set()
        if broader != "-":
            parents = set(self.codes_list(broader))
        self.concepts[code] = Concept(code, pref_labels=labels, notations=parsed, broader=parents)
        self.concept_lines[code] = self.lineno

    def r_label(self, fields):
        self.initial_only("label")
        self.arity(fields, 4, record="label")
        code, which, text, lang = fields
        if which not in ("pref", "alt"):
            self.fail(f"label type must be 'pref' or 'alt', got {which!r}")
        self.labels.append((self.lineno, code, which, self.label(text, lang)))

    def r_container(self, fields):
        self.initial_only("container")
        self.arity(fields, 3, 4, record="container")
        cid, kind, members = fields[:3]
        if not is_container_id(cid):
            self.fail(f"invalid container id {cid!r}; expected prefix:local")
        if cid in self.concepts or cid in self.containers:
            raise DuplicateCode(f"line {self.lineno}: container {cid!r} already present", cid)
        try:
            kind = ContainerKind(kind)
        except ValueError:
            self.fail(f"container kind must be 'scheme' or 'collection', got {kind!r}")
        member_ids = [] if members in ("", "-") else [m.strip() for m in members.split(",")]
        kinds = frozenset()
        if len(fields) == 4 and fields[3] not in ("", "-"):
            kinds = frozenset(k.strip() for k in fields[3].split(","))
            if not all(re.fullmatch(r"[a-z0-9]+", k) for k in kinds):
                self.fail(f"bad notation kinds {fields[3]!r}")
        self.containers[cid] = Container(cid, kind, member_ids, kinds)
        self.container_lines[cid] = self.lineno

    def seal_initial(self):
        if self.codes is not None:
            return
        concepts = dict(self.concepts)
        for lineno, code, which, label in self.labels:
            if code not in concepts:
                raise ParseError(f"label for unknown concept {code!r}", lineno)
            c = concepts[code]
            if which == "pref":
                concepts[code] = replace(c, pref_labels=c.pref_labels | {label})
            else:
                concepts[code] = replace(c, alt_labels=c.alt_labels | {label})
        children = {code: set() for code in concepts}
        for code, c in concepts.items():
            for parent in c.broader:
                if parent not in concepts:
                    raise ParseError(
                        f"{code!r} has unknown broader concept {parent!r}", self.concept_lines[code]
                    )
                children[parent].add(code)
        concepts = {code: replace(c, narrower=children[code]) for code, c in concepts.items()}
        for cid, box in self.containers.items():
            for member in box.members:
                if member not in concepts and member not in self.containers:
                    raise ParseError(
                        f"container {cid!r} has unknown member {member!r}", self.container_lines[cid]
                    )
        self.initial = Snapshot(self.initial_version, concepts, self.containers)
        self.codes = set(concepts)

    # -- newsletters

    def close_newsletter(self):
        if self.current is not None:
            ident, date, events = self.current
            self.newsletters.append(Newsletter(ident, date, events))
            self.current = None

    def r_newsletter(self, fields):
        if self.scheme_id is None:
            self.fail("newsletter record before 'scheme' header")
        self.arity(fields, 2, record="newsletter")
        self.seal_initial()
        self.close_newsletter()
        ident, date = fields
        if not ident:
            self.fail("empty newsletter id")
        if any(n.id == ident for n in self.newsletters):
            self.fail(f"duplicate newsletter id {ident!r}")
        date = self.date(date)
        previous = self.newsletters[-1].date if self.newsletters else self.initial_date
        if previous is not None and date <= previous:
            self.fail(f"newsletter date {date} does not follow {previous}")
        self.current = (ident, date, [])

    def event(self, record, fields):
        if self.current is None:
            self.fail(f"{record} event outside a newsletter")
        kind = _KINDS[record]
        labels, broader = {}, []
        try:
            if kind is ChangeKind.CREATION:
                self.arity(fields, 3, 4, record=record)
                code = self.code(fields[0])
                labels[code] = self.label(fields[1], fields[2])
                if len(fields) == 4 and fields[3] not in ("", "-"):
                    broader = [self.code(fields[3])]
                subjects, objects = [], [code]
            elif kind is ChangeKind.DISSOLUTION:
                self.arity(fields, 1, record=record)
                subjects, objects = [self.code(fields[0])], []
            elif kind is ChangeKind.RENAME:
                self.arity(fields, 3, record=record)
                code = self.code(fields[0])
                labels[code] = self.label(fields[1], fields[2])
                subjects, objects = [code], [code]
            elif kind is ChangeKind.RECODE:
                self.arity(fields, 2, record=record)
                subjects, objects = [self.code(fields[0])], [self.code(fields[1])]
            else:
                self.arity(fields, 2, 4, record=record)
                subjects, objects = self.codes_list(fields[0]), self.codes_list(fields[1])
                if len(fields) == 3:
                    self.fail(f"{record} labels need a language tag field")
                if len(fields) == 4:
                    texts = fields[2].split("|")
                    if len(texts) != len(objects):
                        self.fail(f"{record} has {len(texts)} label(s) for {len(objects)} new code(s)")
                    for code, text in zip(objects, texts):
                        if text:
                            labels[code] = self.label(text, fields[3])
            event = ChangeEvent(kind, subjects, objects, labels, broader=broader)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            self.fail(str(exc))

        for code in event.subjects:
            if code not in self.codes:
                self.fail(f"{record} refers to unknown code {code!r}")
        for code in event.broader:
            if code not in self.codes:
                self.fail(f"{record} refers to unknown parent {code!r}")
        self.codes.difference_update(event.subjects)
        self.codes.update(event.objects)
        self.current[2].append(event)


def parse_ledger(source: Union[str, TextIO, Iterable[str]]) -> Ledger:
    """Read a ledger from text, an open text stream or an iterable of lines."""
    if isinstance(source, str):
        source = io.StringIO(source)
    return _Reader(source).read()


def load_ledger(path) -> Ledger:
    with open(path, encoding="utf-8") as fh:
        return parse_ledger(fh)
