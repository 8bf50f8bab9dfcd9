"""Minimal RDF terms with a deterministic Turtle writer and a matching reader.

The reader accepts exactly the constructs the writer produces: ``@prefix``
directives, prefixed names, ``<IRI>`` references, ``a``, ``;``, ``,``,
``.`` and double-quoted literals with an optional language tag.  Blank
nodes, collections, typed literals and long strings are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Union

from .errors import MalformedTag, ParseError
from .langtag import LanguageTag, parse_language_tag

__all__ = [
    "Uri",
    "Literal",
    "Triple",
    "PrefixMap",
    "RDF_TYPE",
    "emit_turtle",
    "parse_turtle_subset",
]

_IRI_RE = re.compile(r'[A-Za-z][A-Za-z0-9+.-]*:[^\x00-\x20<>"{}|^`\\]*\Z')
_PREFIX_RE = re.compile(r"(?:[A-Za-z](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?\Z")
_LOCAL_RE = re.compile(r"(?:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?\Z")


@dataclass(frozen=True, order=True)
class Uri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not _IRI_RE.match(self.value):
            raise ValueError(f"not an absolute URI: {self.value!r}")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Literal:
    text: str
    lang: Optional[LanguageTag] = None

    def __post_init__(self):
        if isinstance(self.lang, str):
            object.__setattr__(self, "lang", parse_language_tag(self.lang))

    def __str__(self):
        return self.text


Term = Union[Uri, Literal]


class Triple(NamedTuple):
    subject: Uri
    predicate: Uri
    object: Term


RDF_TYPE = Uri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")


class PrefixMap:
    """Ordered ``prefix -> namespace`` declarations.

    Prefixes are unique; several prefixes may share a namespace, in which
    case the first one is used when abbreviating.
    """

    def __init__(self, entries: Iterable = ()):
        self._entries = []
        for prefix, namespace in entries:
            self.add(prefix, namespace)

    def add(self, prefix: str, namespace: str) -> None:
        if not _PREFIX_RE.match(prefix):
            raise ValueError(f"invalid prefix name {prefix!r}")
        if any(p == prefix for p, _ in self._entries):
            raise ValueError(f"duplicate prefix {prefix!r}")
        Uri(namespace)
        self._entries.append((prefix, namespace))

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return f"PrefixMap({self._entries!r})"

    def __add__(self, other) -> "PrefixMap":
        merged = PrefixMap(self._entries)
        for prefix, namespace in other:
            if prefix not in merged:
                merged.add(prefix, namespace)
        return merged

    def __contains__(self, prefix) -> bool:
        return any(p == prefix for p, _ in self._entries)

    def namespace(self, prefix: str) -> str:
        for p, ns in self._entries:
            if p == prefix:
                return ns
        raise KeyError(prefix)

    def expand(self, pname: str) -> Uri:
        prefix, sep, local = pname.partition(":")
        if not sep:
            raise ValueError(f"not a prefixed name: {pname!r}")
        return Uri(self.namespace(prefix) + local)

    def abbreviate(self, uri: Uri):
        """Return ``(index, prefix, local)`` for the longest matching namespace.

        None when no declared namespace yields a valid local name.
        """
        best = None
        for index, (prefix, ns) in enumerate(self._entries):
            if uri.value.startswith(ns):
                local = uri.value[len(ns):]
                if _LOCAL_RE.match(local) and (best is None or len(ns) > len(self._entries[best[0]][1])):
                    best = (index, prefix, local)
        return best


# -- writing ---------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


class _Writer:
    def __init__(self, prefixes: PrefixMap):
        self.prefixes = prefixes
        self._cache = {}

    def short(self, uri: Uri):
        if uri not in self._cache:
            self._cache[uri] = self.prefixes.abbreviate(uri)
        return self._cache[uri]

    def uri_key(self, uri: Uri):
        hit = self.short(uri)
        if hit is None:
            return (len(self.prefixes), uri.value)
        return (hit[0], hit[2])

    def object_key(self, term: Term):
        if isinstance(term, Uri):
            return (0, self.uri_key(term), "")
        return (1, (term.text, ""), str(term.lang) if term.lang else "")

    def render(self, term: Term) -> str:
        if isinstance(term, Literal):
            text = _quote(term.text)
            return f"{text}@{term.lang}" if term.lang is not None else text
        hit = self.short(term)
        if hit is None:
            return f"<{term.value}>"
        return f"{hit[1]}:{hit[2]}"


def emit_turtle(triples: Iterable[Triple], prefixes: PrefixMap) -> str:
    """Serialize ``triples`` deterministically.

    Subjects are ordered by the position of their namespace in ``prefixes``
    and then by local name; ``rdf:type`` comes first as ``a``.  The output
    depends only on the set of triples and the prefix map.
    """
    w = _Writer(prefixes)
    by_subject = {}
    for s, p, o in set(triples):
        by_subject.setdefault(s, {}).setdefault(p, set()).add(o)

    lines = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in prefixes]
    for subject in sorted(by_subject, key=w.uri_key):
        if lines:
            lines.append("")
        preds = by_subject[subject]
        order = sorted(preds, key=lambda p: (p != RDF_TYPE, w.uri_key(p)))
        parts = []
        for pred in order:
            verb = "a" if pred == RDF_TYPE else w.render(pred)
            objs = ", ".join(w.render(o) for o in sorted(preds[pred], key=w.object_key))
            parts.append(f"{verb} {objs}")
        body = " ;\n  ".join(parts)
        lines.append(f"{w.render(subject)} {body} .")
    return "\n".join(lines) + "\n" if lines else ""


# -- reading ---------------------------------------------------------------

_NAME_CHARS = re.compile(r"[A-Za-z0-9_.:-]")
_STRING_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


class _Tok(NamedTuple):
    kind: str  # 'prefix', 'iri', 'pname', 'pns', 'a', 'punct', 'literal'
    value: object
    line: int
    col: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def fail(self, message, line=None, col=None):
        raise ParseError(message, line or self.line, col or self.col)

    def advance(self, n=1):
        for _ in range(n):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def peek(self, n=0):
        i = self.pos + n
        return self.text[i] if i < len(self.text) else ""

    def tokens(self):
        while True:
            ch = self.peek()
            if not ch:
                return
            if ch in " \t\r\n":
                self.advance()
                continue
            if ch == "#":
                while self.peek() and self.peek() != "\n":
                    self.advance()
                continue
            line, col = self.line, self.col
            if ch in ";,.":
                self.advance()
                yield _Tok("punct", ch, line, col)
            elif ch == "<":
                yield self.iri(line, col)
            elif ch == '"':
                yield self.literal(line, col)
            elif ch == "@":
                if self.text.startswith("@prefix", self.pos):
                    self.advance(len("@prefix"))
                    yield _Tok("prefix", None, line, col)
                else:
                    self.fail("unsupported directive or misplaced language tag")
            elif ch in "[]":
                self.fail("blank nodes are not supported")
            elif ch in "()":
                self.fail("collections are not supported")
            elif ch == "'":
                self.fail("single-quoted literals are not supported")
            elif ch == "^":
                self.fail("typed literals are not supported")
            elif ch == "_" and self.peek(1) == ":":
                self.fail("blank nodes are not supported")
            elif _NAME_CHARS.match(ch):
                yield self.name(line, col)
            else:
                self.fail(f"unexpected character {ch!r}")

    def iri(self, line, col):
        self.advance()
        start = self.pos
        while True:
            ch = self.peek()
            if not ch or ch == "\n":
                self.fail("unterminated IRI", line, col)
            if ch == ">":
                break
            self.advance()
        value = self.text[start:self.pos]
        self.advance()
        try:
            return _Tok("iri", Uri(value), line, col)
        except ValueError:
            self.fail(f"invalid IRI <{value}>", line, col)

    def literal(self, line, col):
        if self.text.startswith('"""', self.pos):
            self.fail("long (triple-quoted) strings are not supported")
        self.advance()
        out = []
        while True:
            ch = self.peek()
            if not ch or ch in "\n\r":
                self.fail("unterminated string literal", line, col)
            if ch == '"':
                self.advance()
                break
            if ch == "\\":
                esc = self.peek(1)
                if esc not in _STRING_UNESCAPES:
                    self.fail(f"unsupported escape \\{esc}")
                out.append(_STRING_UNESCAPES[esc])
                self.advance(2)
                continue
            out.append(ch)
            self.advance()
        lang = None
        if self.peek() == "@":
            self.advance()
            tline, tcol = self.line, self.col
            start = self.pos
            while self.peek() and (self.peek().isascii() and (self.peek().isalnum() or self.peek() == "-")):
                self.advance()
            try:
                lang = parse_language_tag(self.text[start:self.pos])
            except MalformedTag as exc:
                self.fail(f"bad language tag: {exc}", tline, tcol + exc.offset)
        elif self.peek() == "^":
            self.fail("typed literals are not supported")
        return _Tok("literal", Literal("".join(out), lang), line, col)

    def name(self, line, col):
        start = self.pos
        while self.peek() and _NAME_CHARS.match(self.peek()):
            self.advance()
        # a trailing '.' terminates the statement, not the name
        while self.pos > start and self.text[self.pos - 1] == ".":
            self.pos -= 1
            self.col -= 1
        word = self.text[start:self.pos]
        if word == "a":
            return _Tok("a", None, line, col)
        if ":" not in word:
            self.fail(f"unsupported bare word {word!r}", line, col)
        prefix, _, local = word.partition(":")
        if not _PREFIX_RE.match(prefix) or not _LOCAL_RE.match(local):
            self.fail(f"malformed prefixed name {word!r}", line, col)
        if not local:
            return _Tok("pns", prefix, line, col)
        return _Tok("pname", (prefix, local), line, col)


class _Parser:
    def __init__(self, text):
        self.tokens = list(_Lexer(text).tokens())
        self.i = 0
        self.prefixes = []
        self.triples = set()
        self.end = (text.count("\n") + 1, 1)

    def fail(self, message, tok=None):
        if tok is None:
            raise ParseError(message, *self.end)
        raise ParseError(message, tok.line, tok.col)

    def next(self, what):
        if self.i >= len(self.tokens):
            self.fail(f"unexpected end of input, expected {what}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def expect_punct(self, ch):
        tok = self.next(repr(ch))
        if tok.kind != "punct" or tok.value != ch:
            self.fail(f"expected {ch!r}", tok)

    def namespace(self, prefix, tok):
        for p, ns in self.prefixes:
            if p == prefix:
                return ns
        self.fail(f"undeclared prefix {prefix!r}", tok)

    def uri(self, tok, what):
        if tok.kind == "iri":
            return tok.value
        if tok.kind == "pname":
            prefix, local = tok.value
            return Uri(self.namespace(prefix, tok) + local)
        if tok.kind == "pns":
            return Uri(self.namespace(tok.value, tok))
        self.fail(f"expected {what}", tok)

    def parse(self):
        while self.peek() is not None:
            tok = self.next("statement")
            if tok.kind == "prefix":
                self.directive()
            else:
                self.statement(tok)
        return frozenset(self.triples), PrefixMap(self.prefixes)

    def directive(self):
        tok = self.next("prefix name")
        if tok.kind != "pns":
            self.fail("expected 'prefix:' after @prefix", tok)
        iri = self.next("namespace IRI")
        if iri.kind != "iri":
            self.fail("expected <namespace> in @prefix", iri)
        self.expect_punct(".")
        # redeclaration replaces the binding in place
        for k, (p, _) in enumerate(self.prefixes):
            if p == tok.value:
                self.prefixes[k] = (p, iri.value.value)
                break
        else:
            self.prefixes.append((tok.value, iri.value.value))

    def statement(self, tok):
        subject = self.uri(tok, "subject IRI")
        while True:
            verb = self.next("predicate")
            predicate = RDF_TYPE if verb.kind == "a" else self.uri(verb, "predicate IRI")
            while True:
                obj = self.next("object")
                term = obj.value if obj.kind == "literal" else self.uri(obj, "object")
                self.triples.add(Triple(subject, predicate, term))
                sep = self.next("',', ';' or '.'")
                if sep.kind != "punct":
                    self.fail("expected ',', ';' or '.'", sep)
                if sep.value != ",":
                    break
            if sep.value == ".":
                return
            # tolerate a dangling ';' before '.'
            nxt = self.peek()
            if nxt is not None and nxt.kind == "punct" and nxt.value == ".":
                self.i += 1
                return


def parse_turtle_subset(text: str):
    """Parse Turtle written by :func:`emit_turtle`.

    Returns ``(triples, prefixes)``: a frozenset of :class:`Triple` and the
    declared :class:`PrefixMap` in declaration order.
    """
    return _Parser(text).parse()
