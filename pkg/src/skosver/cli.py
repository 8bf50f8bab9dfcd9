"""Command-line interface.

Exit status: 0 success, 1 vocabulary violation, 2 input error,
3 resolution with no result.
"""
from __future__ import annotations

import argparse
import datetime as dt
import sys
from dataclasses import dataclass
from typing import Optional

from .encode import (
    DEFAULT_PREFIXES,
    ISO3166,
    NOTATION_STYLES,
    encode_grouping,
    encode_mappings,
    encode_snapshot,
    version_prefixes,
)
from .errors import MalformedTag, ParseError, UnknownCode, UnknownVersion, VocabError
from .ledger import load_ledger, apply_newsletter
from .model import Violation, validate
from .rdf import PrefixMap, emit_turtle
from .versions import build_version_graph, resolve_backward, resolve_forward, valid_at

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_EMPTY = 0, 1, 2, 3

DEFAULT_BASE_URI = ISO3166 + "2/"


@dataclass(frozen=True)
class CliConfig:
    base_uri: str = DEFAULT_BASE_URI
    notation_style: str = "property"
    spelling: str = "corrected"
    output_path: Optional[str] = None
    concept_namespace: str = ISO3166

    def __post_init__(self):
        if not self.base_uri.endswith("/"):
            raise ValueError(f"--base-uri must end with '/': {self.base_uri!r}")


class _Abort(Exception):
    def __init__(self, status):
        self.status = status


def _err(*parts):
    print(*parts, file=sys.stderr)


def _load(path):
    try:
        return load_ledger(path)
    except OSError as exc:
        _err(f"error: cannot read {path}: {exc.strerror or exc}")
        raise _Abort(EXIT_INPUT)
    except ParseError as exc:
        _err(f"error: {path}: {exc}")
        raise _Abort(EXIT_INPUT)
    except VocabError as exc:
        _err(f"{exc.kind}\t{exc.code}\t{exc}")
        raise _Abort(EXIT_VIOLATION)


def _check_versions(ledger, notation_style=None):
    """Validate every snapshot along the ledger; returns (version, violation) pairs.

    Stops at the first invalid snapshot or failing newsletter, since later
    versions cannot be derived from it.
    """
    snap = ledger.initial
    for n, newsletter in enumerate(ledger.newsletters, start=1):
        found = validate(snap, notation_style)
        if found:
            return [(snap.version, v) for v in found]
        try:
            snap, _ = apply_newsletter(snap, newsletter, version=f"newsletter-{n}")
        except VocabError as exc:
            return [(f"newsletter-{n}", Violation(exc.kind, exc.code or "-"))]
    return [(snap.version, v) for v in validate(snap, notation_style)]


def _graph(ledger, config):
    problems = _check_versions(ledger)
    if problems:
        for version, v in problems:
            _err(f"{version}\t{v.kind}\t{v.code}" + (f"\t{v.other}" if v.other else ""))
        raise _Abort(EXIT_VIOLATION)
    return build_version_graph(ledger, config.base_uri)


def _prefixes(ledger, graph) -> PrefixMap:
    return DEFAULT_PREFIXES + PrefixMap(ledger.prefixes) + version_prefixes(graph)


def _write(text, config):
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(ledger_path, config: CliConfig) -> int:
    ledger = _load(ledger_path)
    graph = _graph(ledger, config)
    for v in graph.versions:
        date = v.date.isoformat() if v.date else "-"
        print(f"{v.id}\t{v.namespace}\t{date}\t{len(graph.snapshots[v.id])}")
    return EXIT_OK


def export_triples(ledger, graph, config: CliConfig, what: str, version: Optional[str] = None):
    prefixes = _prefixes(ledger, graph)
    triples = set()
    if what in ("snapshots", "all"):
        chosen = [graph.version(version)] if version else list(graph.versions)
        last = chosen[-1].id
        for v in chosen:
            triples |= encode_snapshot(
                graph.snapshots[v.id],
                prefixes,
                config.notation_style,
                concept_namespace=v.namespace,
                vocab_namespace=config.concept_namespace,
                spelling=config.spelling,
                containers=v.id == last,
            )
    if what in ("grouping", "all"):
        snap = graph.snapshot(version) if version else graph.snapshots[graph.versions[-1].id]
        triples |= encode_grouping(snap, prefixes, concept_namespace=config.concept_namespace)
    if what in ("mappings", "all"):
        triples |= encode_mappings(graph, prefixes)
    return triples, prefixes


def cmd_export(ledger_path, config: CliConfig, what: str = "all", version: Optional[str] = None) -> int:
    ledger = _load(ledger_path)
    graph = _graph(ledger, config)
    try:
        triples, prefixes = export_triples(ledger, graph, config, what, version)
    except UnknownVersion as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    except VocabError as exc:
        _err(f"{exc.kind}\t{exc.code}\t{exc}")
        return EXIT_VIOLATION
    _write(emit_turtle(triples, prefixes), config)
    return EXIT_OK


def cmd_resolve(
    ledger_path,
    config: CliConfig,
    code: str,
    from_version: Optional[str] = None,
    to_version: Optional[str] = None,
    at: Optional[dt.date] = None,
    backward: bool = False,
) -> int:
    ledger = _load(ledger_path)
    graph = _graph(ledger, config)
    try:
        if at is not None:
            hit = valid_at(graph, code, at)
            found = [] if hit is None else [hit]
        else:
            resolve = resolve_backward if backward else resolve_forward
            found = resolve(graph, code, from_version, to_version)
    except (UnknownVersion, UnknownCode, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    lines = sorted(str(u) for u in found)
    for line in lines:
        print(line)
    return EXIT_OK if lines else EXIT_EMPTY


def cmd_validate(ledger_path, config: CliConfig) -> int:
    ledger = _load(ledger_path)
    problems = _check_versions(ledger, config.notation_style)
    if not problems:
        print("OK")
        return EXIT_OK
    for version, v in problems:
        print(f"{version}\t{v.kind}\t{v.code}")
    return EXIT_VIOLATION


def _date(text):
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO 8601 date: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skosver",
        description="Encode versioned code lists as SKOS and resolve codes across versions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("ledger", help="ledger file (tab-separated)")
    common.add_argument("--base-uri", default=DEFAULT_BASE_URI, help="prefix of the per-version namespaces")
    common.add_argument("--concept-namespace", default=ISO3166,
                        help="namespace for unversioned concepts and notation properties")
    common.add_argument("--notation-style", choices=NOTATION_STYLES, default="property")
    common.add_argument("--spelling", choices=("paper", "corrected"), default="corrected",
                        help="spelling of the notation-property declaration relation")
    common.add_argument("--output", "-o", help="write output here instead of standard output")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="apply all newsletters and list the versions")
    exp = sub.add_parser("export", parents=[common], help="write Turtle")
    exp.add_argument("--what", choices=("snapshots", "grouping", "mappings", "all"), default="all")
    exp.add_argument("--version", dest="only_version", help="limit snapshots/grouping to one version")
    res = sub.add_parser("resolve", parents=[common], help="follow a code across versions or dates")
    res.add_argument("code")
    res.add_argument("--from", dest="from_version")
    sel = res.add_mutually_exclusive_group(required=True)
    sel.add_argument("--to", dest="to_version")
    sel.add_argument("--at", type=_date, help="date (YYYY-MM-DD) to look the code up at")
    res.add_argument("--backward", action="store_true", help="follow mappings towards older versions")
    sub.add_parser("validate", parents=[common], help="check every snapshot")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        config = CliConfig(args.base_uri, args.notation_style, args.spelling, args.output, args.concept_namespace)
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    try:
        if args.command == "build":
            return cmd_build(args.ledger, config)
        if args.command == "export":
            return cmd_export(args.ledger, config, args.what, args.only_version)
        if args.command == "resolve":
            if args.to_version is not None and args.from_version is None:
                _err("error: --to needs --from")
                return EXIT_INPUT
            if args.at is not None and args.from_version is not None:
                _err("error: --at and --from are mutually exclusive")
                return EXIT_INPUT
            return cmd_resolve(args.ledger, config, args.code, args.from_version,
                               args.to_version, args.at, args.backward)
        return cmd_validate(args.ledger, config)
    except _Abort as abort:
        return abort.status
    except MalformedTag as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
