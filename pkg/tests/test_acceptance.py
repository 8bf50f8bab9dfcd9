"""Acceptance suite: one test per criterion, each reported in the run summary."""
import datetime as dt
import itertools
import os
import random
import subprocess
import sys
import time

from skosver import (
    Concept,
    Label,
    Relation,
    Snapshot,
    Uri,
    build_version_graph,
    emit_turtle,
    load_ledger,
    parse_ledger,
    parse_turtle_subset,
    resolve_backward,
    resolve_forward,
    valid_at,
    validate,
)
from skosver.cli import main
from skosver.encode import DEFAULT_PREFIXES, encode_grouping, encode_mappings, encode_snapshot, version_prefixes
from skosver.rdf import PrefixMap

import conftest
from conftest import BASE, FIXTURES
from helpers import bfs_closure, random_ledger_text, random_snapshot

SKOS = "http://www.w3.org/2004/02/skos/core#"
OWL = "http://www.w3.org/2002/07/owl#"
LEDGER_FIXTURES = ["canada.tsv", "czechoslovakia.tsv", "france.tsv", "france-notations.tsv"]


def record(number, title, ok, detail=""):
    conftest.ACCEPTANCE_RESULTS.append((number, title, bool(ok), detail))
    assert ok, f"criterion {number} failed: {detail}"


def golden(name):
    return parse_turtle_subset((FIXTURES / name).read_text(encoding="utf-8"))[0]


def test_criterion_1_canada_mappings(tmp_path):
    out = tmp_path / "mappings.ttl"
    start = time.perf_counter()
    status = main(["export", str(FIXTURES / "canada.tsv"), "--what", "mappings", "-o", str(out)])
    triples, _ = parse_turtle_subset(out.read_text(encoding="utf-8"))
    elapsed = time.perf_counter() - start
    census = {p: sum(t.predicate == Uri(p) for t in triples)
              for p in (SKOS + "exactMatch", SKOS + "narrowMatch", OWL + "sameAs")}
    ok = (
        status == 0
        and len(triples) == 12
        and list(census.values()) == [2, 2, 8]
        and triples == golden("golden-canada-mappings.ttl")
        and elapsed < 1.0
    )
    record(1, "Canada mapping golden", ok, f"{len(triples)} triples {list(census.values())} in {elapsed:.3f}s")


def test_criterion_2_grouping(tmp_path):
    out = tmp_path / "grouping.ttl"
    start = time.perf_counter()
    status = main(["export", str(FIXTURES / "france.tsv"), "--what", "grouping", "-o", str(out)])
    triples, _ = parse_turtle_subset(out.read_text(encoding="utf-8"))
    elapsed = time.perf_counter() - start
    types = sum(t.predicate.value.endswith("#type") for t in triples)
    members = sum(t.predicate == Uri(SKOS + "member") for t in triples)
    ok = status == 0 and triples == golden("golden-grouping.ttl") and (types, members) == (6, 8) and elapsed < 1.0
    record(2, "grouping golden", ok, f"{types} type + {members} member triples in {elapsed:.3f}s")


def test_criterion_3_notations():
    snap = load_ledger(FIXTURES / "france-notations.tsv").initial
    checks = {
        "property/corrected": encode_snapshot(snap, notation_style="property", spelling="corrected")
        == golden("golden-notations-property.ttl"),
        "property/paper": encode_snapshot(snap, notation_style="property", spelling="paper")
        == golden("golden-notations-property-paper.ttl"),
    }
    fr = Uri("http://iso.org/iso3166/FR")
    langtag = encode_snapshot(snap, notation_style="langtag")
    checks["langtag"] = {t for t in langtag if t.subject == fr} == golden("golden-notations-langtag.ttl")
    failed = [k for k, v in checks.items() if not v]
    record(3, "notation goldens", not failed, "failed: " + ", ".join(failed) if failed else "3 goldens")


def _oracle_mismatches(graph):
    prefixes = DEFAULT_PREFIXES + version_prefixes(graph)
    triples, _ = parse_turtle_subset(emit_turtle(encode_mappings(graph), prefixes))
    mismatches = queries = 0
    versions = graph.versions
    for i, j in itertools.combinations_with_replacement(range(len(versions)), 2):
        vi, vj = versions[i], versions[j]
        for code in graph.snapshots[vi.id].concepts:
            got = {str(u) for u in resolve_forward(graph, code, vi.id, vj.id)}
            want = bfs_closure(triples, vi.namespace + code, vj.namespace)
            queries += 1
            mismatches += got != want
        for code in graph.snapshots[vj.id].concepts:
            got = {str(u) for u in resolve_backward(graph, code, vj.id, vi.id)}
            want = bfs_closure(triples, vj.namespace + code, vi.namespace, reverse=True)
            queries += 1
            mismatches += got != want
    return mismatches, queries


def test_criterion_4_resolution_oracle():
    graphs = [
        build_version_graph(load_ledger(FIXTURES / "canada.tsv"), BASE),
        build_version_graph(load_ledger(FIXTURES / "czechoslovakia.tsv"), BASE),
    ]
    rng = random.Random(2024)
    for _ in range(150):
        graphs.append(build_version_graph(parse_ledger(random_ledger_text(rng)), "http://example.org/rnd/"))
    assert all(len(g.versions) <= 8 for g in graphs)
    mismatches = queries = 0
    for graph in graphs:
        m, q = _oracle_mismatches(graph)
        mismatches += m
        queries += q
    record(4, "resolution oracle equivalence", mismatches == 0,
           f"{len(graphs)} graphs, {queries} queries, {mismatches} mismatches")


def test_criterion_5_specific_resolutions(canada):
    v = {name: f"{BASE}{name}/" for name in ("first", "newsletter-4")}
    cases = [
        (resolve_forward(canada, "CA-NF", "first", "newsletter-4"), {v["newsletter-4"] + "CA-NL"}),
        (resolve_forward(canada, "CA-NT", "first", "current"),
         {v["newsletter-4"] + "CA-NT", v["newsletter-4"] + "CA-NU"}),
        (resolve_backward(canada, "CA-NU", "newsletter-4", "first"), {v["first"] + "CA-NT"}),
    ]
    wrong = [i for i, (got, want) in enumerate(cases, 1) if {str(u) for u in got} != want]
    record(5, "specific resolutions", not wrong, f"wrong cases: {wrong}" if wrong else "3 cases")


def test_criterion_6_date_lookup(canada):
    hit = valid_at(canada, "CA-NF", dt.date(2002, 6, 1))
    label_ok = hit is not None and canada.snapshot("newsletter-2").concept(hit.code).pref_label() \
        == "Newfoundland and Labrador"
    ok = (
        hit is not None
        and str(hit) == BASE + "newsletter-2/CA-NF"
        and label_ok
        and valid_at(canada, "CA-NF", dt.date(2003, 1, 1)) is None
        and str(valid_at(canada, "CA-NL", dt.date(2003, 1, 1))) == BASE + "newsletter-4/CA-NL"
    )
    record(6, "date lookup", ok, f"CA-NF@2002-06-01 -> {hit}")


def test_criterion_7_round_trip():
    rng = random.Random(77)
    rnd = PrefixMap([("rnd", "http://example.org/rnd/")])
    failures = cases = 0
    for n in range(400):
        style = ("property", "langtag")[n % 2]
        prefixes = DEFAULT_PREFIXES + rnd if n % 3 else rnd + PrefixMap([("skos", SKOS)])
        triples = encode_snapshot(random_snapshot(rng), prefixes, style)
        cases += 1
        failures += parse_turtle_subset(emit_turtle(triples, prefixes)) != (triples, prefixes)
    for _ in range(150):
        graph = build_version_graph(parse_ledger(random_ledger_text(rng)), "http://example.org/v/")
        prefixes = DEFAULT_PREFIXES + PrefixMap([("rnd", "http://example.org/rnd/")]) + version_prefixes(graph)
        triples = set(encode_mappings(graph))
        for v in graph.versions:
            triples |= encode_snapshot(graph.snapshots[v.id], prefixes, concept_namespace=v.namespace)
        cases += 1
        failures += parse_turtle_subset(emit_turtle(triples, prefixes)) != (frozenset(triples), prefixes)
    record(7, "Turtle round trip", failures == 0, f"{cases} cases, {failures} failures")


def _kinds(snapshot, style=None):
    return {v.kind for v in validate(snapshot, style)}


def test_criterion_8_validator_catch_suite():
    header = "scheme\ts\tfirst\n"
    two_en = parse_ledger(header + "concept\tAA\t-\tA\ten\t-\nlabel\tAA\tpref\tAlpha\ten\n").initial
    self_loop = parse_ledger(header + "concept\tFR-E\tFR-E\tBretagne\ten\t-\n").initial
    cycle = parse_ledger(
        header + "concept\tAA\t-\tA\ten\t-\n"
        "container\ts:one\tcollection\ts:two,AA\ncontainer\ts:two\tcollection\ts:one\n"
    ).initial
    broken = Snapshot("first", {
        "AA": Concept("AA", {Label.of("A", "en")}),
        "BB": Concept("BB", {Label.of("B", "en")}, broader={"AA"}),
    })
    multi = load_ledger(FIXTURES / "france-notations.tsv").initial
    cases = {
        "DuplicatePrefLabel": _kinds(two_en),
        "BrokenInverse": _kinds(broken),
        "SelfHierarchy": _kinds(self_loop),
        "MembershipCycle": _kinds(cycle),
        "StyleUnrepresentable": _kinds(multi, "zxx"),
    }
    wrong = {k: sorted(v) for k, v in cases.items() if v != {k}}
    record(8, "validator catch suite", not wrong, f"unexpected: {wrong}" if wrong else f"{len(cases)} classes")


def _export_all(path, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run(
        [sys.executable, "-m", "skosver.cli", "export", str(path), "--what", "all"],
        capture_output=True, env=env, check=False,
    )
    return proc.returncode, proc.stdout


def test_criterion_9_determinism():
    differing = []
    for name in LEDGER_FIXTURES:
        first = _export_all(FIXTURES / name, 1)
        second = _export_all(FIXTURES / name, 2)
        if first[0] != 0 or first != second or not first[1]:
            differing.append(name)
    record(9, "deterministic export", not differing,
           f"differs: {differing}" if differing else f"{len(LEDGER_FIXTURES)} fixtures byte-identical")
