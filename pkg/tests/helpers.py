"""Random ledgers and snapshots, plus a reachability oracle that shares no
code with the resolver."""
import random
from collections import deque

from skosver import (
    Concept,
    Container,
    Label,
    Notation,
    add_concept,
    add_container,
    add_member,
    link_hierarchy,
    parse_language_tag,
)
from skosver.model import Snapshot

CODE_POOL = [f"C{i:02d}" for i in range(20)]
LANGS = ["en", "fr", "de", "en-gb", "zh-hant"]
TEXT_CHARS = list("abcXYZ019 .,;:#@<>_-") + ['"', "\\", "\n", "\t", "\r", "é", "中", "ß", " ", "'"]


def random_ledger_text(rng: random.Random, max_versions=8, max_codes=20):
    """A ledger whose events respect the arity rules and touch each code once."""
    pool = CODE_POOL[:max_codes]
    alive = rng.sample(pool, rng.randint(1, min(8, len(pool))))
    lines = ["scheme\trnd\tfirst\t1990-01-01"]
    order = list(alive)
    for i, code in enumerate(order):
        parent = rng.choice(order[:i]) if i and rng.random() < 0.4 else "-"
        nots = f"twoletter={code}" if rng.random() < 0.5 else "-"
        lines.append(f"concept\t{code}\t{parent}\tName {code}\ten\t{nots}")
    lines.append(f"container\trnd:all\tscheme\t{','.join(order)}")

    alive = set(alive)
    year = 1991
    for n in range(rng.randint(0, max_versions - 1)):
        lines.append(f"newsletter\tN{n}\t{year + n}-06-01")
        used = set()
        for _ in range(rng.randint(0, 3)):
            free_alive = sorted(alive - used)
            fresh = sorted(set(pool) - alive - used)
            kind = rng.choice(["create", "dissolve", "split", "merge", "rename", "recode"])
            if kind == "create" and fresh:
                code = rng.choice(fresh)
                parent = ""
                if free_alive and rng.random() < 0.3:
                    parent = "\t" + rng.choice(free_alive)
                lines.append(f"create\t{code}\tNew {code}\ten{parent}")
                used.add(code)
                alive.add(code)
                continue
            if kind == "dissolve" and len(free_alive) >= 1 and len(alive) > 1:
                code = rng.choice(free_alive)
                lines.append(f"dissolve\t{code}")
                used.add(code)
                alive.discard(code)
                continue
            if kind == "split" and free_alive and len(fresh) >= 2:
                old = rng.choice(free_alive)
                new = rng.sample(fresh, rng.randint(1, min(3, len(fresh))))
                if len(new) < 2 or rng.random() < 0.5:
                    new = [old] + new
                lines.append(f"split\t{old}\t{','.join(new)}")
                used.update(new + [old])
                alive.discard(old)
                alive.update(new)
                continue
            if kind == "merge" and len(free_alive) >= 2:
                olds = rng.sample(free_alive, rng.randint(2, min(3, len(free_alive))))
                new = rng.choice(olds) if rng.random() < 0.5 or not fresh else rng.choice(fresh)
                lines.append(f"merge\t{','.join(olds)}\t{new}")
                used.update(olds + [new])
                alive.difference_update(olds)
                alive.add(new)
                continue
            if kind == "rename" and free_alive:
                code = rng.choice(free_alive)
                lines.append(f"rename\t{code}\tRenamed {code} {n}\ten")
                used.add(code)
                continue
            if kind == "recode" and free_alive and fresh:
                old, new = rng.choice(free_alive), rng.choice(fresh)
                lines.append(f"recode\t{old}\t{new}")
                used.update([old, new])
                alive.discard(old)
                alive.add(new)
    return "\n".join(lines) + "\n"


def random_text(rng, low=1, high=12):
    return "".join(rng.choice(TEXT_CHARS) for _ in range(rng.randint(low, high)))


def random_snapshot(rng: random.Random, max_codes=12):
    """A valid snapshot built through the public model operations."""
    snap = Snapshot("first")
    codes = rng.sample(CODE_POOL, rng.randint(0, max_codes))
    for code in codes:
        labels = {Label(random_text(rng), parse_language_tag(lang))
                  for lang in rng.sample(LANGS, rng.randint(0, 3))}
        alts = {Label(random_text(rng), parse_language_tag(rng.choice(LANGS)))
                for _ in range(rng.randint(0, 2))}
        kinds = rng.sample(["twoletter", "threeletter", "numerical", "local"], rng.randint(0, 3))
        notations = {Notation(k, random_text(rng)) for k in kinds}
        snap = add_concept(snap, Concept(code, labels, alts, notations))
    for i, code in enumerate(codes):
        if i and rng.random() < 0.5:
            snap = link_hierarchy(snap, rng.choice(codes[:i]), code)
    boxes = [f"rnd:box{i}" for i in range(rng.randint(0, 4))]
    for box in boxes:
        kind = rng.choice(["scheme", "collection"])
        kinds = rng.sample(["twoletter", "numerical"], rng.randint(0, 2)) if kind == "scheme" else []
        snap = add_container(snap, Container(box, kind, (), kinds))
    for i, box in enumerate(boxes):
        for member in rng.sample(codes + boxes[i + 1:], min(len(codes) + len(boxes) - i - 1, rng.randint(0, 4))):
            snap = add_member(snap, box, member)
    return snap


def bfs_closure(triples, start, namespace, reverse=False):
    """URIs (as strings) in ``namespace`` reachable from ``start`` over any
    triple whose object is a URI, following edges forward or reversed."""
    adj = {}
    for s, _, o in triples:
        a, b = (o.value, s.value) if reverse else (s.value, o.value)
        adj.setdefault(a, set()).add(b)
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return {u for u in seen if u.startswith(namespace) and "/" not in u[len(namespace):]}
