"""Terms, triples and an indexed triple set."""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from ..errors import BrokenList

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


@dataclass(frozen=True, order=True)
class IriRef:
    value: str

    def __str__(self):
        return f"<{self.value}>"


@dataclass(frozen=True, order=True)
class Blank:
    label: str

    def __str__(self):
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    """String or integer literal. Integers serialize bare, strings quoted."""

    value: Union[str, int]

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (str, int)):
            raise TypeError(f"unsupported literal value {self.value!r}")

    @property
    def is_int(self) -> bool:
        return isinstance(self.value, int)

    def __str__(self):
        return str(self.value) if self.is_int else f'"{self.value}"'


Term = Union[IriRef, Blank, Literal]


class Triple(NamedTuple):
    subject: Union[IriRef, Blank]
    predicate: IriRef
    object: Term


def term_key(t: Term):
    """Total order over terms: IRIs, then blanks, then literals."""
    if isinstance(t, IriRef):
        return (0, t.value, "")
    if isinstance(t, Blank):
        return (1, t.label, "")
    if t.is_int:
        return (2, "", f"{t.value:+021d}")
    return (3, t.value, "")


def triple_key(t: Triple):
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


RDF_FIRST = IriRef(RDF_NS + "first")
RDF_REST = IriRef(RDF_NS + "rest")
RDF_NIL = IriRef(RDF_NS + "nil")


class Graph:
    """Set of triples with subject and object indexes plus prefix bindings."""

    def __init__(self, triples: Iterable[Triple] = (), prefixes=None):
        self.prefixes = dict(prefixes or {})
        self._triples = set()
        self._by_subject = defaultdict(set)
        self._by_object = defaultdict(set)
        for t in triples:
            self.add(*t)

    def add(self, s, p, o):
        if not isinstance(s, (IriRef, Blank)):
            raise TypeError(f"subject must be an IRI or blank node, got {s!r}")
        if not isinstance(p, IriRef):
            raise TypeError(f"predicate must be an IRI, got {p!r}")
        if not isinstance(o, (IriRef, Blank, Literal)):
            raise TypeError(f"object must be a term, got {o!r}")
        t = Triple(s, p, o)
        if t not in self._triples:
            self._triples.add(t)
            self._by_subject[s].add(t)
            self._by_object[o].add(t)
        return t

    def remove(self, s, p, o):
        t = Triple(s, p, o)
        if t in self._triples:
            self._triples.discard(t)
            self._by_subject[s].discard(t)
            self._by_object[o].discard(t)

    def __len__(self):
        return len(self._triples)

    def __iter__(self):
        return iter(sorted(self._triples, key=triple_key))

    def __contains__(self, t):
        return Triple(*t) in self._triples

    def __eq__(self, other):
        return isinstance(other, Graph) and self._triples == other._triples

    def __repr__(self):
        return f"<Graph {len(self)} triples>"

    @property
    def triples(self) -> frozenset:
        return frozenset(self._triples)

    def about(self, s) -> list:
        return sorted(self._by_subject.get(s, ()), key=triple_key)

    def referencing(self, o) -> list:
        return sorted(self._by_object.get(o, ()), key=triple_key)

    def objects(self, s, p) -> list:
        return sorted((t.object for t in self._by_subject.get(s, ()) if t.predicate == p), key=term_key)

    def subjects(self, p, o) -> list:
        return sorted((t.subject for t in self._by_object.get(o, ()) if t.predicate == p), key=term_key)

    def value(self, s, p, default=None):
        objs = self.objects(s, p)
        return objs[0] if objs else default

    def subject_terms(self) -> list:
        return sorted((s for s, ts in self._by_subject.items() if ts), key=term_key)

    def blanks(self) -> set:
        out = set()
        for s, p, o in self._triples:
            if isinstance(s, Blank):
                out.add(s)
            if isinstance(o, Blank):
                out.add(o)
        return out

    def copy(self) -> "Graph":
        return Graph(self._triples, self.prefixes)


def read_list(graph: Graph, head) -> list:
    """Members of the rdf:List starting at ``head`` (``rdf:nil`` gives ``[]``).

    Raises BrokenList on a missing or repeated rdf:first/rdf:rest, a
    cycle, or a chain that does not end at rdf:nil.
    """
    items = []
    seen = set()
    node = head
    while node != RDF_NIL:
        if not isinstance(node, (IriRef, Blank)):
            raise BrokenList(f"list chain reaches non-node {node}")
        if node in seen:
            raise BrokenList(f"list chain starting at {head} has a cycle at {node}")
        seen.add(node)
        firsts = graph.objects(node, RDF_FIRST)
        rests = graph.objects(node, RDF_REST)
        if len(firsts) != 1 or len(rests) != 1:
            raise BrokenList(
                f"list node {node} has {len(firsts)} rdf:first and {len(rests)} rdf:rest")
        items.append(firsts[0])
        node = rests[0]
    return items


def canonical_triples(graph: Graph) -> frozenset:
    """Triples with blank nodes relabelled canonically.

    Blank labels come from iterated hashing of each blank's neighbourhood
    (incoming and outgoing edges). Exact for the tree-shaped blank
    structures this package emits and parses; nodes that remain
    indistinguishable are numbered in a stable order, which is correct when
    they are automorphic.
    """
    blanks = graph.blanks()
    colour = {b: "" for b in blanks}

    def show(t):
        return f"_:{colour[t]}" if isinstance(t, Blank) else repr(t)

    for _ in range(len(blanks) + 1):
        new = {}
        for b in blanks:
            out = sorted(f"{t.predicate.value}>{show(t.object)}" for t in graph.about(b))
            inc = sorted(f"{show(t.subject)}>{t.predicate.value}" for t in graph.referencing(b))
            digest = hashlib.sha1("|".join(out + ["#"] + inc).encode()).hexdigest()
            new[b] = digest
        if len(set(new.values())) == len(set(colour.values())) and _same_partition(colour, new):
            colour = new
            break
        colour = new

    labels = {}
    counts = defaultdict(int)
    for b in sorted(blanks, key=lambda b: (colour[b], b.label)):
        c = colour[b]
        labels[b] = Blank(f"c{c[:16]}_{counts[c]}")
        counts[c] += 1

    def relabel(t):
        return labels.get(t, t) if isinstance(t, Blank) else t

    return frozenset(Triple(relabel(s), p, relabel(o)) for s, p, o in graph.triples)


def _same_partition(a: dict, b: dict) -> bool:
    groups_a = defaultdict(set)
    groups_b = defaultdict(set)
    for k in a:
        groups_a[a[k]].add(k)
        groups_b[b[k]].add(k)
    return {frozenset(g) for g in groups_a.values()} == {frozenset(g) for g in groups_b.values()}


def isomorphic(g1: Graph, g2: Graph) -> bool:
    if len(g1) != len(g2):
        return False
    return canonical_triples(g1) == canonical_triples(g2)
