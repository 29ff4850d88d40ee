"""Turtle subset: parser and deterministic serializer.

Supported: ``@prefix``, ``<iri>`` (kept verbatim, no base resolution),
prefixed names, ``a``, ``;`` and ``,`` lists (trailing ``;`` allowed),
``( ... )`` collections, ``[ ... ]`` and ``_:label`` blank nodes,
bare integers, double-quoted strings with escapes, ``#`` comments.
"""

from __future__ import annotations

import re
from collections import defaultdict

from ..errors import TurtleSyntaxError, UnknownPrefix
from .graph import RDF_FIRST, RDF_NIL, RDF_NS, RDF_REST, Blank, Graph, IriRef, Literal, term_key

RDF_TYPE = IriRef(RDF_NS + "type")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<prefix_kw>@prefix\b)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<bnode>_:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)
  | (?P<pname>(?:[A-Za-z](?:[\w.-]*[\w-])?)?:(?:[\w%-]|:|\.(?=[\w%:-]))*)
  | (?P<integer>[+-]?[0-9]+(?![0-9.]*[0-9eE]))
  | (?P<a>a(?=[\s\[\]()<"#;,.]|\Z))
  | (?P<punct>[;,.\[\]()])
    """,
    re.X,
)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text):
    pos, line, line_start = 0, 1, 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            snippet = text[pos:pos + 12].split("\n")[0]
            raise TurtleSyntaxError(line, col, f"unexpected input {snippet!r}")
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = m.start() + tok.rindex("\n") + 1
        pos = m.end()
    return tokens, (line, pos - line_start + 1)


def _unescape(body, tok):
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        nxt = body[i + 1]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in "uU":
            n = 4 if nxt == "u" else 8
            hexd = body[i + 2:i + 2 + n]
            if not re.fullmatch(r"[0-9A-Fa-f]{%d}" % n, hexd):
                raise TurtleSyntaxError(tok.line, tok.col, f"bad \\{nxt} escape")
            out.append(chr(int(hexd, 16)))
            i += 2 + n
        else:
            raise TurtleSyntaxError(tok.line, tok.col, f"unknown escape \\{nxt}")
    return "".join(out)


class _Parser:
    def __init__(self, text):
        self.tokens, self.eof = _tokenize(text)
        self.i = 0
        self.graph = Graph()
        self.labels = {}
        self.fresh = 0

    # -- token helpers
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message, tok=None):
        tok = tok if tok is not None else self.peek()
        if tok is None:
            return TurtleSyntaxError(*self.eof, f"{message} at end of input")
        return TurtleSyntaxError(tok.line, tok.col, message)

    def next(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect_punct(self, ch):
        tok = self.peek()
        if tok is None or tok.kind != "punct" or tok.text != ch:
            found = "end of input" if tok is None else repr(tok.text)
            raise self.error(f"expected {ch!r}, found {found}")
        self.i += 1

    def at_punct(self, ch):
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.text == ch

    def new_blank(self):
        b = Blank(f"b{self.fresh}")
        self.fresh += 1
        return b

    # -- grammar
    def parse(self):
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "prefix_kw":
                self.prefix_decl()
            else:
                self.triples()
                self.expect_punct(".")
        return self.graph

    def prefix_decl(self):
        self.next()
        tok = self.next()
        if tok.kind != "pname" or not tok.text.endswith(":") or tok.text.count(":") != 1:
            raise self.error("expected a prefix name like 'ex:'", tok)
        iri_tok = self.next()
        if iri_tok.kind != "iri":
            raise self.error("expected <namespace IRI>", iri_tok)
        self.graph.prefixes[tok.text[:-1]] = iri_tok.text[1:-1]
        self.expect_punct(".")

    def triples(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "[":
            subj = self.blank_property_list()
            if self.at_punct("."):
                return
        elif tok.kind == "punct" and tok.text == "(":
            subj = self.collection()
        else:
            subj = self.subject_term()
        self.predicate_object_list(subj)

    def subject_term(self):
        tok = self.next()
        if tok.kind == "iri":
            return IriRef(tok.text[1:-1])
        if tok.kind == "pname":
            return self.expand(tok)
        if tok.kind == "bnode":
            return self.labelled_blank(tok.text[2:])
        raise self.error(f"expected a subject, found {tok.text!r}", tok)

    def labelled_blank(self, label):
        if label not in self.labels:
            self.labels[label] = self.new_blank()
        return self.labels[label]

    def expand(self, tok):
        prefix, local = tok.text.split(":", 1)
        if prefix not in self.graph.prefixes:
            raise UnknownPrefix(tok.line, tok.col, f"unknown prefix {prefix + ':'!r}")
        return IriRef(self.graph.prefixes[prefix] + local)

    def verb(self):
        tok = self.next()
        if tok.kind == "a":
            return RDF_TYPE
        if tok.kind == "iri":
            return IriRef(tok.text[1:-1])
        if tok.kind == "pname":
            return self.expand(tok)
        raise self.error(f"expected a predicate, found {tok.text!r}", tok)

    def predicate_object_list(self, subj):
        self.object_list(subj, self.verb())
        while self.at_punct(";"):
            while self.at_punct(";"):
                self.i += 1
            tok = self.peek()
            if tok is None or (tok.kind == "punct" and tok.text in ".]"):
                return
            self.object_list(subj, self.verb())

    def object_list(self, subj, pred):
        self.graph.add(subj, pred, self.object())
        while self.at_punct(","):
            self.i += 1
            self.graph.add(subj, pred, self.object())

    def object(self):
        tok = self.peek()
        if tok is None:
            raise self.error("expected an object")
        if tok.kind == "punct" and tok.text == "[":
            return self.blank_property_list()
        if tok.kind == "punct" and tok.text == "(":
            return self.collection()
        tok = self.next()
        if tok.kind == "iri":
            return IriRef(tok.text[1:-1])
        if tok.kind == "pname":
            return self.expand(tok)
        if tok.kind == "bnode":
            return self.labelled_blank(tok.text[2:])
        if tok.kind == "integer":
            return Literal(int(tok.text))
        if tok.kind == "string":
            return Literal(_unescape(tok.text[1:-1], tok))
        raise self.error(f"expected an object, found {tok.text!r}", tok)

    def blank_property_list(self):
        self.expect_punct("[")
        b = self.new_blank()
        if self.at_punct("]"):
            self.i += 1
            return b
        self.predicate_object_list(b)
        self.expect_punct("]")
        return b

    def collection(self):
        self.expect_punct("(")
        items = []
        while not self.at_punct(")"):
            if self.peek() is None:
                raise self.error("unterminated collection")
            items.append(self.object())
        self.i += 1
        if not items:
            return RDF_NIL
        nodes = [self.new_blank() for _ in items]
        for k, (node, item) in enumerate(zip(nodes, items)):
            self.graph.add(node, RDF_FIRST, item)
            self.graph.add(node, RDF_REST, nodes[k + 1] if k + 1 < len(nodes) else RDF_NIL)
        return nodes[0]


def parse_turtle(text: str) -> Graph:
    """Parse Turtle-subset text into a :class:`Graph`.

    Errors carry 1-based line and column. Blank nodes get fresh labels in
    order of appearance.
    """
    return _Parser(text).parse()


# --- serializer --------------------------------------------------------------

_LOCAL = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?\Z")


def _escape(s: str) -> str:
    return (s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
            .replace("\r", "\\r").replace("\t", "\\t"))


class _Writer:
    def __init__(self, graph: Graph):
        self.g = graph
        # longest namespace first so the most specific prefix wins
        self.ns = sorted(graph.prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        refs = defaultdict(int)
        for t in graph.triples:
            if isinstance(t.object, Blank):
                refs[t.object] += 1
        self.refs = refs
        self.lists = {}
        self.inline = set()
        self._plan_blanks()

    def _list_chain(self, head):
        """Members if ``head`` starts an unshared, well-formed chain; else None."""
        items, seen, node = [], set(), head
        while node != RDF_NIL:
            if not isinstance(node, Blank) or node in seen or self.refs[node] != 1:
                return None
            about = self.g.about(node)
            if len(about) != 2:
                return None
            preds = {t.predicate: t.object for t in about}
            if set(preds) != {RDF_FIRST, RDF_REST}:
                return None
            seen.add(node)
            items.append(preds[RDF_FIRST])
            node = preds[RDF_REST]
        return items, seen

    def _plan_blanks(self):
        consumed = set()
        for b in sorted(self.g.blanks(), key=term_key):
            if self.refs[b] != 1 or b in consumed:
                continue
            chain = self._list_chain(b)
            if chain is not None:
                self.lists[b] = chain[0]
                consumed |= chain[1]
        for b in self.g.blanks():
            if self.refs[b] == 1:
                self.inline.add(b)
        # break cycles among inline candidates: a blank may not contain itself
        for b in sorted(self.inline, key=term_key):
            if self._reaches(b, b, set()):
                self.inline.discard(b)
                self.lists.pop(b, None)
        self.chain_nodes = set()
        for head, _ in self.lists.items():
            node = head
            while node != RDF_NIL:
                self.chain_nodes.add(node)
                node = self.g.value(node, RDF_REST)

    def _reaches(self, start, goal, seen):
        for t in self.g.about(start):
            o = t.object
            if isinstance(o, Blank) and o in self.inline:
                if o == goal:
                    return True
                if o not in seen:
                    seen.add(o)
                    if self._reaches(o, goal, seen):
                        return True
        return False

    def iri(self, value: str) -> str:
        for prefix, ns in self.ns:
            if value.startswith(ns):
                local = value[len(ns):]
                if local == "" or _LOCAL.match(local):
                    return f"{prefix}:{local}"
        return f"<{value}>"

    def term(self, t, labels) -> str:
        if isinstance(t, IriRef):
            return self.iri(t.value)
        if isinstance(t, Literal):
            return str(t.value) if t.is_int else f'"{_escape(t.value)}"'
        if t in self.lists:
            inner = " ".join(self.term(x, labels) for x in self.lists[t])
            return f"( {inner} )"
        if t in self.inline:
            body = "; ".join(self.pred_objs(t, labels))
            return f"[ {body} ]"
        return f"_:{labels[t]}"

    def pred_objs(self, s, labels) -> list:
        grouped = defaultdict(list)
        for t in self.g.about(s):
            grouped[t.predicate].append(self.term(t.object, labels))
        preds = sorted(grouped, key=lambda p: (p != RDF_TYPE, p.value))
        out = []
        for p in preds:
            verb = "a" if p == RDF_TYPE else self.iri(p.value)
            out.append(f"{verb} {', '.join(sorted(grouped[p]))}")
        return out

    def write(self) -> str:
        lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(self.g.prefixes.items())]
        subjects = [s for s in self.g.subject_terms()
                    if not (isinstance(s, Blank) and (s in self.inline or s in self.chain_nodes))]
        iris = [s for s in subjects if isinstance(s, IriRef)]
        blanks = [s for s in subjects if isinstance(s, Blank)]
        # labelled blanks are renamed by a content signature so output is label-independent
        provisional = {b: "?" for b in self.g.blanks()}

        def signature(b):
            inc = sorted(f"{self.term(t.subject, provisional)} {self.iri(t.predicate.value)}"
                         for t in self.g.referencing(b) if not isinstance(t.subject, Blank))
            return "; ".join(self.pred_objs(b, provisional)), " ".join(inc), b.label

        # shared blanks that never appear as subjects still need a label
        named = [b for b in self.g.blanks() if b not in self.inline and b not in self.chain_nodes]
        named.sort(key=signature)
        labels = {b: f"b{k}" for k, b in enumerate(named)}
        blanks.sort(key=lambda b: labels[b])
        blocks = []
        for s in iris + blanks:
            head = self.term(s, labels) if isinstance(s, IriRef) else f"_:{labels[s]}"
            po = self.pred_objs(s, labels)
            block = [f"{head} {po[0]};"] + [f"    {x};" for x in po[1:]] + ["    ."]
            blocks.append("\n".join(block))
        text = "\n".join(lines)
        if blocks:
            text += "\n\n" + "\n\n".join(blocks)
        return text + "\n"


def serialize_turtle(graph: Graph) -> str:
    """Deterministic Turtle text for ``graph``.

    Prefixes and subjects are sorted (IRIs before blank nodes), predicates
    are grouped with ``;`` (``a`` first), objects with ``,``. Blank nodes
    referenced once are written inline as ``[ ... ]``; unshared rdf:List
    chains as ``( ... )``.
    """
    return _Writer(graph).write()
