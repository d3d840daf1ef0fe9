"""Turtle-subset triple parsing and conversion of knowledge-graph events."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .model import RoleLabel, SemanticGraph, add_planned_edges

EVENT_TYPE = "sem:Event"
TYPE_PRED = "rdf:type"
SUBEVENT_PRED = "sem:subEventOf"
LABEL_PRED = "rdfs:label"

RESOURCE = "resource"
LITERAL = "literal"


class TurtleError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + location)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Term:
    kind: str  # resource | literal
    text: str  # prefixed name / IRI, or the literal's lexical form
    datatype: str | None = None
    lang: str | None = None


@dataclass
class TripleStore:
    prefixes: dict[str, str] = field(default_factory=dict)
    triples: list[tuple[Term, Term, Term]] = field(default_factory=list)


@dataclass
class _Token:
    kind: str  # "word", "iri", "string", "at", "dtype", "dot", "semi", "comma"
    value: str
    offset: int


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}
_WORD_RE = re.compile(r'[^\s;,<>"#^\[\](){}]+')
_AT_RE = re.compile(r"@[A-Za-z][A-Za-z0-9-]*")

_UNSUPPORTED = {
    "[": "blank nodes",
    "]": "blank nodes",
    "(": "collections",
    ")": "collections",
    "{": "graph blocks",
    "}": "graph blocks",
}


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    last = text.rfind("\n", 0, offset)
    return line, offset - last


def _fail(text: str, offset: int, message: str):
    line, column = _line_col(text, offset)
    raise TurtleError(message, line, column)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == "#":
            end = text.find("\n", i)
            i = n if end < 0 else end + 1
        elif c == "<":
            end = text.find(">", i)
            if end < 0:
                _fail(text, i, "unterminated IRI")
            iri = text[i + 1:end]
            if not iri:
                _fail(text, i, "empty IRI")
            tokens.append(_Token("iri", iri, i))
            i = end + 1
        elif c == '"':
            if text.startswith('"""', i):
                _fail(text, i, "unsupported construct: triple-quoted strings")
            j = i + 1
            parts = []
            while j < n and text[j] != '"':
                if text[j] == "\\":
                    if j + 1 >= n:
                        _fail(text, i, "unterminated string literal")
                    parts.append(_ESCAPES.get(text[j + 1], text[j + 1]))
                    j += 2
                else:
                    parts.append(text[j])
                    j += 1
            if j >= n:
                _fail(text, i, "unterminated string literal")
            tokens.append(_Token("string", "".join(parts), i))
            i = j + 1
        elif c == "@":
            match = _AT_RE.match(text, i)
            if not match:
                _fail(text, i, "malformed '@' token")
            tokens.append(_Token("at", match.group(0), i))
            i = match.end()
        elif c == ";":
            tokens.append(_Token("semi", ";", i))
            i += 1
        elif c == ",":
            tokens.append(_Token("comma", ",", i))
            i += 1
        elif c == ".":
            tokens.append(_Token("dot", ".", i))
            i += 1
        elif c == "^":
            if text.startswith("^^", i):
                tokens.append(_Token("dtype", "^^", i))
                i += 2
            else:
                _fail(text, i, "unexpected character '^'")
        elif c in _UNSUPPORTED:
            _fail(text, i, f"unsupported construct: {_UNSUPPORTED[c]}")
        else:
            match = _WORD_RE.match(text, i)
            word = match.group(0)
            end = match.end()
            stripped = word.rstrip(".")
            if len(word) - len(stripped) > 1:
                _fail(text, i + len(stripped) + 1, "unexpected '.'")
            if stripped:
                tokens.append(_Token("word", stripped, i))
            if stripped != word:
                tokens.append(_Token("dot", ".", i + len(stripped)))
            i = end
    return tokens


class _TurtleParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.store = TripleStore()

    def _peek(self) -> _Token | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def _next(self, expectation: str) -> _Token:
        token = self._peek()
        if token is None:
            _fail(self.text, len(self.text), f"unexpected end of input, expected {expectation}")
        self.pos += 1
        return token

    def _expect(self, kind: str, expectation: str) -> _Token:
        token = self._next(expectation)
        if token.kind != kind:
            _fail(self.text, token.offset, f"expected {expectation}, got {token.value!r}")
        return token

    def _resource(self, token: _Token) -> Term:
        if token.kind == "iri":
            return Term(RESOURCE, token.value)
        if token.kind == "word":
            if token.value.startswith("_:"):
                _fail(self.text, token.offset, "unsupported construct: blank node labels")
            if ":" not in token.value:
                _fail(self.text, token.offset,
                      f"{token.value!r} is not a prefixed name or IRI")
            prefix = token.value.split(":", 1)[0]
            if prefix not in self.store.prefixes:
                _fail(self.text, token.offset, f"unknown prefix '{prefix}:'")
            return Term(RESOURCE, token.value)
        _fail(self.text, token.offset, f"expected a resource, got {token.value!r}")

    def _object(self) -> Term:
        token = self._next("an object")
        if token.kind == "string":
            nxt = self._peek()
            if nxt is not None and nxt.kind == "at" and nxt.value != "@prefix":
                self.pos += 1
                return Term(LITERAL, token.value, lang=nxt.value[1:])
            if nxt is not None and nxt.kind == "dtype":
                self.pos += 1
                datatype = self._resource(self._next("a datatype"))
                return Term(LITERAL, token.value, datatype=datatype.text)
            return Term(LITERAL, token.value)
        return self._resource(token)

    def _verb(self) -> Term:
        token = self._next("a predicate")
        if token.kind == "word" and token.value == "a":
            return Term(RESOURCE, TYPE_PRED)
        return self._resource(token)

    def _prefix_directive(self):
        name = self._next("a prefix name")
        if name.kind != "word" or not name.value.endswith(":") or name.value.count(":") != 1:
            _fail(self.text, name.offset, "expected a prefix name like 'ex:'")
        iri = self._expect("iri", "an IRI")
        self._expect("dot", "'.'")
        self.store.prefixes[name.value[:-1]] = iri.value

    def _triples_block(self):
        subject = self._resource(self._next("a subject"))
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                self.store.triples.append((subject, predicate, obj))
                token = self._next("',', ';' or '.'")
                if token.kind == "comma":
                    continue
                break
            if token.kind == "semi":
                nxt = self._peek()
                if nxt is not None and nxt.kind == "dot":  # trailing ';' before '.'
                    self.pos += 1
                    return
                continue
            if token.kind == "dot":
                return
            _fail(self.text, token.offset, f"expected ',', ';' or '.', got {token.value!r}")

    def parse(self) -> TripleStore:
        while True:
            token = self._peek()
            if token is None:
                return self.store
            if token.kind == "at":
                if token.value != "@prefix":
                    _fail(self.text, token.offset, f"unknown directive '{token.value}'")
                self.pos += 1
                self._prefix_directive()
            else:
                self._triples_block()


def parse_turtle(text: str) -> TripleStore:
    """Parse the supported Turtle subset into a prefix map plus ordered triples.

    Supported: @prefix directives, prefixed names, <IRI> references, the `a`
    keyword (stored as rdf:type), string literals with optional @lang or
    ^^datatype, ';' predicate lists, ',' object lists and '#' comments.
    Blank nodes and collections raise an "unsupported construct" error.
    Prefixed names are kept as written, not expanded.
    """
    return _TurtleParser(text).parse()


def _leaf_edge(graph: SemanticGraph, pred_node: str, obj: Term) -> tuple[str, RoleLabel, str]:
    if obj.kind == RESOURCE:
        return (pred_node, RoleLabel("id"), graph.add_entity(obj.text))
    return (pred_node, RoleLabel("value"), graph.add_entity(obj.text))


def events_to_graph(store: TripleStore) -> SemanticGraph:
    """Build a semantic graph from event data following the triple rules.

    Every resource typed sem:Event becomes a "sem:Event" concept carrying:
    an `id` role to an entity holding the resource's name; one `rdfs:label`
    role per label literal (indexed when there are several); `subEvent[1..k]`
    roles, in document order, to the concepts of typed events that declare
    sem:subEventOf pointing at it (the direction is inverted so the
    encompassing event owns its children); and, for every remaining triple, a
    role named after the predicate leading to a fresh predicate concept whose
    `id` (resource object) or `value` (literal object) role holds the object.
    Triples whose subject is not a typed event yield the same detached
    predicate-concept/leaf pairs, so no triple is dropped.
    """
    triples = store.triples
    graph = SemanticGraph()
    events: dict[str, str] = {}
    for s, p, o in triples:
        if (p.text == TYPE_PRED and o.kind == RESOURCE and o.text == EVENT_TYPE
                and s.text not in events):
            events[s.text] = graph.add_concept(EVENT_TYPE)
    consumed: set[int] = set()
    labels: dict[str, list[int]] = {name: [] for name in events}
    children: dict[str, list[int]] = {name: [] for name in events}
    for i, (s, p, o) in enumerate(triples):
        if s.text in events and p.text == TYPE_PRED and o.kind == RESOURCE \
                and o.text == EVENT_TYPE:
            consumed.add(i)
        elif s.text in events and p.text == LABEL_PRED and o.kind == LITERAL:
            labels[s.text].append(i)
            consumed.add(i)
        elif p.text == SUBEVENT_PRED and s.text in events and o.kind == RESOURCE \
                and o.text in events:
            children[o.text].append(i)
            consumed.add(i)
    for event, event_node in events.items():
        planned = [(event_node, RoleLabel("id"), graph.add_entity(event))]
        label_triples = labels[event]
        for position, i in enumerate(label_triples, start=1):
            index = None if len(label_triples) == 1 else position
            planned.append((event_node, RoleLabel(LABEL_PRED, index),
                            graph.add_entity(triples[i][2].text)))
        for position, i in enumerate(children[event], start=1):
            planned.append((event_node, RoleLabel("subEvent", position),
                            events[triples[i][0].text]))
        own = [i for i, (s, _, _) in enumerate(triples)
               if s.text == event and i not in consumed]
        per_predicate = Counter(triples[i][1].text for i in own)
        seen: Counter = Counter()
        for i in own:
            _, p, o = triples[i]
            pred_node = graph.add_concept(p.text)
            if per_predicate[p.text] > 1:
                seen[p.text] += 1
                attach = RoleLabel(p.text, seen[p.text])
            else:
                attach = RoleLabel(p.text)
            planned.append((event_node, attach, pred_node))
            planned.append(_leaf_edge(graph, pred_node, o))
            consumed.add(i)
        add_planned_edges(graph, planned)
    island_plan = []
    for i, (s, p, o) in enumerate(triples):
        if i in consumed:
            continue
        pred_node = graph.add_concept(p.text)
        island_plan.append(_leaf_edge(graph, pred_node, o))
    add_planned_edges(graph, island_plan)
    return graph


def top_level_events(store: TripleStore) -> list[str]:
    """Typed events that are not declared sub-events of another typed event."""
    typed = set()
    ordered = []
    for s, p, o in store.triples:
        if p.text == TYPE_PRED and o.kind == RESOURCE and o.text == EVENT_TYPE \
                and s.text not in typed:
            typed.add(s.text)
            ordered.append(s.text)
    nested = {s.text for s, p, o in store.triples
              if p.text == SUBEVENT_PRED and s.text in typed
              and o.kind == RESOURCE and o.text in typed}
    return [name for name in ordered if name not in nested]


def split_events(store: TripleStore) -> list[TripleStore]:
    """One store per top-level event, holding the triples of the event and its
    transitive sub-events. Triples of subjects outside every event tree drop."""
    typed = {s.text for s, p, o in store.triples
             if p.text == TYPE_PRED and o.kind == RESOURCE and o.text == EVENT_TYPE}
    children: dict[str, list[str]] = {}
    for s, p, o in store.triples:
        if p.text == SUBEVENT_PRED and s.text in typed and o.kind == RESOURCE \
                and o.text in typed:
            children.setdefault(o.text, []).append(s.text)
    stores = []
    for top in top_level_events(store):
        closure = {top}
        queue = [top]
        while queue:
            for child in children.get(queue.pop(0), []):
                if child not in closure:
                    closure.add(child)
                    queue.append(child)
        triples = [t for t in store.triples if t[0].text in closure]
        stores.append(TripleStore(dict(store.prefixes), triples))
    return stores
