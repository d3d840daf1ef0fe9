"""PENMAN notation parsing and conversion of AMR/UMR structures to semantic graphs."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import RoleLabel, SemanticGraph, add_planned_edges

NODE = "node"
REF = "ref"
CONST = "const"


class PenmanError(Exception):
    """Parse failure; ``offset`` is a character position in the input text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.reason = message
        self.offset = offset


class UmrError(Exception):
    """Document-level conversion failure."""


@dataclass
class Slot:
    """One role filling in surface order.

    ``kind`` is "node" for an inline definition, "ref" for a variable
    reference, or "const" for a constant; ``value`` holds the variable name
    or the constant token.
    """

    owner: str
    role: str
    kind: str
    value: str


@dataclass
class PenmanTree:
    root: str
    concepts: dict[str, str]  # variable -> concept label, in definition order
    slots: list[Slot]

    def variables(self) -> list[str]:
        return list(self.concepts)

    def constants(self) -> list[str]:
        return [slot.value for slot in self.slots if slot.kind == CONST]


@dataclass
class DocRelation:
    source: str
    relation: str
    target: str


@dataclass
class UmrDocument:
    sentences: list[PenmanTree]
    relations: list[DocRelation]


@dataclass
class _Token:
    kind: str  # "(", ")", "/", "role", "string", "token"
    value: str
    offset: int


_TOKEN_RE = re.compile(r'"(?:[^"\\]|\\.)*"|[()/]|[^\s()/"]+')
_UNESCAPE_RE = re.compile(r"\\(.)")


def _comment_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    offset = 0
    for line in text.splitlines(keepends=True):
        if line.lstrip().startswith("#"):
            spans.append((offset, offset + len(line)))
        offset += len(line)
    return spans


def _tokenize(text: str) -> list[_Token]:
    comment = _comment_spans(text)
    covered = list(comment)
    tokens: list[_Token] = []
    for match in _TOKEN_RE.finditer(text):
        start = match.start()
        covered.append((start, match.end()))
        if any(a <= start < b for a, b in comment):
            continue
        value = match.group(0)
        if value.startswith('"'):
            inner = _UNESCAPE_RE.sub(r"\1", value[1:-1])
            if not inner:
                raise PenmanError("empty string constant", start)
            tokens.append(_Token("string", inner, start))
        elif value in "()/":
            tokens.append(_Token(value, value, start))
        elif value.startswith(":"):
            name = value[1:].split("~", 1)[0]
            if not name:
                raise PenmanError("role token ':' has no name", start)
            tokens.append(_Token("role", name, start))
        elif value.startswith("~"):
            continue  # alignment marker, ignored
        else:
            bare = value.split("~", 1)[0]
            if bare:
                tokens.append(_Token("token", bare, start))
    # Anything not matched and not commented out can only be a stray quote.
    position = 0
    for start, end in sorted(covered):
        gap = text[position:start]
        if gap.strip():
            bad = position + len(gap) - len(gap.lstrip())
            raise PenmanError(f"unexpected character {text[bad]!r}", bad)
        position = max(position, end)
    if text[position:].strip():
        tail = text[position:]
        bad = position + len(tail) - len(tail.lstrip())
        raise PenmanError(f"unexpected character {text[bad]!r}", bad)
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token], end: int):
        self._tokens = tokens
        self._pos = 0
        self.end = end

    def peek(self) -> _Token | None:
        if self._pos < len(self._tokens):
            return self._tokens[self._pos]
        return None

    def next(self) -> _Token:
        token = self.peek()
        if token is None:
            raise PenmanError("unexpected end of input", self.end)
        self._pos += 1
        return token


def _parse_node(stream: _TokenStream, concepts: dict[str, str], slots: list[Slot]) -> str:
    opening = stream.next()
    if opening.kind != "(":
        raise PenmanError("expected '('", opening.offset)
    var_token = stream.next()
    if var_token.kind != "token":
        raise PenmanError("expected a variable name", var_token.offset)
    var = var_token.value
    slash = stream.next()
    if slash.kind != "/":
        raise PenmanError(f"expected '/' after variable '{var}'", slash.offset)
    concept_token = stream.next()
    if concept_token.kind != "token":
        raise PenmanError("expected a concept label", concept_token.offset)
    if var in concepts:
        raise PenmanError(f"variable '{var}' defined twice", var_token.offset)
    concepts[var] = concept_token.value
    while True:
        token = stream.peek()
        if token is None:
            raise PenmanError("unbalanced parentheses: missing ')'", stream.end)
        if token.kind == ")":
            stream.next()
            return var
        if token.kind != "role":
            raise PenmanError("expected a role or ')'", token.offset)
        stream.next()
        role = token.value
        value = stream.peek()
        if value is None or value.kind in ("role", ")"):
            offset = value.offset if value is not None else stream.end
            raise PenmanError(f"role ':{role}' has no value", offset)
        if value.kind == "(":
            slot = Slot(var, role, NODE, "")
            slots.append(slot)
            slot.value = _parse_node(stream, concepts, slots)
        elif value.kind == "string":
            stream.next()
            slots.append(Slot(var, role, CONST, value.value))
        elif value.kind == "token":
            stream.next()
            slots.append(Slot(var, role, REF, value.value))  # resolved below
        else:
            raise PenmanError("unexpected '/'", value.offset)


def parse_penman(text: str) -> PenmanTree:
    """Parse one PENMAN expression.

    Slots keep surface order; quoted constants lose their quotes; a bare token
    is a variable reference when the variable is defined anywhere in the
    expression (forward references included) and a constant otherwise.
    Alignment markers (``~e.N``) and ``#`` comment lines are ignored.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PenmanError("empty input", 0)
    stream = _TokenStream(tokens, len(text))
    concepts: dict[str, str] = {}
    slots: list[Slot] = []
    root = _parse_node(stream, concepts, slots)
    trailing = stream.peek()
    if trailing is not None:
        raise PenmanError("unexpected trailing content", trailing.offset)
    for slot in slots:
        if slot.kind == REF and slot.value not in concepts:
            slot.kind = CONST
    return PenmanTree(root, concepts, slots)


def _blocks(text: str) -> list[tuple[str, int]]:
    blocks = []
    offset = 0
    start = None
    for line in text.splitlines(keepends=True):
        if line.strip():
            if start is None:
                start = offset
        elif start is not None:
            blocks.append((text[start:offset], start))
            start = None
        offset += len(line)
    if start is not None:
        blocks.append((text[start:], start))
    return blocks


def _parse_block(block: str, base: int) -> PenmanTree:
    try:
        return parse_penman(block)
    except PenmanError as exc:
        raise PenmanError(exc.reason, exc.offset + base) from None


def parse_penman_file(text: str) -> list[PenmanTree]:
    """Parse a file of blank-line-separated PENMAN expressions."""
    trees = []
    for block, base in _blocks(text):
        if not _tokenize(block):
            continue  # comment-only block
        trees.append(_parse_block(block, base))
    return trees


_DOC_RELATION_RE = re.compile(r"\(\s*(\S+)\s+(\S+)\s+(\S+)\s*\)\Z")


def parse_umr_document(text: str) -> UmrDocument:
    """Parse sentence expressions plus ``# doc`` blocks of (source rel target) lines."""
    sentences: list[PenmanTree] = []
    relations: list[DocRelation] = []
    for block, base in _blocks(text):
        lines = block.splitlines(keepends=True)
        first = next((line for line in lines if line.strip()), "")
        if first.strip() == "# doc":
            offset = base
            for line in lines:
                stripped = line.strip()
                if stripped and not stripped.startswith("#"):
                    match = _DOC_RELATION_RE.match(stripped)
                    if not match:
                        raise PenmanError("malformed document-level relation", offset)
                    relations.append(DocRelation(*match.groups()))
                offset += len(line)
        else:
            if not _tokenize(block):
                continue
            sentences.append(_parse_block(block, base))
    return UmrDocument(sentences, relations)


def _plan_slot_edge(planned: list, source: str, role: str, target: str,
                    target_is_concept: bool) -> None:
    # X-of roles flip to a forward X edge, but only onto concept targets:
    # an entity may never become an edge source.
    if role.endswith("-of") and len(role) > 3 and target_is_concept:
        planned.append((target, RoleLabel(role[:-3]), source))
    else:
        planned.append((source, RoleLabel(role), target))


def amr_to_graph(tree: PenmanTree) -> SemanticGraph:
    """Convert a parsed AMR tree.

    Each variable becomes a concept node named by its concept label (created
    in definition order), each constant occurrence becomes its own leaf
    entity, and each slot becomes a role edge; variable references connect to
    the already-created node. No variables survive in the output.
    """
    graph = SemanticGraph()
    var_node = {var: graph.add_concept(label) for var, label in tree.concepts.items()}
    planned: list[tuple[str, RoleLabel, str]] = []
    for slot in tree.slots:
        source = var_node[slot.owner]
        if slot.kind == CONST:
            _plan_slot_edge(planned, source, slot.role, graph.add_entity(slot.value), False)
        else:
            _plan_slot_edge(planned, source, slot.role, var_node[slot.value], True)
    add_planned_edges(graph, planned)
    return graph


def umr_to_graph(document: UmrDocument) -> SemanticGraph:
    """Convert a UMR document into one combined semantic graph.

    Sentences convert as AMR and are combined by disjoint union, with two
    document-level twists: a constant that acts as the source of any
    document-level relation is promoted to a single concept node named by its
    token (so it may carry outgoing edges), and every document-level relation
    (x, rel, y) -- temporal, modal or coreference -- is added as an x -rel-> y
    edge between the corresponding nodes, never by unifying them.
    """
    var_defined: set[str] = set()
    for tree in document.sentences:
        for var in tree.concepts:
            if var in var_defined:
                raise UmrError(f"variable '{var}' is defined in more than one sentence")
            var_defined.add(var)
    const_tokens = {slot.value for tree in document.sentences
                    for slot in tree.slots if slot.kind == CONST}
    promoted: set[str] = set()
    for relation in document.relations:
        if relation.source not in var_defined:
            if relation.source in const_tokens:
                promoted.add(relation.source)
            else:
                raise UmrError(f"document-level source '{relation.source}'"
                               " does not occur in any sentence")
        if relation.target not in var_defined and relation.target not in const_tokens:
            raise UmrError(f"document-level target '{relation.target}'"
                           " does not occur in any sentence")
    graph = SemanticGraph()
    var_node: dict[str, str] = {}
    promoted_node: dict[str, str] = {}
    const_entity: dict[str, str] = {}
    planned: list[tuple[str, RoleLabel, str]] = []
    for tree in document.sentences:
        for var, label in tree.concepts.items():
            var_node[var] = graph.add_concept(label)
        for slot in tree.slots:
            source = var_node[slot.owner]
            if slot.kind == CONST:
                token = slot.value
                if token in promoted:
                    node = promoted_node.get(token)
                    if node is None:
                        node = promoted_node[token] = graph.add_concept(token)
                    _plan_slot_edge(planned, source, slot.role, node, True)
                else:
                    node = graph.add_entity(token)
                    const_entity.setdefault(token, node)
                    _plan_slot_edge(planned, source, slot.role, node, False)
            else:
                _plan_slot_edge(planned, source, slot.role, var_node[slot.value], True)
    for relation in document.relations:
        source = var_node.get(relation.source, promoted_node.get(relation.source))
        target = var_node.get(relation.target)
        if target is None:
            target = promoted_node.get(relation.target, const_entity.get(relation.target))
        planned.append((source, RoleLabel(relation.relation), target))
    add_planned_edges(graph, planned)
    return graph
