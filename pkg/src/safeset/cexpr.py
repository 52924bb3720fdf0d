"""Construction trees for labeled graphs.

A tree of the four primitives below builds a graph bottom-up: create a
labeled vertex, lay two graphs side by side, rename one label to another,
or connect every vertex of one label with every vertex of another.  Dense
but regular graphs (cliques, cographs, cycles) have small trees of this
kind, and the solver in cw.py runs over the tree instead of the graph.

Text format: s-expressions ``(v i)``, ``(u A B)``, ``(r i j A)`` renaming
label i to j, and ``(e i j A)`` connecting labels i and j, with an optional
header line ``c <int>`` declaring the number of available labels.  ``#``
starts a comment; whitespace is free-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .graph import Graph, InputError
from .io import FormatError

# Node classes compare by identity: the same subexpression written twice
# denotes two different parts of the built graph.


@dataclass(frozen=True, eq=False)
class Leaf:
    """Creates one vertex carrying ``label``."""

    label: int
    pos: tuple[int, int] | None = None


@dataclass(frozen=True, eq=False)
class DisjointUnion:
    """Places the two child graphs side by side, adding no edges."""

    left: "Node"
    right: "Node"
    pos: tuple[int, int] | None = None


@dataclass(frozen=True, eq=False)
class Relabel:
    """Turns every ``source``-labeled vertex of the child into ``target``."""

    source: int
    target: int
    child: "Node"
    pos: tuple[int, int] | None = None


@dataclass(frozen=True, eq=False)
class Join:
    """Adds all edges between ``first``- and ``second``-labeled vertices."""

    first: int
    second: int
    child: "Node"
    pos: tuple[int, int] | None = None


Node = Union[Leaf, DisjointUnion, Relabel, Join]


@dataclass(frozen=True, eq=False)
class CExpression:
    """A construction tree together with its label budget."""

    root: Node
    label_count: int


def iter_nodes(node: Node) -> Iterator[Node]:
    """Post-order walk; children are yielded before their parent."""
    if isinstance(node, DisjointUnion):
        yield from iter_nodes(node.left)
        yield from iter_nodes(node.right)
    elif isinstance(node, (Relabel, Join)):
        yield from iter_nodes(node.child)
    yield node


def leaf_count(node: Node) -> int:
    return sum(1 for x in iter_nodes(node) if isinstance(x, Leaf))


def leaf_spans(expr: CExpression) -> dict[Node, tuple[int, int]]:
    """Vertex id range [start, end) owned by each node, leftmost leaf = 0."""
    spans: dict[Node, tuple[int, int]] = {}

    def walk(node: Node, base: int) -> int:
        if isinstance(node, Leaf):
            spans[node] = (base, base + 1)
            return base + 1
        if isinstance(node, DisjointUnion):
            mid = walk(node.left, base)
            end = walk(node.right, mid)
        else:
            end = walk(node.child, base)
        spans[node] = (base, end)
        return end

    walk(expr.root, 0)
    return spans


def check_expression(expr: CExpression) -> None:
    """Validate label ranges and operator shape; raises InputError."""
    if expr.label_count < 1:
        raise InputError("label count must be at least 1")
    for node in iter_nodes(expr.root):
        if isinstance(node, Leaf):
            used = (node.label,)
        elif isinstance(node, Relabel):
            if node.source == node.target:
                raise InputError("relabel needs two distinct labels")
            used = (node.source, node.target)
        elif isinstance(node, Join):
            if node.first == node.second:
                raise InputError("join needs two distinct labels")
            used = (node.first, node.second)
        else:
            used = ()
        for lab in used:
            if not (1 <= lab <= expr.label_count):
                raise InputError(
                    f"label {lab} outside the declared range 1..{expr.label_count}"
                )


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        while col < len(line):
            ch = line[col]
            if ch.isspace():
                col += 1
            elif ch in "()":
                tokens.append((ch, lineno, col + 1))
                col += 1
            else:
                start = col
                while col < len(line) and not line[col].isspace() and line[col] not in "()":
                    col += 1
                tokens.append((line[start:col], lineno, start + 1))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[tuple[str, int, int]]):
        self.tokens = tokens
        self.idx = 0

    def peek(self) -> tuple[str, int, int] | None:
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def next(self, expect: str | None = None) -> tuple[str, int, int]:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", 1, 1)
            raise FormatError(f"line {last[1]}, col {last[2]}: unexpected end of input")
        self.idx += 1
        if expect is not None and tok[0] != expect:
            raise FormatError(
                f"line {tok[1]}, col {tok[2]}: expected {expect!r}, got {tok[0]!r}"
            )
        return tok

    def next_int(self, what: str) -> tuple[int, int, int]:
        tok = self.next()
        try:
            value = int(tok[0])
        except ValueError:
            raise FormatError(
                f"line {tok[1]}, col {tok[2]}: expected {what}, got {tok[0]!r}"
            ) from None
        return value, tok[1], tok[2]


def _parse_label(stream: _TokenStream) -> tuple[int, int, int]:
    value, line, col = stream.next_int("a label")
    if value < 1:
        raise FormatError(f"line {line}, col {col}: labels are positive, got {value}")
    return value, line, col


def _parse_node(stream: _TokenStream) -> Node:
    op_tok = stream.next("(")
    head = stream.next()
    kind, line, col = head
    pos = (line, col)
    if kind == "v":
        label, _, _ = _parse_label(stream)
        node: Node = Leaf(label, pos)
    elif kind == "u":
        left = _parse_node(stream)
        right = _parse_node(stream)
        node = DisjointUnion(left, right, pos)
    elif kind in ("r", "e"):
        i, iline, icol = _parse_label(stream)
        j, _, _ = _parse_label(stream)
        if i == j:
            raise FormatError(
                f"line {iline}, col {icol}: '{kind}' needs two distinct labels"
            )
        child = _parse_node(stream)
        node = Relabel(i, j, child, pos) if kind == "r" else Join(i, j, child, pos)
    else:
        raise FormatError(
            f"line {line}, col {col}: unknown operator {kind!r} (expected v, u, r, e)"
        )
    stream.next(")")
    return node


def _labels_used(node: Node) -> int:
    top = 1
    for x in iter_nodes(node):
        if isinstance(x, Leaf):
            top = max(top, x.label)
        elif isinstance(x, Relabel):
            top = max(top, x.source, x.target)
        elif isinstance(x, Join):
            top = max(top, x.first, x.second)
    return top


def parse_cexpression(text: str) -> CExpression:
    """Parse the s-expression format; see the module docstring.

    Without a ``c`` header the label budget is the largest label mentioned.
    """
    stream = _TokenStream(_tokenize(text))
    if not stream.tokens:
        raise FormatError("line 1, col 1: empty input")
    declared: int | None = None
    first = stream.peek()
    if first is not None and first[0] == "c":
        stream.next()
        declared, line, col = stream.next_int("the label count")
        if declared < 1:
            raise FormatError(f"line {line}, col {col}: label count must be positive")
    root = _parse_node(stream)
    trailing = stream.peek()
    if trailing is not None:
        raise FormatError(
            f"line {trailing[1]}, col {trailing[2]}: trailing input after the expression"
        )
    top = _labels_used(root)
    if declared is not None and top > declared:
        raise FormatError(f"label {top} exceeds the declared count {declared}")
    return CExpression(root, declared if declared is not None else top)


def format_cexpression(expr: CExpression) -> str:
    """Canonical one-line rendering with a ``c`` header; round-trips."""

    def render(node: Node) -> str:
        if isinstance(node, Leaf):
            return f"(v {node.label})"
        if isinstance(node, DisjointUnion):
            return f"(u {render(node.left)} {render(node.right)})"
        if isinstance(node, Relabel):
            return f"(r {node.source} {node.target} {render(node.child)})"
        return f"(e {node.first} {node.second} {render(node.child)})"

    return f"c {expr.label_count}\n{render(expr.root)}\n"


# ---------------------------------------------------------------------------
# evaluation


def _evaluate(node: Node, edges: set[tuple[int, int]], base: int) -> list[int]:
    """Labels of the subtree's vertices; vertex base+k gets entry k."""
    if isinstance(node, Leaf):
        return [node.label]
    if isinstance(node, DisjointUnion):
        left = _evaluate(node.left, edges, base)
        right = _evaluate(node.right, edges, base + len(left))
        return left + right
    labels = _evaluate(node.child, edges, base)
    if isinstance(node, Relabel):
        return [node.target if lab == node.source else lab for lab in labels]
    for k, lab in enumerate(labels):
        if lab != node.first:
            continue
        u = base + k
        for k2, lab2 in enumerate(labels):
            if lab2 == node.second:
                v = base + k2
                edges.add((u, v) if u < v else (v, u))
    return labels


def eval_graph(expr: CExpression) -> tuple[Graph, list[int]]:
    """Build the graph the expression describes.

    Vertices are numbered by leaf position, leftmost leaf first; the second
    component is the final label of each vertex.
    """
    edges: set[tuple[int, int]] = set()
    labels = _evaluate(expr.root, edges, 0)
    return Graph(len(labels), sorted(edges)), labels


def validate_irredundant(expr: CExpression) -> Join | None:
    """Check that no join re-adds an edge an earlier join already created.

    Returns the first offending join in evaluation order, or None when
    every edge of the built graph is introduced exactly once.
    """
    edges: set[tuple[int, int]] = set()

    def walk(node: Node, base: int) -> tuple[list[int], Join | None]:
        if isinstance(node, Leaf):
            return [node.label], None
        if isinstance(node, DisjointUnion):
            left, bad = walk(node.left, base)
            if bad is not None:
                return [], bad
            right, bad = walk(node.right, base + len(left))
            return left + right, bad
        labels, bad = walk(node.child, base)
        if bad is not None:
            return [], bad
        if isinstance(node, Relabel):
            return [node.target if lab == node.source else lab for lab in labels], None
        for k, lab in enumerate(labels):
            if lab != node.first:
                continue
            u = base + k
            for k2, lab2 in enumerate(labels):
                if lab2 == node.second:
                    v = base + k2
                    e = (u, v) if u < v else (v, u)
                    if e in edges:
                        return labels, node
                    edges.add(e)
        return labels, None

    _, bad = walk(expr.root, 0)
    return bad


def cycle_expression(n: int) -> CExpression:
    """A four-label construction tree for the n-cycle, n >= 3.

    Grows a path whose endpoints keep labels 1 and 2 while interior
    vertices are parked on label 3, then closes the cycle.  Handy as a
    bounded-width input family for the tree-based solver.
    """
    if n < 3:
        raise InputError("cycles need at least 3 vertices")
    node: Node = Join(1, 2, DisjointUnion(Leaf(1), Leaf(2)))
    for _ in range(n - 2):
        grown = Join(2, 4, DisjointUnion(node, Leaf(4)))
        node = Relabel(4, 2, Relabel(2, 3, grown))
    return CExpression(Join(1, 2, node), 4)
