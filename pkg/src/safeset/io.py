"""Text formats for graphs and bipartite instances.

Graph format: a header line ``n m`` followed by exactly m lines ``u v``,
one per edge, 0-indexed, u != v, each edge listed once.  Blank lines and
lines starting with ``#`` are ignored anywhere.  Bipartite instances use a
``r b m`` header followed by m lines ``i j`` meaning red vertex i is
adjacent to blue vertex j.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .graph import Graph, PathDecomposition
from .reductions import Bigraph


class FormatError(ValueError):
    """Malformed input text; the message carries a 1-based line number."""


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line))
    return out


def _ints(lineno: int, line: str, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise FormatError(f"line {lineno}: expected {count} integers, got {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"line {lineno}: expected integers, got {line!r}") from None


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("line 1: missing 'n m' header")
    lineno, header = lines[0]
    n, m = _ints(lineno, header, 2)
    if n < 0 or m < 0:
        raise FormatError(f"line {lineno}: negative counts in header")
    body = lines[1:]
    if len(body) != m:
        raise FormatError(
            f"line {lineno}: header promises {m} edges, file has {len(body)} edge lines"
        )
    edges = []
    seen = set()
    for lineno, line in body:
        u, v = _ints(lineno, line, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {lineno}: vertex out of range [0, {n})")
        if u == v:
            raise FormatError(f"line {lineno}: self-loop at {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise FormatError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for (u, v) in sorted(g.edges))
    return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def save_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


def parse_bigraph(text: str) -> Bigraph:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("line 1: missing 'r b m' header")
    lineno, header = lines[0]
    r, b, m = _ints(lineno, header, 3)
    if r < 0 or b < 0 or m < 0:
        raise FormatError(f"line {lineno}: negative counts in header")
    body = lines[1:]
    if len(body) != m:
        raise FormatError(
            f"line {lineno}: header promises {m} edges, file has {len(body)} edge lines"
        )
    edges = []
    seen = set()
    for lineno, line in body:
        i, j = _ints(lineno, line, 2)
        if not (0 <= i < r):
            raise FormatError(f"line {lineno}: red index {i} out of range [0, {r})")
        if not (0 <= j < b):
            raise FormatError(f"line {lineno}: blue index {j} out of range [0, {b})")
        if (i, j) in seen:
            raise FormatError(f"line {lineno}: duplicate pair ({i}, {j})")
        seen.add((i, j))
        edges.append((i, j))
    return Bigraph(r, b, frozenset(edges))


def format_bigraph(bg: Bigraph) -> str:
    lines = [f"{bg.r} {bg.b} {len(bg.edges)}"]
    lines.extend(f"{i} {j}" for (i, j) in sorted(bg.edges))
    return "\n".join(lines) + "\n"


def load_bigraph(path: str | Path) -> Bigraph:
    return parse_bigraph(Path(path).read_text())


def decomposition_to_json(pd: PathDecomposition) -> str:
    return json.dumps([sorted(bag) for bag in pd.bags])


def decomposition_from_json(text: str) -> PathDecomposition:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise FormatError("decomposition JSON must be a list of vertex lists")
    return PathDecomposition(data)


def vertex_set_from_text(text: str) -> frozenset[int]:
    """Parse a comma-separated vertex list such as '0,1,4,5'."""
    text = text.strip()
    if not text:
        raise FormatError("empty vertex list")
    try:
        return frozenset(int(p) for p in text.split(","))
    except ValueError:
        raise FormatError(f"bad vertex list {text!r}") from None


def write_sidecar(path: str | Path, target: int, role_map: dict, source: dict) -> None:
    payload = {
        "target": target,
        "role_map": {str(v): role for v, role in sorted(role_map.items())},
        "source": source,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def graph_iso_invariants(g: Graph) -> tuple:
    """Cheap isomorphism invariants used by tests: (n, m, degree multiset)."""
    return (g.n, g.m, tuple(sorted(len(g.neighbors(v)) for v in g.vertices())))


__all__ = [
    "FormatError",
    "parse_graph",
    "format_graph",
    "load_graph",
    "save_graph",
    "parse_bigraph",
    "format_bigraph",
    "load_bigraph",
    "decomposition_to_json",
    "decomposition_from_json",
    "vertex_set_from_text",
    "write_sidecar",
    "graph_iso_invariants",
]
