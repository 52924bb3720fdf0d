"""Instance generators that embed domination problems into safe-set instances.

Two constructions are provided:

* ``ds_to_ss``: given (g, k), build a graph that has a connected safe set of
  a computed target size whenever g has a dominating set of size k.  The
  output has small pathwidth (at most 2k + 4) witnessed by an explicit path
  decomposition.

* ``rbds_to_ss``: given a bipartite red/blue instance and k, build a graph
  whose minimum safe set size is at most k + r + 1 exactly when k blue
  vertices dominate all red ones.  The output has small vertex cover number.

Both emit a per-vertex role map so the constructions can be audited and so
certificates can be reconstructed from the artifact alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import (
    Graph,
    InputError,
    PathDecomposition,
    check_vertex_set,
    is_connected_safe_set,
    neighbors_closed,
)


@dataclass(frozen=True)
class Bigraph:
    """Bipartite instance: red vertices [0, r), blue vertices [0, b),
    edges as (red index, blue index) pairs."""

    r: int
    b: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.r < 0 or self.b < 0:
            raise InputError("negative part sizes")
        for (i, j) in self.edges:
            if not (0 <= i < self.r and 0 <= j < self.b):
                raise InputError(f"bigraph edge ({i}, {j}) out of range")

    def blues_of(self, red: int) -> frozenset[int]:
        return frozenset(j for (i, j) in self.edges if i == red)


@dataclass
class ReductionOutput:
    """A generated instance: the graph, the safe-set size target, a
    per-vertex role map, and the source instance it was built from."""

    graph: Graph
    target: int
    role_map: dict[int, dict] = field(repr=False)
    source: dict = field(repr=False)


def rbds_has_dominating_set(bg: Bigraph, k: int) -> frozenset[int] | None:
    """Smallest blue set dominating all reds, if one of size <= k exists."""
    if k < 0:
        raise InputError("k must be nonnegative")
    reds = [bg.blues_of(i) for i in range(bg.r)]
    if not reds:
        return frozenset()
    for size in range(1, min(k, bg.b) + 1):
        for combo in itertools.combinations(range(bg.b), size):
            chosen = frozenset(combo)
            if all(r & chosen for r in reds):
                return chosen
    return None


# --------------------------------------------------------------------------
# dominating set -> connected safe set
# --------------------------------------------------------------------------


def ds_target(g: Graph, k: int) -> int:
    """Size target of the dominating-set construction."""
    return 1 + k * g.n + sum(k * (len(g.neighbors(v)) + 1) for v in g.vertices())


def ds_to_ss(g: Graph, k: int) -> ReductionOutput:
    """Build the safe-set instance for 'does g have a dominating set of size k'.

    The construction uses k long cycles (one per selected vertex), each split
    into n blocks of n positions; heavy guard sets pin the first position of
    every block; one gadget per column checks that the column's vertex is
    dominated; a universal vertex glues everything together.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if g.n < 2:
        raise InputError("base graph needs at least 2 vertices")
    n = g.n
    kp = ds_target(g, k)
    nsq = n * n
    guard_count = kp - n + 1

    role_map: dict[int, dict] = {}
    counter = 0

    def fresh(role: dict) -> int:
        nonlocal counter
        vid = counter
        counter += 1
        role_map[vid] = role
        return vid

    line_v: dict[tuple[int, int], int] = {}
    for j in range(k):
        for p in range(nsq):
            line_v[(j, p)] = fresh({"role": "line", "line": j, "pos": p})

    guards: dict[tuple[int, int], list[int]] = {}
    for j in range(k):
        for b in range(n):
            guards[(j, b)] = [
                fresh({"role": "guard", "line": j, "block": b, "idx": t})
                for t in range(guard_count)
            ]

    members: dict[int, list[int]] = {b: sorted(neighbors_closed(g, b)) for b in range(n)}
    center: dict[int, int] = {}
    center_pads: dict[int, list[int]] = {}
    choice: dict[tuple[int, int, int], int] = {}
    choice_pads: dict[tuple[int, int, int], list[int]] = {}
    release: dict[tuple[int, int, int], int] = {}
    for b in range(n):
        deg1 = len(members[b])
        center[b] = fresh({"role": "center", "column": b})
        center_pads[b] = [
            fresh({"role": "center_pad", "column": b, "idx": t})
            for t in range(kp - k * deg1)
        ]
        for j in range(k):
            for w in members[b]:
                choice[(b, j, w)] = fresh(
                    {"role": "choice", "column": b, "line": j, "member": w}
                )
                choice_pads[(b, j, w)] = [
                    fresh({"role": "choice_pad", "column": b, "line": j, "member": w, "idx": t})
                    for t in range(kp - 1)
                ]
                release[(b, j, w)] = fresh(
                    {"role": "release", "column": b, "line": j, "member": w}
                )
    universal = fresh({"role": "universal"})

    edges: list[tuple[int, int]] = []
    for j in range(k):
        for p in range(nsq):
            edges.append((line_v[(j, p)], line_v[(j, (p + 1) % nsq)]))
    for (j, b), gs in guards.items():
        anchor = line_v[(j, b * n)]
        edges.extend((gv, anchor) for gv in gs)
    for b in range(n):
        edges.extend((center[b], w) for w in center_pads[b])
        for j in range(k):
            for w in members[b]:
                x = choice[(b, j, w)]
                edges.extend((x, q) for q in choice_pads[(b, j, w)])
                edges.append((x, release[(b, j, w)]))
                edges.append((center[b], release[(b, j, w)]))
                edges.append((x, line_v[(j, b * n + w)]))
    edges.extend((universal, v) for v in range(universal))

    graph = Graph(counter, edges)
    source = {"kind": "ds", "n": n, "edges": sorted(map(list, g.edges)), "k": k}
    return ReductionOutput(graph, kp, role_map, source)


def _ds_lookup(output: ReductionOutput):
    """Rebuild id lookups from the role map (also exercises its completeness)."""
    line_v, guards, center, cpads, choice, cpads_x, release = {}, {}, {}, {}, {}, {}, {}
    universal = None
    for vid, role in output.role_map.items():
        r = role["role"]
        if r == "line":
            line_v[(role["line"], role["pos"])] = vid
        elif r == "guard":
            guards.setdefault((role["line"], role["block"]), []).append(vid)
        elif r == "center":
            center[role["column"]] = vid
        elif r == "center_pad":
            cpads.setdefault(role["column"], []).append(vid)
        elif r == "choice":
            choice[(role["column"], role["line"], role["member"])] = vid
        elif r == "choice_pad":
            cpads_x.setdefault((role["column"], role["line"], role["member"]), []).append(vid)
        elif r == "release":
            release[(role["column"], role["line"], role["member"])] = vid
        elif r == "universal":
            universal = vid
        else:
            raise InputError(f"unknown role {r!r}")
    return line_v, guards, center, cpads, choice, cpads_x, release, universal


def ds_forward_certificate(g: Graph, K, output: ReductionOutput) -> frozenset[int]:
    """Connected safe set of the target size from a dominating set of g.

    K may have fewer than k vertices; it is padded to exactly k with the
    smallest unused ids (a superset of a dominating set still dominates),
    since the construction needs one selected vertex per line.
    """
    k = output.source["k"]
    n = output.source["n"]
    K = set(check_vertex_set(g, K, "dominating set"))
    for v in g.vertices():
        if not (neighbors_closed(g, v) & K):
            raise InputError(f"K does not dominate vertex {v}")
    if len(K) > k:
        raise InputError(f"|K|={len(K)} exceeds k={k}")
    pad = (v for v in g.vertices() if v not in K)
    while len(K) < k:
        nxt = next(pad, None)
        if nxt is None:
            raise InputError("cannot pad K to size k: k exceeds the vertex count")
        K.add(nxt)

    line_v, _, _, _, choice, _, release, universal = _ds_lookup(output)
    members = sorted(K)
    line_of = {w: j for j, w in enumerate(members)}
    s: set[int] = {universal}
    for j, w in enumerate(members):
        for t in range(n):
            s.add(line_v[(j, w + t * n)])
    for b in range(n):
        closed = sorted(neighbors_closed(g, b))
        w_star = min(v for v in closed if v in K)
        j_star = line_of[w_star]
        for j in range(k):
            for w in closed:
                if j == j_star and w == w_star:
                    continue
                s.add(choice[(b, j, w)])
        s.add(release[(b, j_star, w_star)])
    assert len(s) == output.target, (len(s), output.target)
    return frozenset(s)


def ds_path_decomposition(output: ReductionOutput) -> PathDecomposition:
    """Explicit path decomposition of the generated graph, bags of size <= 2k+5.

    Per block: walk the k line paths one at a time (bags of size <= k+1),
    add the block's gadget center to every internal bag, and hang each leaf
    (guards, center pads, choice pads, releases) and each choice vertex off
    a duplicated bag containing its neighbor.  Blocks are glued on shared
    boundary bags; finally the universal vertex and the k line starts join
    every bag.
    """
    k = output.source["k"]
    n = output.source["n"]
    line_v, guards, center, cpads, choice, cpads_x, release, universal = _ds_lookup(output)
    base_edges = [tuple(e) for e in output.source["edges"]]
    base = Graph(n, base_edges)

    all_bags: list[frozenset[int]] = []
    for b in range(n):
        paths = []
        for j in range(k):
            p = [line_v[(j, q)] for q in range(b * n, b * n + n)]
            if b < n - 1:
                p.append(line_v[(j, (b + 1) * n)])
            paths.append(p)
        starts = [paths[j][0] for j in range(k)]
        walk: list[frozenset[int]] = [frozenset(starts)]
        first_bag = {v: 0 for v in starts}
        fronts = list(starts)
        for j in range(k):
            for idx in range(len(paths[j]) - 1):
                nxt = paths[j][idx + 1]
                walk.append(frozenset(fronts) | {nxt})
                first_bag.setdefault(nxt, len(walk) - 1)
                fronts[j] = nxt
                walk.append(frozenset(fronts))

        inserts: dict[int, list[frozenset[int]]] = {}

        def hang(anchor: int, extra: frozenset[int]) -> None:
            inserts.setdefault(anchor, []).append(extra)

        for j in range(k):
            anchor = first_bag[paths[j][0]]
            for gv in guards[(j, b)]:
                hang(anchor, walk[anchor] | {gv})
        for w_pad in cpads.get(b, []):
            hang(0, walk[0] | {w_pad})
        for j in range(k):
            for w in sorted(neighbors_closed(base, b)):
                anchor = first_bag[line_v[(j, b * n + w)]]
                bx = walk[anchor] | {choice[(b, j, w)]}
                hang(anchor, bx)
                hang(anchor, bx | {release[(b, j, w)]})
                for q in cpads_x[(b, j, w)]:
                    hang(anchor, bx | {q})

        z = center[b]
        block_bags: list[frozenset[int]] = []
        for i, bag in enumerate(walk):
            block_bags.append(bag | {z})
            for extra in inserts.get(i, ()):
                block_bags.append(extra | {z})

        seq = [frozenset(starts)] + block_bags
        if b < n - 1:
            seq.append(frozenset(paths[j][-1] for j in range(k)))
        if b > 0:
            assert all_bags[-1] == seq[0]
            seq = seq[1:]
        all_bags.extend(seq)

    glob = frozenset({universal} | {line_v[(j, 0)] for j in range(k)})
    return PathDecomposition([bag | glob for bag in all_bags])


# --------------------------------------------------------------------------
# red-blue domination -> safe set
# --------------------------------------------------------------------------


def rbds_target(bg: Bigraph, k: int) -> int:
    return k + bg.r + 1


def rbds_to_ss(bg: Bigraph, k: int) -> ReductionOutput:
    """Build the safe-set instance for 'do k blue vertices dominate all reds'.

    A hub adjacent to every blue vertex carries heavy pendant sets, as does
    every red vertex; each red vertex is additionally tied to a star whose
    size equals the target, which forces any small safe set to contain the
    hub and all reds.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if bg.r < 1:
        raise InputError("need at least one red vertex")
    s = rbds_target(bg, k)

    role_map: dict[int, dict] = {}
    counter = 0

    def fresh(role: dict) -> int:
        nonlocal counter
        vid = counter
        counter += 1
        role_map[vid] = role
        return vid

    reds = [fresh({"role": "red", "index": i}) for i in range(bg.r)]
    blues = [fresh({"role": "blue", "index": j}) for j in range(bg.b)]
    hub = fresh({"role": "hub"})
    hub_pendants = [fresh({"role": "hub_pendant", "idx": t}) for t in range(2 * s)]
    red_pendants = {
        i: [fresh({"role": "red_pendant", "red": i, "idx": t}) for t in range(2 * s)]
        for i in range(bg.r)
    }
    star_center = {i: fresh({"role": "star_center", "red": i}) for i in range(bg.r)}
    star_leaves = {
        i: [fresh({"role": "star_leaf", "red": i, "idx": t}) for t in range(s - 1)]
        for i in range(bg.r)
    }

    edges: list[tuple[int, int]] = []
    edges.extend((reds[i], blues[j]) for (i, j) in sorted(bg.edges))
    edges.extend((hub, bv) for bv in blues)
    edges.extend((hub, p) for p in hub_pendants)
    for i in range(bg.r):
        edges.extend((reds[i], p) for p in red_pendants[i])
        edges.append((reds[i], star_center[i]))
        edges.extend((star_center[i], leaf) for leaf in star_leaves[i])

    graph = Graph(counter, edges)
    source = {"kind": "rbds", "r": bg.r, "b": bg.b, "edges": sorted(map(list, bg.edges)), "k": k}
    return ReductionOutput(graph, s, role_map, source)


def rbds_forward_certificate(bg: Bigraph, D, output: ReductionOutput) -> frozenset[int]:
    """Connected safe set of exactly the target size from a blue dominating set.

    The stated set is the hub, all reds, and D.  When |D| < k the set is
    topped up to the target size with unused blues, then hub pendants; a
    smaller set would sit next to a strictly larger star component and fail
    verification.
    """
    k = output.source["k"]
    s = output.target
    D = frozenset(D)
    for j in D:
        if not (0 <= j < bg.b):
            raise InputError(f"blue index {j} out of range")
    for i in range(bg.r):
        if not (bg.blues_of(i) & D):
            raise InputError(f"D does not dominate red vertex {i}")
    if len(D) > k:
        raise InputError(f"|D|={len(D)} exceeds k={k}")

    red_ids, blue_ids, hub, hub_pendant_ids = [], [], None, []
    for vid, role in output.role_map.items():
        if role["role"] == "red":
            red_ids.append(vid)
        elif role["role"] == "blue":
            blue_ids.append((role["index"], vid))
        elif role["role"] == "hub":
            hub = vid
        elif role["role"] == "hub_pendant":
            hub_pendant_ids.append(vid)
    blue_by_index = dict(blue_ids)

    chosen: set[int] = {hub}
    chosen.update(red_ids)
    chosen.update(blue_by_index[j] for j in sorted(D))
    fill = [blue_by_index[j] for j in sorted(set(range(bg.b)) - D)] + sorted(hub_pendant_ids)
    for extra in fill:
        if len(chosen) >= s:
            break
        chosen.add(extra)
    assert len(chosen) == s, (len(chosen), s)
    assert is_connected_safe_set(output.graph, chosen)
    return frozenset(chosen)
