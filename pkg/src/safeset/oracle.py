"""Brute-force reference solvers.

These are deliberately exhaustive: every other solver in the package is
cross-checked against them on small instances.  Subsets are scanned by
cardinality and, within a cardinality, by increasing bitmask value, so the
reported witness is always the same set.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

from .graph import (
    Graph,
    InputError,
    components_mask,
    induced_subgraph,
    is_safe_mask,
    mask_of,
    neighbors_closed,
    vertices_of,
)

DEFAULT_SUBSET_CAP = 20
DEFAULT_TREEDEPTH_CAP = 14


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solver run.

    When ``feasible`` is true, ``witness`` verifies against the problem's
    verifier and has exactly ``size`` vertices.
    """

    feasible: bool
    size: int | None
    witness: frozenset[int] | None
    algorithm: str
    elapsed: float

    def __post_init__(self):
        if self.feasible:
            assert self.witness is not None and self.size == len(self.witness)


def subset_masks_by_size(n: int, lo: int = 1, hi: int | None = None) -> Iterator[int]:
    """All subset masks of [0, n), by popcount then by numeric mask value."""
    if hi is None:
        hi = n
    for k in range(lo, hi + 1):
        if k == 0:
            yield 0
            continue
        if k > n:
            return
        m = (1 << k) - 1
        top = 1 << n
        while m < top:
            yield m
            # Gosper's hack: next mask with the same popcount.
            c = m & -m
            r = m + c
            m = (((r ^ m) >> 2) // c) | r


def _check_cap(g: Graph, cap: int, what: str) -> None:
    if g.n > cap:
        raise InputError(
            f"{what} refused: n={g.n} exceeds cap={cap}; raise the cap explicitly"
        )


def _min_safe_mask_global(
    g: Graph, connected: bool, max_size: int | None = None
) -> tuple[int, int] | None:
    """Smallest (size, global mask) over safe sets, scanning per component.

    A minimum safe set never straddles components: restricting a safe set to
    one component keeps it safe, and sizes add up.  Scanning each component
    separately therefore finds the global minimum, and mapping local masks
    back through sorted vertex ids preserves the mask ordering.
    """
    best: tuple[int, int] | None = None
    for comp in components_mask(g, g.full_mask()):
        sub, ids = induced_subgraph(g, vertices_of(comp))
        limit = sub.n if max_size is None else min(sub.n, max_size)
        if best is not None:
            limit = min(limit, best[0])
        for mask in subset_masks_by_size(sub.n, 1, limit):
            if connected and len(components_mask(sub, mask)) != 1:
                continue
            if is_safe_mask(sub, mask):
                gmask = mask_of(ids[i] for i in vertices_of(mask))
                cand = (mask.bit_count(), gmask)
                if best is None or cand < best:
                    best = cand
                break
    return best


def safe_number_bf(
    g: Graph, cap: int = DEFAULT_SUBSET_CAP, max_size: int | None = None
) -> SolveResult:
    """Exhaustive minimum safe set.

    With ``max_size`` set, only sets of at most that many vertices are
    scanned; an infeasible result then means none of them is safe.
    """
    t0 = time.perf_counter()
    _check_cap(g, cap, "safe set brute force")
    best = _min_safe_mask_global(g, connected=False, max_size=max_size)
    elapsed = time.perf_counter() - t0
    if best is None:
        return SolveResult(False, None, None, "oracle", elapsed)
    return SolveResult(True, best[0], frozenset(vertices_of(best[1])), "oracle", elapsed)


def connected_safe_number_bf(
    g: Graph, cap: int = DEFAULT_SUBSET_CAP, max_size: int | None = None
) -> SolveResult:
    """Exhaustive minimum connected safe set."""
    t0 = time.perf_counter()
    _check_cap(g, cap, "connected safe set brute force")
    best = _min_safe_mask_global(g, connected=True, max_size=max_size)
    elapsed = time.perf_counter() - t0
    if best is None:
        return SolveResult(False, None, None, "oracle", elapsed)
    return SolveResult(True, best[0], frozenset(vertices_of(best[1])), "oracle", elapsed)


def treedepth_bf(g: Graph, cap: int = DEFAULT_TREEDEPTH_CAP) -> int:
    """Exact treedepth by the removal recursion, memoized on vertex masks.

    One vertex has depth 1; a disconnected graph takes the maximum over its
    components; otherwise 1 plus the best single-vertex removal.
    """
    _check_cap(g, cap, "treedepth brute force")
    memo: dict[int, int] = {}

    def td(mask: int) -> int:
        if mask == 0:
            return 0
        got = memo.get(mask)
        if got is not None:
            return got
        comps = components_mask(g, mask)
        if len(comps) > 1:
            val = max(td(c) for c in comps)
        elif mask.bit_count() == 1:
            val = 1
        else:
            val = 1 + min(td(mask & ~(1 << v)) for v in vertices_of(mask))
        memo[mask] = val
        return val

    return td(g.full_mask())


def vertex_cover_bf(g: Graph, cap: int = DEFAULT_SUBSET_CAP) -> int:
    """Minimum vertex cover size by subset scan."""
    _check_cap(g, cap, "vertex cover brute force")
    if not g.edges:
        return 0
    edge_list = sorted(g.edges)
    for mask in subset_masks_by_size(g.n, 1, g.n):
        if all((mask >> u) & 1 or (mask >> v) & 1 for (u, v) in edge_list):
            return mask.bit_count()
    raise AssertionError("unreachable: V itself covers all edges")


def dominating_set_bf(g: Graph, k: int, cap: int = DEFAULT_SUBSET_CAP) -> SolveResult:
    """Smallest dominating set if one of size <= k exists."""
    t0 = time.perf_counter()
    _check_cap(g, cap, "dominating set brute force")
    if k < 0:
        raise InputError("k must be nonnegative")
    full = g.full_mask()
    if g.n == 0:
        return SolveResult(True, 0, frozenset(), "oracle", time.perf_counter() - t0)
    closed = [mask_of(neighbors_closed(g, v)) for v in g.vertices()]
    for mask in subset_masks_by_size(g.n, 1, min(k, g.n)):
        dominated = 0
        m = mask
        while m:
            b = m & -m
            dominated |= closed[b.bit_length() - 1]
            m ^= b
        if dominated == full:
            return SolveResult(
                True,
                mask.bit_count(),
                frozenset(vertices_of(mask)),
                "oracle",
                time.perf_counter() - t0,
            )
    return SolveResult(False, None, None, "oracle", time.perf_counter() - t0)
