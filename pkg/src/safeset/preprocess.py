"""Fast polynomial-time routines: a factor-(s+1) approximation and two
sound refusal rules for the parameterized question "is there a safe set of
size at most k".

The refusal rules only ever answer No when no such set can exist; a pass
says nothing either way.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graph import (
    Graph,
    InputError,
    bfs_order,
    components_mask,
    degree,
    induced_subgraph,
    is_safe_set,
    mask_of,
    max_degree,
    neighborhood_mask,
    vertices_of,
)
from .oracle import SolveResult


def _absorb_component(g: Graph, smask: int, comp: int, want: int) -> int:
    """Connected chunk of `comp` with `want` vertices, grown from the
    smallest vertex of comp that has a neighbor inside smask."""
    border = comp & neighborhood_mask(g, smask)
    start = (border & -border).bit_length() - 1
    chunk = 0
    for v in bfs_order(g, start, comp):
        chunk |= 1 << v
        want -= 1
        if want == 0:
            break
    return chunk


def _approx_component(g: Graph, comp: int) -> tuple[int, frozenset[int]]:
    """Best set found over all guesses of the safe number within one component."""
    size = comp.bit_count()
    best: tuple[int, tuple[int, ...]] | None = None
    root = (comp & -comp).bit_length() - 1
    for s in range(1, size + 1):
        if s + 1 >= size:
            smask = comp
        else:
            smask = 0
            for i, v in enumerate(bfs_order(g, root, comp)):
                smask |= 1 << v
                if i == s:
                    break
            while True:
                oversized = next(
                    (c for c in components_mask(g, comp & ~smask) if c.bit_count() > s),
                    None,
                )
                if oversized is None:
                    break
                smask |= _absorb_component(g, smask, oversized, s + 1)
        if not is_safe_set(g, vertices_of(smask)):  # pragma: no cover - defensive
            continue
        cand = (smask.bit_count(), tuple(vertices_of(smask)))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best[0], frozenset(best[1])


def approx_safe_set(g: Graph) -> SolveResult:
    """Safe set of size at most s(G) * (s(G) + 1), connected inside its
    component, found in polynomial time.

    For each guessed value s, grow a connected seed of size s+1 from the
    smallest vertex, then repeatedly swallow a connected block of size s+1
    out of any too-large leftover component until every component of the
    complement has at most s vertices; keep the smallest result over all
    guesses.  Each swallowed block must intersect every safe set of size s,
    which is what caps the total at s(s+1).
    """
    t0 = time.perf_counter()
    if g.n == 0:
        return SolveResult(False, None, None, "approx", time.perf_counter() - t0)
    best: tuple[int, frozenset[int]] | None = None
    for comp in components_mask(g, g.full_mask()):
        cand = _approx_component(g, comp)
        if best is None or (cand[0], sorted(cand[1])) < (best[0], sorted(best[1])):
            best = cand
    return SolveResult(True, best[0], best[1], "approx", time.perf_counter() - t0)


@dataclass(frozen=True)
class RuleOutcome:
    """Result of a refusal rule: either a definitive No with a reason, or a
    pass (for the high-degree rule, carrying the forced vertex set)."""

    passed: bool
    reason: str | None = None
    forced: frozenset[int] | None = None

    def __bool__(self) -> bool:
        return self.passed


def _require_connected(g: Graph, what: str) -> None:
    if g.n == 0 or len(components_mask(g, g.full_mask())) != 1:
        raise InputError(f"{what} expects a connected graph")


def _power_at_least(base: int, exp: int, cap: int) -> bool:
    """Whether base**exp >= cap, without materializing huge powers."""
    val = 1
    for _ in range(exp):
        val *= base
        if val >= cap:
            return True
    return val >= cap


def highdegree_rule(g: Graph, k: int) -> RuleOutcome:
    """Refusal rule around vertices of degree >= 2k.

    In a connected graph, any safe set of size <= k must contain every
    vertex of degree at least 2k (else that vertex plus its out-of-set
    neighbors form a too-large component), so more than k of them is a No.
    When the rule passes, the leftover components after deleting those
    forced vertices have max degree < 2k and treedepth <= 2k, so any of
    them exceeding (2k)^(2k) vertices is also a No.
    """
    _require_connected(g, "high-degree rule")
    if k < 1:
        raise InputError("k must be at least 1")
    forced = frozenset(v for v in g.vertices() if degree(g, v) >= 2 * k)
    if len(forced) > k:
        return RuleOutcome(
            False,
            f"{len(forced)} vertices have degree >= {2 * k}, but only {k} fit",
            forced,
        )
    rest = g.full_mask() & ~mask_of(forced)
    for comp in components_mask(g, rest):
        size = comp.bit_count()
        if not _power_at_least(2 * k, 2 * k, size):
            return RuleOutcome(
                False,
                f"a leftover component has {size} vertices, "
                f"more than ({2 * k})^({2 * k})",
                forced,
            )
    return RuleOutcome(True, None, forced)


def degree_bound_check(g: Graph, k: int) -> RuleOutcome:
    """Refusal rule from the size bound n <= s + s^2 * max_degree.

    A safe set of size s leaves at most s * max_degree components, each of
    size at most s; if n exceeds k + k^2 * max_degree there is no safe set
    of size <= k in a connected graph.
    """
    _require_connected(g, "degree bound check")
    if k < 0:
        raise InputError("k must be nonnegative")
    bound = k + k * k * max_degree(g)
    if g.n > bound:
        return RuleOutcome(False, f"n={g.n} exceeds k + k^2*maxdeg = {bound}")
    return RuleOutcome(True)
