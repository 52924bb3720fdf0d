"""Core verifier and decomposition checks."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from safeset.generators import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)
from safeset.graph import (
    DecompositionViolation,
    Graph,
    InputError,
    PathDecomposition,
    components,
    explain_safety,
    induced_subgraph,
    is_connected_safe_set,
    is_safe_set,
    max_degree,
    sets_adjacent,
    validate_path_decomposition,
)

from reference import ref_is_safe


def test_graph_rejects_bad_edges():
    with pytest.raises(InputError):
        Graph(3, [(0, 3)])
    with pytest.raises(InputError):
        Graph(3, [(1, 1)])
    with pytest.raises(InputError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        Graph(-1)


def test_components_path():
    g = path_graph(4)
    assert components(g, {0, 1, 3}) == [frozenset({0, 1}), frozenset({3})]


def test_components_cycle_complement():
    g = cycle_graph(8)
    rest = set(range(8)) - {0, 1, 4, 5}
    assert components(g, rest) == [frozenset({2, 3}), frozenset({6, 7})]


def test_components_range_check():
    with pytest.raises(InputError):
        components(path_graph(3), {0, 5})


def test_sets_adjacent():
    g = path_graph(4)
    assert sets_adjacent(g, {0, 1}, {2}) is True
    assert sets_adjacent(g, {0}, {2, 3}) is False
    with pytest.raises(InputError):
        sets_adjacent(g, {0, 1}, {1, 2})


def test_safe_set_star():
    g = star_graph(3)
    assert is_safe_set(g, {0}) is True
    # a single leaf leaves the remaining star of 3 vertices next to it
    assert is_safe_set(g, {1}) is False


def test_safe_set_cycle_examples():
    g = cycle_graph(8)
    assert is_safe_set(g, {0, 1, 4, 5}) is True
    # no 3 vertices of the 8-cycle are safe
    for combo in itertools.combinations(range(8), 3):
        assert is_safe_set(g, set(combo)) is False


def test_safe_set_empty_and_range():
    g = path_graph(3)
    assert is_safe_set(g, set()) is False
    with pytest.raises(InputError):
        is_safe_set(g, {7})


def test_connected_safe_set():
    g = cycle_graph(8)
    assert is_connected_safe_set(g, {0, 1, 4, 5}) is False  # two components
    assert is_connected_safe_set(g, {0, 1, 2, 3}) is True
    assert is_safe_set(g, {0, 1, 2, 3}) is True


def test_explain_safety():
    g = star_graph(3)
    v = explain_safety(g, {1})
    assert v is not None and v.kind == "larger-neighbor"
    assert v.component == (1,)
    assert v.neighbor == (0, 2, 3)
    assert explain_safety(g, {0}) is None
    assert explain_safety(g, set()).kind == "empty"
    w = explain_safety(cycle_graph(8), {0, 1, 4, 5}, connected=True)
    assert w is not None and w.kind == "disconnected"


def test_max_degree():
    assert max_degree(star_graph(3)) == 3
    assert max_degree(Graph(5)) == 0
    assert max_degree(Graph(0)) == 0


def test_induced_subgraph():
    g = cycle_graph(5)
    sub, ids = induced_subgraph(g, {1, 2, 4})
    assert ids == [1, 2, 4]
    assert sub.n == 3
    assert sub.edges == frozenset({(0, 1)})


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    pairs = list(itertools.combinations(range(n), 2))
    picked = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph(n, picked)


@settings(max_examples=120, deadline=None)
@given(small_graphs())
def test_components_partition_and_connectivity(g):
    comps = components(g, set(g.vertices()))
    seen = set()
    for c in comps:
        assert not (c & seen)
        seen |= c
        # every component is internally connected: BFS reaches all of it
        start = min(c)
        reach = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for w in g.neighbors(v):
                if w in c and w not in reach:
                    reach.add(w)
                    queue.append(w)
        assert reach == c
    assert seen == set(g.vertices())
    # no edges between distinct components
    for a, b in itertools.combinations(comps, 2):
        assert not sets_adjacent(g, a, b)


@settings(max_examples=120, deadline=None)
@given(small_graphs(), st.data())
def test_verifier_matches_reference(g, data):
    subset = data.draw(st.sets(st.integers(min_value=0, max_value=g.n - 1), max_size=g.n))
    assert is_safe_set(g, subset) == ref_is_safe(g, subset)
    assert is_connected_safe_set(g, subset) == ref_is_safe(g, subset, connected=True)


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_connected_safe_implies_safe(g):
    for subset in itertools.combinations(range(g.n), min(3, g.n)):
        if is_connected_safe_set(g, set(subset)):
            assert is_safe_set(g, set(subset))


def test_size_bound_on_connected_graphs():
    # for connected g and any verified safe set s: n <= |s| + |s|^2 * maxdeg
    rng = random.Random(7)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randint(2, 7))
        d = max_degree(g)
        for size in range(1, g.n + 1):
            for combo in itertools.combinations(range(g.n), size):
                if is_safe_set(g, set(combo)):
                    assert g.n <= size + size * size * d
            else:
                continue


def test_validate_path_decomposition_accepts():
    g = path_graph(4)
    pd = PathDecomposition([{0, 1}, {1, 2}, {2, 3}])
    assert validate_path_decomposition(g, pd) == 2
    trivial = PathDecomposition([set(range(4))])
    assert validate_path_decomposition(g, trivial) == 4


def test_validate_path_decomposition_violations():
    g = path_graph(3)
    v = validate_path_decomposition(g, PathDecomposition([{0, 1}, {2}]))
    assert isinstance(v, DecompositionViolation)
    assert v.condition == "edge-coverage"
    assert v.witness == (1, 2)

    v = validate_path_decomposition(g, PathDecomposition([{0, 1}, {1, 2}, {0}]))
    assert v.condition == "contiguity"
    assert v.witness == (0,)

    v = validate_path_decomposition(g, PathDecomposition([{0, 1}]))
    assert v.condition == "vertex-coverage"
    assert v.witness == (2,)

    with pytest.raises(InputError):
        validate_path_decomposition(g, PathDecomposition([{0, 9}]))


def test_validate_checks_order_first_violation():
    # both an uncovered vertex and an uncovered edge: vertex coverage reported
    g = path_graph(3)
    v = validate_path_decomposition(g, PathDecomposition([{0}]))
    assert v.condition == "vertex-coverage"


def test_complete_graph_decomposition_bound():
    g = complete_graph(4)
    pd = PathDecomposition([set(range(4))])
    assert validate_path_decomposition(g, pd) == 4
