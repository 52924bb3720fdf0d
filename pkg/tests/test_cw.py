"""The tree-based safe-set solver, checked against direct recomputation."""

import logging
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_expression
from safeset.cexpr import (
    CExpression,
    Leaf,
    cycle_expression,
    eval_graph,
    iter_nodes,
    leaf_spans,
    parse_cexpression,
)
from safeset.cw import (
    DpEntry,
    definitional_entry,
    dp_evaluate,
    dp_join,
    dp_leaf,
    dp_relabel,
    dp_union,
    solve_cw,
)
from safeset.generators import complete_graph, cycle_graph, path_graph
from safeset.graph import Graph, InputError, is_connected_safe_set, is_safe_set
from safeset.oracle import connected_safe_number_bf, safe_number_bf

K2_TEXT = "(e 1 2 (u (v 1) (v 2)))"
PATH4_TEXT = "(e 2 3 (u (r 3 2 (r 2 1 (e 2 3 (u (e 1 2 (u (v 1) (v 2))) (v 3))))) (v 3)))"
NESTED_JOIN_TEXT = (
    "(e 1 2 (u (v 1) (r 1 2 (e 1 2 (u (v 1) (r 1 2 (e 1 2 (u (v 1) (v 2)))))))))"
)


def by_witness(entries, witness):
    matches = [e for e in entries if e.witness == frozenset(witness)]
    assert len(matches) == 1, f"no unique entry with witness {witness}"
    return matches[0]


# ---------------------------------------------------------------------------
# single transitions against frozen values


def test_leaf_summaries():
    entries = dp_leaf(1)
    assert len(entries) == 2
    skipped = by_witness(entries, ())
    assert skipped.inside_size == {}
    assert skipped.outside_size == {1: 1}
    assert skipped.outside_max == {1: 1}
    assert skipped.smallest_inside(1) == math.inf
    taken = by_witness(entries, (0,))
    assert taken.inside_size == {1: 1}
    assert taken.inside_min == {1: 1}
    assert taken.outside_size == {}
    assert taken.largest_outside(1) == -math.inf
    for e in entries:
        assert e.adj_inside_min == {} and e.adj_outside_max == {} and e.adj_diff_min == {}
        assert e.smallest_adjacent_inside((1, 1)) == math.inf
        assert e.largest_adjacent_outside((1, 1)) == -math.inf
        assert e.smallest_adjacent_gap((1, 1)) == math.inf
        e.assert_coherent()


def test_union_with_skipped_leaf_only_grows_outside():
    base = by_witness(dp_leaf(1, vertex=0), (0,))
    pad = by_witness(dp_leaf(2, vertex=1), ())
    combined = dp_union([base], [pad])
    assert len(combined) == 1
    entry = combined[0]
    assert entry.inside_size == base.inside_size
    assert entry.outside_size == {2: 1}
    assert entry.witness == frozenset({0})


def test_union_of_two_taken_leaves_same_label():
    a = by_witness(dp_leaf(1, vertex=0), (0,))
    b = by_witness(dp_leaf(1, vertex=1), (1,))
    entry = dp_union([a], [b])[0]
    assert entry.inside_size == {1: 2}
    assert entry.inside_min == {1: 1}
    direct = definitional_entry(Graph(2), [1, 1], {0, 1}, 1)
    assert entry == direct


def test_union_size_is_at_most_product():
    left = dp_leaf(1, 0)
    right = dp_leaf(2, 1)
    combined = dp_union(left, right)
    assert len(combined) <= len(left) * len(right)
    assert len(combined) == 4


def test_relabel_renames_single_class():
    entry = by_witness(dp_leaf(1), (0,))
    out = dp_relabel(1, 2, [entry])[0]
    assert out.inside_size == {2: 1}
    assert out.inside_total(1) == 0


def test_relabel_fuses_outside_buckets():
    # two skipped leaves with labels 1 and 2; renaming 1 to 2 must pool them
    child = dp_union(dp_leaf(1, 0), dp_leaf(2, 1))
    both_out = by_witness(child, ())
    assert both_out.outside_size == {1: 1, 2: 1}
    fused = dp_relabel(1, 2, [both_out])[0]
    assert fused.outside_size == {2: 2}
    assert fused.outside_max == {2: 1}
    direct = definitional_entry(Graph(2), [2, 2], set(), 2)
    assert fused == direct


def test_relabel_without_occurrences_changes_nothing():
    child = dp_union(dp_leaf(1, 0), dp_leaf(2, 1))
    out = dp_relabel(3, 1, child)
    assert [e.signature for e in out] == [e.signature for e in child]


def test_join_merges_selected_components():
    child = dp_union(dp_leaf(1, 0), dp_leaf(2, 1))
    joined = dp_join(1, 2, child)
    both = by_witness(joined, (0, 1))
    assert both.inside_size == {3: 2}
    assert both.inside_min == {3: 2}
    assert both.adj_diff_min == {}


def test_join_merges_unselected_components():
    child = dp_union(dp_leaf(1, 0), dp_leaf(2, 1))
    joined = dp_join(1, 2, child)
    neither = by_witness(joined, ())
    assert neither.outside_size == {3: 2}
    assert neither.outside_max == {3: 2}


def test_join_records_new_adjacency():
    child = dp_union(dp_leaf(1, 0), dp_leaf(2, 1))
    joined = dp_join(1, 2, child)
    first_only = by_witness(joined, (0,))
    assert first_only.adj_inside_min == {(1, 2): 1}
    assert first_only.adj_outside_max == {(1, 2): 1}
    assert first_only.adj_diff_min == {(1, 2): 0}
    direct = definitional_entry(Graph(2, [(0, 1)]), [1, 2], {0}, 2)
    assert first_only == direct


def test_join_without_both_classes_is_identity():
    child = dp_union(dp_leaf(1, 0), dp_leaf(1, 1))
    out = dp_join(2, 3, child)
    assert [e.signature for e in out] == [e.signature for e in child]


def test_join_revalues_gap_when_fused_mask_equals_old_key():
    # The two unselected components have label sets {1,2,3} and {2}; the
    # join fuses them, and the fused set is again {1,2,3}.  The adjacency
    # key stays put while the component behind it grows, so the stored
    # gap must still be recomputed.
    text = (
        "(e 2 3 (u (e 1 2 (u (e 1 3 (u (r 3 1 (u (r 2 3 (v 2)) (v 3)))"
        " (r 1 3 (v 1)))) (r 1 2 (v 1)))) (v 2)))"
    )
    expr = parse_cexpression(text)
    g, labels = eval_graph(expr)
    assert g.edges == Graph(5, [(0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (2, 4)]).edges
    entry = by_witness(dp_evaluate(expr)[expr.root], (1,))
    assert entry.outside_size == {7: 4}
    assert entry.adj_diff_min == {(1, 7): -3}
    assert entry == definitional_entry(g, labels, {1}, expr.label_count)


def test_transitions_reject_equal_labels():
    with pytest.raises(InputError):
        dp_relabel(2, 2, dp_leaf(2))
    with pytest.raises(InputError):
        dp_join(1, 1, dp_leaf(1))


# ---------------------------------------------------------------------------
# the master property: every summary means what direct recomputation says


def assert_tables_definitional(expr):
    tables = dp_evaluate(expr)
    spans = leaf_spans(expr)
    for node in iter_nodes(expr.root):
        base, end = spans[node]
        size = end - base
        sub = CExpression(node, expr.label_count)
        g, labels = eval_graph(sub)
        assert g.n == size
        entries = tables[node]
        assert len(entries) <= 2 ** size
        signatures = set()
        for entry in entries:
            entry.assert_coherent()
            local = {v - base for v in entry.witness}
            assert all(0 <= v < size for v in local)
            direct = definitional_entry(g, labels, local, expr.label_count)
            assert direct.signature == entry.signature
            assert sum(entry.inside_size.values()) + sum(entry.outside_size.values()) == size
            signatures.add(entry.signature)
        assert len(signatures) == len(entries)
        expected = set()
        for mask in range(1 << size):
            subset = {v for v in range(size) if mask >> v & 1}
            expected.add(definitional_entry(g, labels, subset, expr.label_count).signature)
        assert signatures == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_summaries_match_direct_recomputation(seed):
    expr = random_expression(random.Random(seed), label_count=3, max_leaves=6)
    assert_tables_definitional(expr)


def test_summaries_match_on_fixed_trees():
    for text in [K2_TEXT, PATH4_TEXT, NESTED_JOIN_TEXT]:
        assert_tables_definitional(parse_cexpression(text))
    assert_tables_definitional(cycle_expression(6))


# ---------------------------------------------------------------------------
# solving


def test_solve_single_vertex():
    res = solve_cw(parse_cexpression("(v 1)"))
    assert res.feasible and res.size == 1 and res.witness == frozenset({0})


def test_solve_two_vertex_graph():
    res = solve_cw(parse_cexpression(K2_TEXT))
    assert res.size == 1


def test_solve_path_matches_reference():
    expr = parse_cexpression(PATH4_TEXT)
    g, _ = eval_graph(expr)
    assert g == path_graph(4)
    assert solve_cw(expr).size == safe_number_bf(g).size == 2
    assert solve_cw(expr, connected=True).size == connected_safe_number_bf(g).size == 2


def test_solve_complete_graph_expression():
    expr = parse_cexpression(NESTED_JOIN_TEXT)
    g, _ = eval_graph(expr)
    assert g == complete_graph(4)
    assert solve_cw(expr).size == 2
    assert solve_cw(expr, connected=True).size == 2


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_solve_cycles_both_modes(n):
    expr = cycle_expression(n)
    g, _ = eval_graph(expr)
    assert g == cycle_graph(n)
    plain = solve_cw(expr)
    linked = solve_cw(expr, connected=True)
    assert plain.size == safe_number_bf(g).size
    assert linked.size == connected_safe_number_bf(g).size
    assert is_safe_set(g, plain.witness)
    assert is_connected_safe_set(g, linked.witness)


def test_solve_eight_cycle_needs_four():
    expr = cycle_expression(8)
    assert solve_cw(expr).size == 4
    assert solve_cw(expr, connected=True).size == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_solve_agrees_with_reference_search(seed):
    expr = random_expression(random.Random(seed), label_count=3, max_leaves=8)
    g, _ = eval_graph(expr)
    plain = solve_cw(expr)
    linked = solve_cw(expr, connected=True)
    assert plain.size == safe_number_bf(g).size
    assert linked.size == connected_safe_number_bf(g).size
    assert is_safe_set(g, plain.witness)
    assert is_connected_safe_set(g, linked.witness)


def test_solve_is_deterministic():
    expr = cycle_expression(7)
    first = solve_cw(expr, connected=True)
    second = solve_cw(expr, connected=True)
    assert first.witness == second.witness and first.size == second.size


def test_solve_rejects_repeated_join():
    expr = parse_cexpression("(e 1 2 (e 1 2 (u (v 1) (v 2))))")
    with pytest.raises(InputError, match="re-adds"):
        solve_cw(expr)


def test_solve_rejects_out_of_range_labels():
    with pytest.raises(InputError):
        solve_cw(CExpression(Leaf(2), 1))


# a 4-cycle laid out so the two ends of a *non*-edge get the smallest ids:
# vertex 0 (label 3) and vertex 1 (label 4) sit opposite each other
CROSSED_RING_TEXT = (
    "(r 4 1 (r 3 1 (r 2 1 (e 2 3 (e 4 2 (e 1 4 (e 3 1"
    " (u (u (v 3) (v 4)) (u (v 1) (v 2))))))))))"
)


def test_connected_scan_skips_disconnected_summary(caplog):
    expr = parse_cexpression(CROSSED_RING_TEXT)
    g, labels = eval_graph(expr)
    assert g == Graph(4, [(0, 2), (1, 2), (1, 3), (0, 3)])
    assert labels == [1, 1, 1, 1]
    with caplog.at_level(logging.WARNING, logger="safeset.cw"):
        res = solve_cw(expr, connected=True)
    assert res.size == 2
    assert is_connected_safe_set(g, res.witness)
    assert any("disconnected selection" in r.message for r in caplog.records)


def test_plain_scan_accepts_disconnected_optimum(caplog):
    expr = parse_cexpression(CROSSED_RING_TEXT)
    with caplog.at_level(logging.WARNING, logger="safeset.cw"):
        res = solve_cw(expr)
    assert res.size == 2
    assert res.witness == frozenset({0, 1})
    assert not caplog.records
