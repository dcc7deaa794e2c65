import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from divstage.core import PreconditionError
from divstage.treedec import (NiceTreeDecomposition, WidthCapExceeded, exact_order, min_fill_order,
                              nice_decomposition, order_width, treewidth_exact, validate)


def graph(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return g


def test_single_edge_is_one_leaf():
    ntd = nice_decomposition(graph(2, [(0, 1)]), (0, 1))
    assert len(ntd) == 1
    assert ntd.kinds == ["leaf"] and ntd.bags == [frozenset({0, 1})]
    assert validate(ntd, graph(2, [(0, 1)])) == []


def test_path_width():
    g = graph(3, [(0, 1), (1, 2)])
    ntd = nice_decomposition(g, (0, 2))
    assert treewidth_exact(g) == 1
    assert ntd.width <= 3
    assert validate(ntd, g) == []


def test_clique_width():
    g = nx.complete_graph(5)
    assert treewidth_exact(g) == 4
    ntd = nice_decomposition(g, (0, 1))
    assert ntd.width == 4
    assert validate(ntd, g) == []


@pytest.mark.parametrize("n, want", [(4, 2), (6, 2), (8, 2)])
def test_cycle_treewidth(n, want):
    assert treewidth_exact(nx.cycle_graph(n)) == want


def test_grid_treewidth():
    assert treewidth_exact(nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3))) == 3


def test_width_cap_raises():
    with pytest.raises(WidthCapExceeded):
        nice_decomposition(nx.complete_graph(7), (0, 1), width_cap=4)


def test_terminals_must_be_distinct_vertices():
    with pytest.raises(PreconditionError):
        nice_decomposition(graph(3, [(0, 1)]), (0, 0))
    with pytest.raises(PreconditionError):
        nice_decomposition(graph(3, [(0, 1)]), (0, 7))


def test_validator_reports_broken_decompositions():
    g = graph(3, [(0, 1), (1, 2)])
    ntd = nice_decomposition(g, (0, 2))
    broken = NiceTreeDecomposition(list(ntd.bags), list(ntd.kinds), list(ntd.children), list(ntd.vertex),
                                   ntd.terminals)
    broken.bags[0] = frozenset({0, 2, 7})
    assert validate(broken, g)
    missing_edge = NiceTreeDecomposition([frozenset({0, 2})], ["leaf"], [()], [None], frozenset({0, 2}))
    assert any("edge" in p for p in validate(missing_edge, g))


@pytest.mark.parametrize("seed", range(30))
def test_min_fill_never_beats_exact(seed):
    rng = random.Random(seed)
    g = nx.gnp_random_graph(rng.randint(1, 9), rng.uniform(0.2, 0.8), seed=seed)
    adj = {v: set(g[v]) for v in g}
    assert order_width(adj, exact_order(adj)) <= order_width(adj, min_fill_order(adj))
    assert order_width(adj, exact_order(adj)) == treewidth_exact(g)


@given(st.integers(2, 11), st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_random_decompositions_are_valid(n, p, seed):
    g = nx.gnp_random_graph(n, p, seed=seed)
    ntd = nice_decomposition(g, (0, n - 1), width_cap=64)
    assert validate(ntd, g) == []
    assert ntd.bags[ntd.root] == frozenset({0, n - 1})
