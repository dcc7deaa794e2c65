import itertools

import networkx as nx
import pytest

from divstage.core import PreconditionError
from divstage.instances import generate, has_independent_set, reduce_is_to_dmvc
from divstage.multistage import verify_sequence
from divstage.oracles import brute_multistage, enumerate_solutions
from divstage.treedec import nice_decomposition, validate


@pytest.mark.parametrize("kind", ["voting", "matroid", "matching", "stpath", "vertexcover"])
def test_same_seed_same_instance(kind):
    assert generate(kind, {"tau": 3}, 0) == generate(kind, {"tau": 3}, 0)
    assert generate(kind, {"tau": 3}, 0).tau == 3


def test_different_seeds_differ():
    assert generate("voting", {}, 0) != generate("voting", {}, 1)


def test_odd_matching_size_rejected():
    with pytest.raises(PreconditionError, match="even"):
        generate("matching", {"n": 5}, 0)


@pytest.mark.parametrize("params", [{"n": 99}, {"tau": 0}, {"ell": -1}, {"density": 2.0}])
def test_parameter_ranges(params):
    kind = "stpath" if "density" in params else "voting"
    with pytest.raises(PreconditionError):
        generate(kind, params, 0)


def test_unknown_kind_and_matroid_type():
    with pytest.raises(PreconditionError):
        generate("sudoku", {}, 0)
    with pytest.raises(PreconditionError):
        generate("matroid", {"type": "linear"}, 0)


@pytest.mark.parametrize("seed", range(10))
def test_bounded_width_flag(seed):
    mi = generate("stpath", {"n": 10, "tau": 3, "density": 0.8, "bounded_width": True, "width_cap": 4}, seed)
    for st in mi.stages:
        ntd = nice_decomposition(st.adjacency(), (st.s, st.t), 4)
        assert ntd.width <= 4 and validate(ntd, st.adjacency()) == []


@pytest.mark.parametrize("matroid_type", ["graphic", "uniform", "partition"])
def test_matroid_types(matroid_type):
    mi = generate("matroid", {"type": matroid_type, "tau": 2}, 4)
    for st in mi.stages:
        assert enumerate_solutions(st)  # thresholds stay at or below the greedy optimum


def test_matching_planting_gives_perfect_matchings():
    mi = generate("matching", {"n": 8, "tau": 4, "planted": 1.0, "density": 0.1}, 2)
    assert all(enumerate_solutions(st) for st in mi.stages)


def graph(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return g


@pytest.mark.parametrize("g, k, want", [
    (nx.complete_graph(3), 2, False),
    (graph(4, []), 3, True),
    (nx.path_graph(3), 2, True),
])
def test_reduction_examples(g, k, want):
    mi = reduce_is_to_dmvc(g, k)
    assert mi.tau == 2 and mi.ell == k + 1
    assert mi.stages[0].k == g.number_of_nodes()
    assert len(mi.stages[0].edges) == (g.number_of_nodes() + 1) * g.number_of_nodes() // 2
    seq = brute_multistage(mi)
    assert (seq is not None) == want == has_independent_set(g, k)
    if seq is not None:
        assert verify_sequence(mi, seq)


def test_reduction_needs_k_above_one():
    with pytest.raises(PreconditionError):
        reduce_is_to_dmvc(nx.path_graph(3), 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reduction_all_labeled_graphs_small(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        g = graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
        for k in range(2, n + 1):
            assert (brute_multistage(reduce_is_to_dmvc(g, k)) is not None) == has_independent_set(g, k)


def test_independent_set_oracle():
    assert has_independent_set(nx.cycle_graph(5), 2)
    assert not has_independent_set(nx.cycle_graph(5), 3)
    assert has_independent_set(graph(3, []), 3)
