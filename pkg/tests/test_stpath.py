import random

import networkx as nx
import pytest

from divstage.core import Coloring, ErrorBudget, distance
from divstage.multistage import MultistageInstance, verify_sequence
from divstage.oracles import brute_multistage, enumerate_solutions, verify_representative
from divstage.stpath import (StPathSolver, StPathStage, colored_path_profiles, relevant_subgraph,
                             solve_colored_stpath, solve_stpath_multistage, two_long_cycles_representative)
from divstage.treedec import nice_decomposition, validate

from graphs import cycle, random_stpath, two_cycle_gadget


def test_single_edge():
    stage = StPathStage(2, ((0, 1),), 0, 1)
    assert solve_colored_stpath(stage, Coloring((1, 1), 4), (2, 0, 0, 0)) == (0, 1)


def test_two_hop_path():
    stage = StPathStage(3, ((0, 1), (1, 2)), 0, 2)
    assert solve_colored_stpath(stage, Coloring((1, 2, 1), 4), (2, 1, 0, 0)) == (0, 1, 2)
    assert solve_colored_stpath(stage, Coloring((1, 2, 1), 4), (3, 0, 0, 0)) is None


def test_five_cycle_long_route():
    stage = StPathStage(5, tuple(cycle([0, 1, 2, 3, 4])), 0, 2)
    mono = Coloring.monochrome(5, 4)
    assert solve_colored_stpath(stage, mono, (4, 0, 0, 0)) == (0, 2, 3, 4)
    assert solve_colored_stpath(stage, mono, (3, 0, 0, 0)) == (0, 1, 2)
    assert solve_colored_stpath(stage, mono, (5, 0, 0, 0)) is None


def test_disconnected_terminals():
    stage = StPathStage(4, ((0, 1), (2, 3)), 0, 3)
    assert colored_path_profiles(stage, Coloring.monochrome(4, 4)) == {}
    assert enumerate_solutions(stage) == []


def test_feasibility_checker():
    stage = StPathStage(4, ((0, 1), (1, 2), (2, 3), (0, 3)), 0, 2)
    assert stage.is_feasible((0, 1, 2))
    assert stage.is_feasible((0, 2, 3))
    assert not stage.is_feasible((0, 2))
    assert not stage.is_feasible((0, 1, 2, 3))


@pytest.mark.parametrize("seed", range(60))
def test_dp_matches_path_enumeration(seed):
    stage, colors = random_stpath(random.Random(seed))
    c = Coloring(colors, 4)
    want = {}
    for sol in enumerate_solutions(stage):
        want.setdefault(c.profile(sol), []).append(sol)
    got = colored_path_profiles(stage, c)
    assert set(got) == set(want)
    for prof, sol in got.items():
        assert stage.is_feasible(sol) and c.profile(sol) == prof


@pytest.mark.parametrize("seed", range(20))
def test_every_decomposition_used_is_valid(seed):
    stage, _ = random_stpath(random.Random(seed))
    ntd = nice_decomposition(stage.adjacency(), (stage.s, stage.t))
    assert validate(ntd, stage.adjacency()) == []


def test_relevant_subgraph_drops_dangling_parts():
    # a pendant vertex 3 and a separate triangle on 4, 5, 6
    stage = StPathStage(7, ((0, 1), (1, 2), (0, 2), (1, 3), (4, 5), (5, 6), (4, 6)), 0, 2)
    assert set(relevant_subgraph(stage)) == {0, 1, 2}


def test_tree_has_no_cycle_triple():
    stage = StPathStage(5, ((0, 1), (1, 2), (1, 3), (3, 4)), 0, 4)
    assert two_long_cycles_representative(stage, 1) is None


def test_zero_ell_short_circuits():
    stage = StPathStage(3, ((0, 1), (1, 2)), 0, 2)
    fam = two_long_cycles_representative(stage, 0)
    assert fam.solutions == ((0, 1, 2),)


def test_gadget_triple_is_far_and_representative():
    stage = two_cycle_gadget(8)
    fam = two_long_cycles_representative(stage, 2)
    assert fam is not None and len(fam) == 3
    for a in fam.solutions:
        assert stage.is_feasible(a)
        for b in fam.solutions:
            if a != b:
                assert distance(a, b) >= 4
    assert verify_representative(stage, fam, 2, method="types")


def test_gadget_too_short_for_large_ell():
    assert two_long_cycles_representative(two_cycle_gadget(8), 3) is None


@pytest.mark.parametrize("seed", range(12))
def test_bounded_width_multistage_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    stages = []
    for _ in range(3):
        edges = tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45)
        stages.append(StPathStage(n, edges, 0, n - 1))
    mi = MultistageInstance(tuple(stages), 2)
    got = solve_stpath_multistage(stages, 2)
    want = brute_multistage(mi)
    assert (got is None) == (want is None)
    if got is not None:
        assert verify_sequence(mi, got)


def test_gadget_stage_in_sequence_matches_brute_force():
    gadget = two_cycle_gadget(8)
    n = gadget.n
    line = StPathStage(n, tuple((i, i + 1) for i in range(n - 1)), 0, n - 1)
    for stages in ([gadget, line], [line, gadget, line], [gadget, gadget]):
        mi = MultistageInstance(tuple(stages), 2)
        got = solve_stpath_multistage(stages, 2)
        want = brute_multistage(mi)
        assert (got is None) == (want is None)
        if got is not None:
            assert verify_sequence(mi, got)


def test_single_stage_returns_a_path():
    stage = StPathStage(4, tuple(cycle([0, 1, 2, 3])), 0, 2)
    seq = solve_stpath_multistage([stage], 3)
    assert len(seq) == 1 and stage.is_feasible(seq[0])


def test_width_cap_falls_back_to_brute_force():
    g = nx.complete_graph(7)
    stage = StPathStage(7, tuple(g.edges), 0, 6)
    mi = MultistageInstance((stage, stage), 1)
    got = solve_stpath_multistage([stage, stage], 1, ErrorBudget(), width_cap=3)
    assert got is not None and verify_sequence(mi, got)


def test_solver_profile_interface():
    stage = StPathStage(5, tuple(cycle([0, 1, 2, 3, 4])), 0, 2)
    c = Coloring((1, 2, 1, 3, 3), 4)
    solver = StPathSolver()
    table = solver.solve_profiles(stage, c, [(2, 1, 0, 0), (2, 0, 2, 0), (1, 1, 1, 1)], None)
    assert table == {(2, 1, 0, 0): (0, 1, 2), (2, 0, 2, 0): (0, 2, 3, 4)}
    assert solver.solve_first(stage, c, [(1, 1, 1, 1), (2, 0, 2, 0)], None) == ((2, 0, 2, 0), (0, 2, 3, 4))
