import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divstage.core import Coloring, PreconditionError, count_vectors
from divstage.matroid import (GraphicMatroid, MatroidSolver, MatroidStage, PartitionMatroid, UniformMatroid,
                              solve_colored_matroid, spanning_forest_stage, weighted_matroid_intersection)
from divstage.oracles import enumerate_solutions
from divstage.voting import solve_colored_voting

from matroid_oracles import augmentation_holds, brute_intersection, matroid_violations, random_oracle
from strategies import voting_stages


@pytest.mark.parametrize("oracle", [
    UniformMatroid(10, 4), UniformMatroid(10, 0), UniformMatroid(10, 10),
    PartitionMatroid((0, 0, 1, 1, 1, 2, 2, 3, 3, 3), (1, 2, 0, 3)),
    GraphicMatroid(6, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 5), (1, 4), (0, 1))),
    GraphicMatroid(5, tuple(itertools.combinations(range(5), 2))),
], ids=["U4", "U0", "U10", "partition", "graphic-multi", "K5"])
def test_axioms_exhaustive_at_ten(oracle):
    assert oracle.size == 10
    assert matroid_violations(oracle) == []
    assert augmentation_holds(oracle, random.Random(0))


def test_axiom_checker_catches_a_non_matroid():
    class TwoBases:
        size = 4

        def is_independent(self, xs):
            xs = set(xs)
            return xs <= {0, 1} or xs <= {2} or xs <= {3}

    assert matroid_violations(TwoBases())


def test_target_zero():
    m = UniformMatroid(3, 2)
    assert weighted_matroid_intersection(m, m, (5, 3, 1), 0) == ()


def test_uniform_rank_two_prefers_heavy_pair():
    m = UniformMatroid(3, 2)
    got = weighted_matroid_intersection(m, m, (5, 3, 1), 2)
    assert got == (0, 1)
    assert weighted_matroid_intersection(m, m, (5, 3, 1), 3) is None


def test_triangle_against_singleton_blocks():
    tri = GraphicMatroid(3, ((0, 1), (1, 2), (0, 2)))
    blocks = PartitionMatroid((0, 1, 2), (1, 1, 1))
    assert weighted_matroid_intersection(tri, blocks, (1, 1, 1), 3) is None
    assert len(weighted_matroid_intersection(tri, blocks, (1, 1, 1), 2)) == 2


def test_path_spanning_tree():
    stage = MatroidStage(GraphicMatroid(3, ((0, 1), (1, 2))), (1, 1), 2, ("ab", "bc"))
    assert solve_colored_matroid(stage, Coloring((1, 2), 4), (1, 1, 0, 0)) == (0, 1)


def test_counts_beyond_class_size():
    stage = MatroidStage(UniformMatroid(3, 3), (1, 1, 1), 0)
    assert solve_colored_matroid(stage, Coloring((1, 1, 2), 4), (0, 2, 0, 0)) is None


def test_spanning_forest_stage_threshold():
    stage = spanning_forest_stage(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert stage.x == 3
    forests = enumerate_solutions(stage)
    assert forests and all(len(f) == 3 for f in forests)
    assert (0, 1, 2) not in forests


def test_rejects_bad_weights():
    with pytest.raises(PreconditionError):
        MatroidStage(UniformMatroid(2, 1), (1,), 0)
    with pytest.raises(PreconditionError):
        MatroidStage(UniformMatroid(2, 1), (1, -1), 0)


@pytest.mark.parametrize("seed", range(40))
def test_intersection_matches_brute_force(seed):
    rng = random.Random(seed)
    size = rng.randint(1, 9)
    m1, m2 = random_oracle(rng, size), random_oracle(rng, size)
    weights = tuple(rng.randint(0, 6) for _ in range(size))
    for target in range(size + 1):
        got = weighted_matroid_intersection(m1, m2, weights, target)
        want = brute_intersection(m1, m2, weights, target)
        if want is None:
            assert got is None
        else:
            assert got is not None and len(got) == target
            assert m1.is_independent(got) and m2.is_independent(got)
            assert sum(weights[x] for x in got) == want


@pytest.mark.parametrize("seed", range(20))
def test_colored_solver_profile_and_independence(seed):
    rng = random.Random(seed)
    size = rng.randint(1, 8)
    oracle = random_oracle(rng, size)
    stage = MatroidStage(oracle, tuple(rng.randint(0, 4) for _ in range(size)), rng.randint(0, 6))
    c = Coloring(tuple(rng.randint(1, 4) for _ in range(size)), 4)
    sols = enumerate_solutions(stage)
    table = MatroidSolver().solve_profiles(stage, c, list(count_vectors(c.class_sizes(), size)), None)
    for counts in count_vectors(c.class_sizes(), size):
        got = solve_colored_matroid(stage, c, counts)
        exists = any(c.profile(s) == counts for s in sols)
        assert (got is not None) == exists == (counts in table)
        if got is not None:
            assert c.profile(got) == counts and stage.is_feasible(got)


@given(st.data())
def test_uniform_encoding_reproduces_voting(data):
    vote = data.draw(voting_stages(max_candidates=6, max_agents=10))
    n = vote.n_candidates
    as_matroid = MatroidStage(UniformMatroid(n, vote.k), tuple(vote.scores()), vote.x)
    c = Coloring(tuple(data.draw(st.lists(st.integers(1, 4), min_size=n, max_size=n))), 4)
    for counts in count_vectors(c.class_sizes(), n):
        a = solve_colored_voting(vote, c, counts)
        b = solve_colored_matroid(as_matroid, c, counts)
        assert (a is None) == (b is None)
