import itertools
import random

import pytest
from hypothesis import given

from divstage.core import Coloring, ResourceLimitError
from divstage.matching import MatchingStage
from divstage.matroid import GraphicMatroid, MatroidStage, UniformMatroid
from divstage.multistage import MultistageInstance, verify_sequence
from divstage.oracles import (BruteSolver, brute_colored_exact, brute_multistage, enumerate_solutions,
                              verify_representative)
from divstage.stpath import StPathStage
from divstage.voting import VotingStage

from graphs import cycle
from strategies import voting_stages

C4 = MatchingStage(4, tuple(cycle([0, 1, 2, 3])))


def direct_check(stage, fam, ell, outside=0):
    """Definition check by brute force over targets over the base set plus ``outside`` fresh elements."""
    n = stage.base_size
    universe = list(range(n + outside))
    targets = [frozenset(c) for r in range(len(universe) + 1) for c in itertools.combinations(universe, r)]
    fam = [frozenset(s) for s in fam]
    for s in map(frozenset, enumerate_solutions(stage)):
        for a in targets:
            if len(a ^ s) < ell:
                continue
            for b in targets:
                if len(b ^ s) >= ell and not any(len(a ^ h) >= ell and len(b ^ h) >= ell for h in fam):
                    return False
    return True


def test_enumeration_examples():
    assert enumerate_solutions(C4) == [(0, 2), (1, 3)]
    assert enumerate_solutions(VotingStage(3, (0, 1), 0, 0)) == [()]
    tri = MatroidStage(GraphicMatroid(3, ((0, 1), (1, 2), (0, 2))), (1, 1, 1), 0)
    assert enumerate_solutions(tri) == [(), (0,), (0, 1), (0, 2), (1,), (1, 2), (2,)]


def test_enumeration_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_solutions(VotingStage(25, (), 1, 0))
    with pytest.raises(ResourceLimitError):
        enumerate_solutions(VotingStage(5, (), 1, 0), cap=4)


def test_stpath_enumeration():
    stage = StPathStage(5, tuple(cycle([0, 1, 2, 3, 4])), 0, 2)
    assert enumerate_solutions(stage) == [(0, 1, 2), (0, 2, 3, 4)]


def test_anchor_colored_queries():
    assert brute_colored_exact(C4, Coloring((1, 2, 1, 2), 2), (2, 0)) == (0, 2)
    assert brute_colored_exact(C4, Coloring((1, 2, 1, 2), 2), (1, 1)) is None
    abc = VotingStage(3, (0, 0, 0, 1, 1, 2), 2, 5)
    assert brute_colored_exact(abc, Coloring((1, 1, 2), 4), (2, 0, 0, 0)) == (0, 1)
    path = StPathStage(3, ((0, 1), (1, 2)), 0, 2)
    assert brute_colored_exact(path, Coloring((1, 2, 1), 4), (2, 1, 0, 0)) == (0, 1, 2)
    assert brute_colored_exact(VotingStage(2, (), 1, 1), Coloring((1, 1), 4), (1, 0, 0, 0)) is None


def test_brute_solver_profiles():
    solver = BruteSolver()
    c = Coloring((1, 2, 1, 2), 2)
    assert solver.solve_profiles(C4, c, [(2, 0), (1, 1), (0, 2)]) == {(2, 0): (0, 2), (0, 2): (1, 3)}


def test_multistage_distance_bound():
    st_ = VotingStage(3, (0, 1, 2), 1, 1)
    assert brute_multistage(MultistageInstance((st_, st_), 3)) is None
    mi = MultistageInstance((st_, st_, st_), 2)
    seq = brute_multistage(mi)
    assert seq is not None and verify_sequence(mi, seq)


def test_own_family_is_representative():
    stage = VotingStage(5, (0, 1, 1, 2, 3, 4), 2, 2)
    assert verify_representative(stage, enumerate_solutions(stage), 2)


def test_empty_family_fails_when_solutions_exist():
    stage = VotingStage(3, (0,), 1, 1)
    assert not verify_representative(stage, [], 0)
    assert verify_representative(VotingStage(3, (), 1, 1), [], 2)


def test_a_single_singleton_is_not_enough():
    stage = VotingStage(4, (0, 1, 2, 3), 1, 1)
    assert not verify_representative(stage, [(0,)], 1)


def test_outside_targets_are_stronger():
    # one candidate: no inside target reaches distance 2, but two fresh labels do
    stage = VotingStage(1, (), 1, 0)
    assert enumerate_solutions(stage) == [(), (0,)]
    assert verify_representative(stage, [(0,)], 2, outside=False)
    assert direct_check(stage, [(0,)], 2, outside=0)
    assert not verify_representative(stage, [(0,)], 2, outside=True)
    assert not direct_check(stage, [(0,)], 2, outside=2)
    assert verify_representative(stage, [(), (0,)], 2, outside=True)


@pytest.mark.parametrize("seed", range(40))
def test_verifier_routes_agree_with_direct_check(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    stage = VotingStage(n, tuple(rng.randrange(n) for _ in range(rng.randint(0, 6))), rng.randint(0, n),
                        rng.randint(0, 3))
    sols = enumerate_solutions(stage)
    fam = rng.sample(sols, rng.randint(0, len(sols))) if sols else []
    ell = rng.randint(0, 3)
    for outside in (False, True):
        want = direct_check(stage, fam, ell, ell if outside else 0)
        assert verify_representative(stage, fam, ell, outside, method="brute") == want
        assert verify_representative(stage, fam, ell, outside, method="types") == want


@given(voting_stages())
def test_enumerated_solutions_are_feasible(stage):
    assert all(stage.is_feasible(s) for s in enumerate_solutions(stage))


def test_uniform_matroid_enumeration_count():
    stage = MatroidStage(UniformMatroid(6, 2), (0,) * 6, 0)
    assert len(enumerate_solutions(stage)) == 1 + 6 + 15
