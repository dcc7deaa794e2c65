"""Hypothesis strategies for small stages."""

from hypothesis import strategies as st

from divstage.core import Coloring
from divstage.voting import VotingStage


@st.composite
def voting_stages(draw, max_candidates=8, max_agents=14):
    n = draw(st.integers(1, max_candidates))
    votes = draw(st.lists(st.one_of(st.none(), st.integers(0, n - 1)), max_size=max_agents))
    k = draw(st.integers(0, n))
    x = draw(st.integers(0, len(votes) + 1))
    return VotingStage(n, tuple(votes), k, x)


@st.composite
def colorings(draw, n, s=4):
    return Coloring(tuple(draw(st.lists(st.integers(1, s), min_size=n, max_size=n))), s)
