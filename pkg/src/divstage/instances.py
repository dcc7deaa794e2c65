"""Seeded random multistage instances and the independent-set reduction.

Parameter ranges accepted by :func:`generate` (all kinds take ``tau``,
``ell`` and ``n``; ``n`` is the base-set size except where noted):

==========  ===================================================================
voting      ``n`` candidates (1..60), ``agents`` (default ``2 n``), ``k``
            (default ``n // 2``), ``abstain`` probability (default 0.1),
            ``x`` absolute or ``x_frac`` of the best reachable score
matroid     ``type`` in {graphic, uniform, partition}; graphic: ``vertices``
            (2..8) and ``density``; uniform: ``n`` and ``rank``; partition:
            ``n`` and ``blocks``; weights in ``0..max_weight``; ``x_frac``
matching    ``n`` vertices (even, 2..12), ``density``; graphs start from a
            random perfect matching with probability ``planted`` (0.7)
stpath      ``n`` vertices (2..12), ``density``, ``bounded_width`` with
            ``width_cap``: every stage then passes the decomposition check
vertexcover ``n`` vertices (1..10), ``density``, ``k``
==========  ===================================================================
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping

import networkx as nx

from .core import PreconditionError, Solution
from .matching import MatchingStage
from .matroid import GraphicMatroid, MatroidStage, PartitionMatroid, UniformMatroid
from .multistage import MultistageInstance
from .stpath import StPathStage
from .treedec import DEFAULT_WIDTH_CAP, WidthCapExceeded, nice_decomposition
from .voting import VotingStage

KINDS = ("voting", "matroid", "matching", "stpath", "vertexcover")
MAX_TAU = 12
MAX_ELL = 20


@dataclass(frozen=True)
class VertexCoverStage:
    """Vertex covers of size at most ``k``.  There is no colored solver for this kind."""

    n: int
    edges: tuple[tuple[int, int], ...]
    k: int
    vertex_labels: tuple[Hashable, ...] | None = None
    kind: str = field(default="vertexcover", init=False)

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"invalid edge {(u, v)} for n={self.n}")
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(set(norm))))
        if self.k < 0:
            raise PreconditionError("k must be non-negative")

    @property
    def base_size(self) -> int:
        return self.n

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return self.vertex_labels if self.vertex_labels is not None else tuple(range(self.n))

    def size_range(self) -> tuple[int, int]:
        return 0, min(self.k, self.n)

    def is_feasible(self, solution: Solution) -> bool:
        cover = set(solution)
        return len(cover) <= self.k and all(u in cover or v in cover for u, v in self.edges)


def _param(params: Mapping[str, Any], name: str, default, lo=None, hi=None):
    value = params.get(name, default)
    if lo is not None and value < lo or hi is not None and value > hi:
        raise PreconditionError(f"parameter {name}={value} outside [{lo}, {hi}]")
    return value


def _random_edges(rng: random.Random, n: int, density: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]


def _voting_stages(rng: random.Random, params, tau: int) -> list[VotingStage]:
    n = _param(params, "n", 6, 1, 60)
    agents = _param(params, "agents", 2 * n, 0, 10_000)
    k = _param(params, "k", max(1, n // 2), 0, n)
    abstain = _param(params, "abstain", 0.1, 0.0, 1.0)
    out = []
    for _ in range(tau):
        votes = tuple(None if rng.random() < abstain else rng.randrange(n) for _ in range(agents))
        best = sum(sorted((votes.count(c) for c in range(n)), reverse=True)[:k])
        x = params.get("x")
        if x is None:
            x = int(best * _param(params, "x_frac", rng.random(), 0.0, 1.0))
        out.append(VotingStage(n, votes, k, x))
    return out


def _matroid_stages(rng: random.Random, params, tau: int) -> list[MatroidStage]:
    kind = params.get("type", "graphic")
    max_weight = _param(params, "max_weight", 3, 0, 1000)
    out = []
    for _ in range(tau):
        if kind == "graphic":
            n = _param(params, "vertices", 4, 2, 8)
            # every stage lives on the complete graph's edge namespace
            edges = _random_edges(rng, n, _param(params, "density", 0.6, 0.0, 1.0))
            size = _param(params, "max_edges", 8, 1, 28)
            edges = sorted(rng.sample(edges, min(size, len(edges))))
            oracle = GraphicMatroid(n, tuple(edges))
            labels = tuple(edges)
        elif kind == "uniform":
            n = _param(params, "n", 6, 1, 20)
            oracle = UniformMatroid(n, _param(params, "rank", max(1, n // 2), 0, n))
            labels = None
        elif kind == "partition":
            n = _param(params, "n", 6, 1, 20)
            blocks = _param(params, "blocks", min(2, n), 1, n)
            block = tuple(rng.randrange(blocks) for _ in range(n))
            caps = tuple(rng.randint(0, max(1, block.count(b))) for b in range(blocks))
            oracle = PartitionMatroid(block, caps)
            labels = None
        else:
            raise PreconditionError(f"unknown matroid type {kind!r}")
        weights = tuple(rng.randint(0, max_weight) for _ in range(oracle.size))
        best = sum(weights[e] for e in _greedy_max(oracle, weights))
        x = params.get("x")
        if x is None:
            x = int(best * _param(params, "x_frac", rng.random(), 0.0, 1.0))
        out.append(MatroidStage(oracle, weights, x, labels))
    return out


def _greedy_max(oracle, weights) -> list[int]:
    chosen: list[int] = []
    for e in sorted(range(oracle.size), key=lambda e: (-weights[e], e)):
        if oracle.is_independent(chosen + [e]):
            chosen.append(e)
    return chosen


def _matching_stages(rng: random.Random, params, tau: int) -> list[MatchingStage]:
    n = _param(params, "n", 6, 2, 12)
    if n % 2:
        raise PreconditionError(f"matching stages need an even vertex count, got n={n}")
    density = _param(params, "density", 0.4, 0.0, 1.0)
    planted = _param(params, "planted", 0.7, 0.0, 1.0)
    max_edges = _param(params, "max_edges", 10**6, 1, 10**6)
    out = []
    for _ in range(tau):
        edges = set(_random_edges(rng, n, density))
        if rng.random() < planted:
            perm = list(range(n))
            rng.shuffle(perm)
            must = {tuple(sorted(perm[i:i + 2])) for i in range(0, n, 2)}
            rest = sorted(edges - must)
            rng.shuffle(rest)
            edges = must | set(rest[:max(0, max_edges - len(must))])
        else:
            edges = set(sorted(edges)[:max_edges]) if len(edges) > max_edges else edges
        out.append(MatchingStage(n, tuple(sorted(edges))))
    return out


def _stpath_stages(rng: random.Random, params, tau: int) -> list[StPathStage]:
    n = _param(params, "n", 6, 2, 12)
    density = _param(params, "density", 0.4, 0.0, 1.0)
    bounded = bool(params.get("bounded_width", False))
    cap = _param(params, "width_cap", DEFAULT_WIDTH_CAP, 1, 64)
    out = []
    for _ in range(tau):
        for _attempt in range(200):
            stage = StPathStage(n, tuple(_random_edges(rng, n, density)), 0, n - 1)
            if not bounded or _width_ok(stage, cap):
                break
        else:
            # a path through all vertices has augmented width at most 3
            stage = StPathStage(n, tuple((i, i + 1) for i in range(n - 1)), 0, n - 1)
        out.append(stage)
    return out


def _width_ok(stage: StPathStage, cap: int) -> bool:
    try:
        nice_decomposition(stage.adjacency(), (stage.s, stage.t), cap)
    except WidthCapExceeded:
        return False
    return True


def _vertexcover_stages(rng: random.Random, params, tau: int) -> list[VertexCoverStage]:
    n = _param(params, "n", 5, 1, 10)
    density = _param(params, "density", 0.4, 0.0, 1.0)
    k = _param(params, "k", max(1, n // 2), 0, n)
    return [VertexCoverStage(n, tuple(_random_edges(rng, n, density)), k) for _ in range(tau)]


_BUILDERS = {"voting": _voting_stages, "matroid": _matroid_stages, "matching": _matching_stages,
             "stpath": _stpath_stages, "vertexcover": _vertexcover_stages}


def generate(kind: str, params: Mapping[str, Any] | None = None, seed: int = 0) -> MultistageInstance:
    """Deterministic in ``(kind, params, seed)``."""
    if kind not in _BUILDERS:
        raise PreconditionError(f"unknown kind {kind!r}; expected one of {KINDS}")
    params = dict(params or {})
    tau = _param(params, "tau", 2, 1, MAX_TAU)
    ell = _param(params, "ell", 1, 0, MAX_ELL)
    rng = random.Random(f"{kind}:{seed}")
    return MultistageInstance(tuple(_BUILDERS[kind](rng, params, tau)), ell)


def reduce_is_to_dmvc(g: nx.Graph, k: int) -> MultistageInstance:
    """Independent set of size ``k`` in ``g`` to a two-stage diverse vertex cover instance.

    Vertices are relabeled ``0..n-1`` in sorted order and the apex gets ``n``.
    The first stage is the complete graph on all ``n + 1`` vertices, the
    second is ``g`` plus the apex joined to every vertex; covers have size at
    most ``n`` and consecutive covers must differ in at least ``k + 1`` vertices.
    """
    if k <= 1:
        raise PreconditionError("the reduction assumes k > 1")
    verts = sorted(g.nodes)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    apex = n
    clique = tuple((u, v) for u in range(n + 1) for v in range(u + 1, n + 1))
    second = tuple(sorted({(min(idx[a], idx[b]), max(idx[a], idx[b])) for a, b in g.edges if a != b}
                          | {(v, apex) for v in range(n)}))
    return MultistageInstance((VertexCoverStage(n + 1, clique, n), VertexCoverStage(n + 1, second, n)), k + 1)


def has_independent_set(g: nx.Graph, k: int) -> bool:
    """Brute force; for checking the reduction on small graphs."""
    verts = sorted(g.nodes)
    for cand in itertools.combinations(verts, k):
        if not any(g.has_edge(a, b) for a, b in itertools.combinations(cand, 2)):
            return True
    return False

