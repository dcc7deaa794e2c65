"""Perfect-matching stages and the randomized s-colored exact perfect matching solver.

Decision: a colored Tutte-style matrix with random integer weights, whose
Pfaffian (recovered as the square root of its determinant) has, for each
color profile, a coefficient that is nonzero only if a perfect matching with
that profile exists.  Construction: edge-deletion self-reduction on top of
the decision procedure.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Sequence

from .core import (ColoredExactSolver, Coloring, ErrorBudget, PreconditionError, ResourceLimitError,
                   Solution, make_solution)
from .polyring import SparsePoly, bareiss_determinant, homogeneous_sqrt

log = logging.getLogger(__name__)

GAMMA_CAP = 2**62


@dataclass(frozen=True)
class MatchingStage:
    """Simple undirected graph on vertices ``0..n-1``; the base set is the edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]
    edge_colors: tuple[int, ...] | None = None
    kind: str = field(default="matching", init=False)

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"invalid edge {(u, v)} for n={self.n}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise PreconditionError("graph must be simple (duplicate edge)")
        object.__setattr__(self, "edges", tuple(norm))
        if self.edge_colors is not None and len(self.edge_colors) != len(norm):
            raise PreconditionError("edge_colors must have one entry per edge")

    @property
    def base_size(self) -> int:
        return len(self.edges)

    @property
    def labels(self) -> tuple[tuple[int, int], ...]:
        return self.edges

    def size_range(self) -> tuple[int, int]:
        return self.n // 2, self.n // 2

    def is_feasible(self, solution: Solution) -> bool:
        if self.n % 2:
            return False
        seen = set()
        for e in solution:
            u, v = self.edges[e]
            if u in seen or v in seen:
                return False
            seen.update((u, v))
        return len(seen) == self.n

    def coloring(self) -> Coloring:
        if self.edge_colors is None:
            raise PreconditionError("stage carries no edge colors")
        return Coloring(self.edge_colors, max(self.edge_colors, default=1))


@lru_cache(maxsize=4096)
@lru_cache(maxsize=1024)
def weight_range(n: int, p: Fraction) -> int:
    """``gamma = ceil(n / (2p))``: weights are drawn from ``1..gamma``."""
    p = Fraction(p)
    if not 0 < p <= 1:
        raise PreconditionError(f"a Monte-Carlo error probability must lie in (0, 1], got {p}")
    gamma = max(1, ceil(Fraction(n) / (2 * p)))
    if gamma > GAMMA_CAP:
        raise ResourceLimitError(f"error probability {p} needs weights beyond 2^62")
    return gamma


@lru_cache(maxsize=4096)
def _weights(m: int, gamma: int, seed: int) -> tuple[int, ...]:
    rng = random.Random(seed)
    return tuple(rng.randint(1, gamma) for _ in range(m))


def draw_weights(m: int, gamma: int, seed: int) -> list[int]:
    return list(_weights(m, gamma, seed))


def colored_tutte_matrix(n: int, colored_edges: Sequence[tuple[int, int, int, int]], s: int) -> list[list[SparsePoly]]:
    """Skew-symmetric matrix with ``a_ij = w_ij * y_q`` above the diagonal for an edge of color ``q``.

    ``colored_edges`` holds ``(u, v, color, weight)`` with ``u < v``.
    """
    zero = SparsePoly.zero(s)
    a = [[zero] * n for _ in range(n)]
    for u, v, q, w in colored_edges:
        entry = SparsePoly.variable(s, q - 1, w)
        a[u][v] = entry
        a[v][u] = -entry
    return a


def _components(vertices: Sequence[int], colored_edges: Sequence[tuple[int, int, int, int]]) -> list[list[int]]:
    parent = {v: v for v in vertices}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v, _, _ in colored_edges:
        parent[find(u)] = find(v)
    groups: dict[int, list[int]] = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def _peel_pendants(n: int, colored_edges: Sequence[tuple[int, int, int, int]]
                   ) -> tuple[set[int], list[tuple[int, int, int, int]], list[tuple[int, int]] | None]:
    """Strip degree-one vertices; each stripped edge ``uv`` contributes ``a_uv^2`` to ``det(A)``.

    Expanding along the row and then the column of a degree-one vertex leaves
    ``a_uv * a_vu * (-1) = a_uv^2`` times the determinant without ``u`` and ``v``.
    Returns the surviving vertices and edges and the stripped ``(color, weight)``
    pairs, or ``None`` for the latter when an isolated vertex makes the
    determinant zero.
    """
    alive = set(range(n))
    edges = list(colored_edges)
    peeled: list[tuple[int, int]] = []
    while True:
        deg = dict.fromkeys(alive, 0)
        for u, v, _, _ in edges:
            deg[u] += 1
            deg[v] += 1
        if 0 in deg.values():
            return alive, edges, None
        leaves = {v for v, d in deg.items() if d == 1}
        if not leaves:
            return alive, edges, peeled
        # several leaves at once: they are disjoint unless two leaves share an edge
        gone: set[int] = set()
        for u, v, q, w in edges:
            if (u in leaves or v in leaves) and u not in gone and v not in gone:
                peeled.append((q, w))
                gone.update((u, v))
        alive -= gone
        edges = [e for e in edges if e[0] not in gone and e[1] not in gone]


def _blocks(n: int, colored_edges: Sequence[tuple[int, int, int, int]]
            ) -> tuple[list[tuple[int, int]], list[tuple[int, tuple[tuple[int, int, int, int], ...]]]] | None:
    """Peeled entries and renumbered even components, or ``None`` when ``det(A) = 0`` is evident."""
    alive, edges, peeled = _peel_pendants(n, colored_edges)
    if peeled is None:
        return None
    blocks = []
    for comp in _components(sorted(alive), edges):
        if len(comp) % 2:
            return None
        pos = {v: i for i, v in enumerate(comp)}
        blocks.append((len(comp), tuple((pos[u], pos[v], q, w) for u, v, q, w in edges if u in pos)))
    return peeled, blocks


def _peeled_product(peeled: Sequence[tuple[int, int]], s: int, power: int) -> SparsePoly:
    """The monomial ``prod (w * y_q) ** power`` over the peeled edges."""
    exps = [0] * s
    coeff = 1
    for q, w in peeled:
        exps[q - 1] += power
        coeff *= w ** power
    return SparsePoly(s, {tuple(exps): coeff})


def block_determinant(n: int, colored_edges: Sequence[tuple[int, int, int, int]], s: int) -> SparsePoly:
    """``det(A)`` as the product of the determinants of its connected-component blocks.

    Pendant edges are split off first (see :func:`_peel_pendants`).
    Renumbering vertices component by component makes ``A`` block diagonal
    without changing the determinant; a block of odd order is skew-symmetric
    of odd order and so has determinant zero.
    """
    split = _blocks(n, colored_edges)
    if split is None:
        return SparsePoly.zero(s)
    peeled, blocks = split
    det = _peeled_product(peeled, s, 2)
    for order, sub in blocks:
        det = det * bareiss_determinant(colored_tutte_matrix(order, sub, s))
    return det


@lru_cache(maxsize=1 << 16)
def _block_root(order: int, s: int, colored_edges: tuple[tuple[int, int, int, int], ...]) -> SparsePoly:
    return homogeneous_sqrt(bareiss_determinant(colored_tutte_matrix(order, colored_edges, s)))


@lru_cache(maxsize=1 << 17)
def _pfaffian(n: int, s: int, colored_edges: tuple[tuple[int, int, int, int], ...]) -> SparsePoly:
    """Normalised square root of :func:`block_determinant`, one block at a time.

    Graded-lex order is multiplicative, so a product of roots with positive
    least coefficients again has a positive least coefficient: it is the
    normalised root of the product.  Blocks recur across edge deletions and
    are memoised on their renumbered edge lists.
    """
    split = _blocks(n, colored_edges)
    if split is None:
        return SparsePoly.zero(s)
    peeled, blocks = split
    root = _peeled_product(peeled, s, 1)
    for order, sub in blocks:
        root = root * _block_root(order, s, sub)
    return root


def pfaffian_polynomial(stage: MatchingStage, coloring: Coloring, budget: ErrorBudget,
                        edge_subset: Sequence[int] | None = None) -> tuple[SparsePoly, list[int]]:
    """The square root of ``det(A)`` for the weighted colored matrix, and the weights used."""
    weights = _weights(stage.base_size, weight_range(stage.n, budget.p), budget.seed)
    rows = _weighted_rows(stage, coloring, weights)
    idx = range(stage.base_size) if edge_subset is None else sorted(edge_subset)
    return _pfaffian(stage.n, coloring.s, tuple(rows[e] for e in idx)), list(weights)


def _weighted_rows(stage: MatchingStage, coloring: Coloring,
                   weights: Sequence[int]) -> list[tuple[int, int, int, int]]:
    return [(*uv, coloring[e], weights[e]) for e, uv in enumerate(stage.edges)]


def decide_colored_pm(stage: MatchingStage, coloring: Coloring, counts: Sequence[int], budget: ErrorBudget,
                      edge_subset: Sequence[int] | None = None) -> bool:
    """One run of the randomized decision procedure.

    ``True`` is always correct; ``False`` is wrong with probability at most
    ``budget.p`` on a yes-instance.
    """
    if len(counts) != coloring.s:
        raise PreconditionError("counts must have one entry per color")
    if stage.n % 2 or sum(counts) * 2 != stage.n or min(counts, default=0) < 0:
        return False
    if stage.n == 0:
        return True
    poly, _ = pfaffian_polynomial(stage, coloring, budget, edge_subset)
    return poly.coefficient(tuple(counts)) != 0


def _decided_without(stage: MatchingStage, coloring: Coloring, counts: Sequence[int], e: int,
                     kept: Sequence[int]) -> bool | None:
    """Outcome of deleting ``e`` when it follows from the coefficient alone, else ``None``.

    A color with count zero contributes no matching through ``e``, so the
    coefficient is unchanged (the previous test answered yes).  A color left
    with too few edges, or an uncovered vertex, makes it identically zero.
    """
    if counts[coloring[e] - 1] == 0:
        return True
    have = [0] * coloring.s
    covered = set()
    for f in kept:
        have[coloring[f] - 1] += 1
        covered.update(stage.edges[f])
    if any(h < c for h, c in zip(have, counts)) or len(covered) < stage.n:
        return False
    return None


@lru_cache(maxsize=1024)
def _shared(budget: ErrorBudget, parts: int) -> ErrorBudget:
    return budget.share(parts)


def extract_colored_pm(stage: MatchingStage, coloring: Coloring, counts: Sequence[int],
                       budget: ErrorBudget) -> Solution | None:
    """Find a perfect matching with the given color counts by edge deletion."""
    m = stage.base_size
    call = _shared(budget, m + 1)
    if not decide_colored_pm(stage, coloring, counts, call):
        return None
    rows = _weighted_rows(stage, coloring, _weights(m, weight_range(stage.n, call.p), call.seed))
    target = tuple(counts)
    pinned: list[int] = []
    remaining = list(range(m))
    for e in range(m):
        remaining.remove(e)
        # pinned edges stay in every later test instance; pinned < e < remaining keeps the order sorted
        kept = pinned + remaining
        forced = _decided_without(stage, coloring, counts, e, kept)
        if forced is None:
            forced = _pfaffian(stage.n, coloring.s, tuple(rows[f] for f in kept)).coefficient(target) != 0
        if not forced:
            pinned.append(e)
    sol = make_solution(pinned)
    if not stage.is_feasible(sol) or coloring.profile(sol) != tuple(counts):
        # only reachable after a false "no" pinned a superfluous edge
        log.debug("self-reduction ended on a non-matching; reporting no")
        return None
    return sol


class MatchingSolver(ColoredExactSolver):
    deterministic = False

    def solve(self, stage, coloring, counts, budget):
        return extract_colored_pm(stage, coloring, counts, budget)
