"""Matroid stages: independence oracles, weighted matroid intersection and the colored solver.

Spanning forests are graphic-matroid stages with unit weights and
``x = n - components``, so only spanning forests reach the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .core import (ColoredExactSolver, Coloring, ErrorBudget, PreconditionError, Solution, SolverContractError,
                   make_solution)


class MatroidOracle:
    """Black-box independence predicate on the ground set ``0..size-1``."""

    size: int

    def is_independent(self, subset: Iterable[int]) -> bool:
        raise NotImplementedError

    def independent_mask(self, mask: int) -> bool:
        """``is_independent`` on the set whose bit ``i`` is set for element ``i``."""
        return self.is_independent(_bits(mask))

    def exchange(self, current: int) -> tuple[tuple[tuple[int, int], ...], tuple[int, ...]]:
        """Swaps ``(y, x)`` with ``current - y + x`` independent, and additions ``x`` with ``current + x`` independent."""
        return _generic_exchange(_independence_test(self), self.size, current)

    def rank(self) -> int:
        # greedy basis; every basis has the same size
        basis: list[int] = []
        for x in range(self.size):
            if self.is_independent(basis + [x]):
                basis.append(x)
        return len(basis)


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@lru_cache(maxsize=1 << 16)
def _cached_independent(oracle: "MatroidOracle", mask: int) -> bool:
    return oracle.is_independent(_bits(mask))


def _independence_test(oracle: MatroidOracle):
    """Mask predicate for ``oracle``, memoized when the oracle is hashable."""
    if type(oracle).independent_mask is not MatroidOracle.independent_mask:
        return oracle.independent_mask
    try:
        hash(oracle)
    except TypeError:
        return oracle.independent_mask
    return lambda mask: _cached_independent(oracle, mask)


def _generic_exchange(indep, size: int, current: int) -> tuple[tuple[tuple[int, int], ...], tuple[int, ...]]:
    inside = [y for y in range(size) if current >> y & 1]
    outside = [x for x in range(size) if not current >> x & 1]
    swaps = tuple((y, x) for y in inside for x in outside if indep((current & ~(1 << y)) | 1 << x))
    adds = tuple(x for x in outside if indep(current | 1 << x))
    return swaps, adds


@lru_cache(maxsize=1 << 15)
def _cached_exchange(oracle: "MatroidOracle", current: int):
    return _generic_exchange(_independence_test(oracle), oracle.size, current)


def _exchange_source(oracle: MatroidOracle):
    if type(oracle).exchange is not MatroidOracle.exchange:
        return oracle.exchange
    try:
        hash(oracle)
    except TypeError:
        return oracle.exchange
    return lambda current: _cached_exchange(oracle, current)


@dataclass(frozen=True)
class UniformMatroid(MatroidOracle):
    size: int
    k: int

    def is_independent(self, subset: Iterable[int]) -> bool:
        return len(set(subset)) <= self.k

    def independent_mask(self, mask: int) -> bool:
        return mask.bit_count() <= self.k


@dataclass(frozen=True)
class PartitionMatroid(MatroidOracle):
    """``block[x]`` is the block index of element ``x``; at most ``capacities[b]`` per block."""

    block: tuple[int, ...]
    capacities: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= b < len(self.capacities) for b in self.block):
            raise PreconditionError("block index without a capacity")
        if any(r < 0 for r in self.capacities):
            raise PreconditionError("capacities must be non-negative")
        masks = [0] * len(self.capacities)
        for x, b in enumerate(self.block):
            masks[b] |= 1 << x
        object.__setattr__(self, "_block_masks", tuple(masks))

    @property
    def size(self) -> int:
        return len(self.block)

    def is_independent(self, subset: Iterable[int]) -> bool:
        used = [0] * len(self.capacities)
        for x in set(subset):
            b = self.block[x]
            used[b] += 1
            if used[b] > self.capacities[b]:
                return False
        return True

    def independent_mask(self, mask: int) -> bool:
        for bm, cap in zip(self._block_masks, self.capacities):
            if (mask & bm).bit_count() > cap:
                return False
        return True

    def exchange(self, current: int):
        # for independent ``current``: a swap is blocked only by a full block of ``x`` not containing ``y``
        full = [(current & bm).bit_count() >= cap for bm, cap in zip(self._block_masks, self.capacities)]
        if not self.independent_mask(current):
            return super().exchange(current)
        size, block = self.size, self.block
        inside = [y for y in range(size) if current >> y & 1]
        outside = [x for x in range(size) if not current >> x & 1]
        swaps = tuple((y, x) for y in inside for x in outside if not full[block[x]] or block[x] == block[y])
        adds = tuple(x for x in outside if not full[block[x]])
        return swaps, adds


@dataclass(frozen=True)
class GraphicMatroid(MatroidOracle):
    """Cycle matroid of a multigraph; element ``i`` is ``edges[i]``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.edges)

    def is_independent(self, subset: Iterable[int]) -> bool:
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in set(subset):
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


def _lex_shortest_path(n_nodes: int, sources: list[int], sinks: set[int], arcs: list[list[int]],
                       length: list[int]) -> list[int] | None:
    """Path from a source to a sink minimizing (total vertex length, number of arcs).

    Bellman-Ford over lexicographic keys; the exchange graph of an extreme
    common independent set has no negative cycles.
    """
    INF = None
    dist: list[tuple[int, int] | None] = [INF] * n_nodes
    pred = [-1] * n_nodes
    for v in sources:
        dist[v] = (length[v], 0)
    for _ in range(n_nodes):
        changed = False
        for u in range(n_nodes):
            du = dist[u]
            if du is None:
                continue
            for v in arcs[u]:
                cand = (du[0] + length[v], du[1] + 1)
                if dist[v] is None or cand < dist[v]:
                    dist[v] = cand
                    pred[v] = u
                    changed = True
        if not changed:
            break
    best = None
    for v in sorted(sinks):
        if dist[v] is not None and (best is None or dist[v] < dist[best]):
            best = v
    if best is None:
        return None
    path = [best]
    seen = {best}
    while pred[path[-1]] != -1 and dist[path[-1]][1] > 0:
        prev = pred[path[-1]]
        if prev in seen:
            raise SolverContractError("negative cycle in the exchange graph: oracle is not a matroid")
        seen.add(prev)
        path.append(prev)
    return path[::-1]


def weighted_matroid_intersection(m1: MatroidOracle, m2: MatroidOracle, weights: Sequence[int],
                                  target_size: int) -> Solution | None:
    """Maximum-weight set of exactly ``target_size`` elements independent in both matroids."""
    size = m1.size
    if m2.size != size or len(weights) != size:
        raise PreconditionError("matroids and weights must share one ground set")
    if target_size < 0:
        raise PreconditionError("target size must be non-negative")
    exch1, exch2 = _exchange_source(m1), _exchange_source(m2)
    indep1, indep2 = _independence_test(m1), _independence_test(m2)
    current = 0
    while current.bit_count() < target_size:
        swaps1, adds1 = exch1(current)
        swaps2, adds2 = exch2(current)
        arcs: list[list[int]] = [[] for _ in range(size)]
        for y, x in swaps1:
            arcs[y].append(x)
        for y, x in swaps2:
            arcs[x].append(y)
        sources = list(adds1)
        sinks = set(adds2)
        length = [weights[x] if current >> x & 1 else -weights[x] for x in range(size)]
        path = _lex_shortest_path(size, sources, sinks, arcs, length)
        if path is None:
            return None
        for x in path:
            current ^= 1 << x
        if not (indep1(current) and indep2(current)):
            raise SolverContractError("augmentation left the common independent sets")
    return make_solution(_bits(current))


@dataclass(frozen=True)
class MatroidStage:
    oracle: MatroidOracle
    weights: tuple[int, ...]
    x: int
    element_labels: tuple[Hashable, ...] | None = None
    kind: str = field(default="matroid", init=False)

    def __post_init__(self):
        if len(self.weights) != self.oracle.size:
            raise PreconditionError("one weight per ground-set element")
        if any(w < 0 for w in self.weights):
            raise PreconditionError("weights must be non-negative")
        if self.element_labels is not None and len(self.element_labels) != self.oracle.size:
            raise PreconditionError("one label per ground-set element")

    @property
    def base_size(self) -> int:
        return self.oracle.size

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return self.element_labels if self.element_labels is not None else tuple(range(self.oracle.size))

    def size_range(self) -> tuple[int, int]:
        return 0, self.oracle.rank()

    def is_feasible(self, solution: Solution) -> bool:
        return self.oracle.is_independent(solution) and sum(self.weights[e] for e in solution) >= self.x


def spanning_forest_stage(n: int, edges: Sequence[tuple[int, int]],
                          element_labels: Sequence[Hashable] | None = None) -> MatroidStage:
    oracle = GraphicMatroid(n, tuple((int(u), int(v)) for u, v in edges))
    rank = oracle.rank()
    labels = tuple(element_labels) if element_labels is not None else None
    return MatroidStage(oracle, (1,) * oracle.size, rank, labels)


@lru_cache(maxsize=4096)
def _heaviest_independent(stage: MatroidStage, size: int) -> float:
    """Largest weight of an independent set of ``size`` elements, ignoring colors (greedy is exact)."""
    indep = _independence_test(stage.oracle)
    chosen, total = 0, 0
    for e in sorted(range(stage.base_size), key=lambda e: -stage.weights[e]):
        if chosen.bit_count() == size:
            break
        if indep(chosen | 1 << e):
            chosen |= 1 << e
            total += stage.weights[e]
    return total if chosen.bit_count() == size else float("-inf")


def _colored_best(stage: MatroidStage, coloring: Coloring, counts: Sequence[int]) -> Solution | bool:
    """Heaviest common independent set with profile ``counts`` if it reaches ``x``.

    ``False`` means no independent set has that profile at all, ``True``
    that some do but all fall below ``x``.
    """
    if any(c > z for c, z in zip(counts, coloring.class_sizes())):
        return False
    if _heaviest_independent(stage, sum(counts)) < stage.x:
        return True
    # the heaviest counts[i] elements of every class: nothing with this profile weighs more
    classes: list[list[int]] = [[] for _ in counts]
    for e, c in enumerate(coloring.colors):
        classes[c - 1].append(e)
    top = [e for members, c in zip(classes, counts)
           for e in sorted(members, key=lambda e: -stage.weights[e])[:c]]
    if sum(stage.weights[e] for e in top) < stage.x:
        return True
    if _independence_test(stage.oracle)(sum(1 << e for e in top)):
        return make_solution(top)
    bound = PartitionMatroid(tuple(c - 1 for c in coloring.colors), tuple(counts))
    best = weighted_matroid_intersection(stage.oracle, bound, stage.weights, sum(counts))
    if best is None:
        return False
    return best if sum(stage.weights[e] for e in best) >= stage.x else True


def _check_shapes(stage: MatroidStage, coloring: Coloring, counts: Sequence[int]) -> None:
    if len(coloring) != stage.base_size:
        raise PreconditionError("coloring must cover the ground set")
    if len(counts) != coloring.s:
        raise PreconditionError("counts must have one entry per color")


def solve_colored_matroid(stage: MatroidStage, coloring: Coloring, counts: Sequence[int],
                          _budget: ErrorBudget | None = None) -> Solution | None:
    _check_shapes(stage, coloring, counts)
    best = _colored_best(stage, coloring, counts)
    return None if isinstance(best, bool) else best


class MatroidSolver(ColoredExactSolver):
    deterministic = True

    def solve(self, stage, coloring, counts, budget):
        return solve_colored_matroid(stage, coloring, counts, budget)

    def solve_profiles(self, stage, coloring, profiles, budget):
        rank = stage.oracle.rank()
        found = {}
        # independent sets are closed under subsets: a profile above an unrealizable one is unrealizable
        dead: list[tuple[int, ...]] = []
        for counts in sorted(map(tuple, profiles), key=sum):
            _check_shapes(stage, coloring, counts)
            if sum(counts) > rank or any(all(a >= b for a, b in zip(counts, d)) for d in dead):
                continue
            best = _colored_best(stage, coloring, counts)
            if best is False:
                dead.append(counts)
            elif best is not True:
                found[counts] = best
        return found
