"""Exponential-time ground truth: solution enumeration, brute-force solvers and verifiers."""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import networkx as nx

from .core import ColoredExactSolver, Coloring, PreconditionError, ResourceLimitError, Solution, make_solution

ENUMERATION_CAP = 20
VERIFY_CAP = 8
TYPE_VERIFY_CAP = 2_000_000


def _subsets(n: int, max_size: int | None = None) -> Iterable[Solution]:
    top = n if max_size is None else min(n, max_size)
    for k in range(top + 1):
        yield from itertools.combinations(range(n), k)


def _perfect_matchings(n: int, edges: Sequence[tuple[int, int]]) -> list[Solution]:
    if n % 2:
        return []
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
    for i, (u, v) in enumerate(edges):
        incident[u].append((i, v))
        incident[v].append((i, u))
    out = []

    def rec(free: frozenset[int], chosen: list[int]):
        if not free:
            out.append(make_solution(chosen))
            return
        v = min(free)
        for i, w in incident[v]:
            if w in free and w != v:
                chosen.append(i)
                rec(free - {v, w}, chosen)
                chosen.pop()

    rec(frozenset(range(n)), [])
    return out


def enumerate_solutions(stage, cap: int = ENUMERATION_CAP) -> list[Solution]:
    """All feasible solutions, sorted."""
    if stage.base_size > cap:
        raise ResourceLimitError(f"base set of size {stage.base_size} exceeds the enumeration cap {cap}")
    kind = stage.kind
    if kind == "matching":
        sols = _perfect_matchings(stage.n, stage.edges)
    elif kind == "stpath":
        g = stage.graph()
        sols = list({make_solution(p) for p in nx.all_simple_paths(g, stage.s, stage.t)})
    elif kind == "voting":
        sols = [c for c in _subsets(stage.n_candidates, stage.k) if stage.is_feasible(c)]
    elif kind == "vertexcover":
        sols = [c for c in _subsets(stage.n, stage.k) if stage.is_feasible(c)]
    elif kind == "matroid":
        sols = [c for c in _subsets(stage.base_size) if stage.is_feasible(c)]
    else:
        raise PreconditionError(f"unknown stage kind {kind!r}")
    return sorted(sols)


def brute_colored_exact(stage, coloring: Coloring, counts: Sequence[int]) -> Solution | None:
    want = tuple(counts)
    for sol in enumerate_solutions(stage):
        if coloring.profile(sol) == want:
            return sol
    return None


class BruteSolver(ColoredExactSolver):
    """Enumeration-backed colored exact solver (any stage kind, small base sets)."""

    deterministic = True

    def __init__(self, cap: int = ENUMERATION_CAP):
        self.cap = cap
        self._cache: dict[int, tuple[object, list[Solution]]] = {}

    def _all(self, stage) -> list[Solution]:
        hit = self._cache.get(id(stage))
        if hit is None or hit[0] is not stage:
            hit = (stage, enumerate_solutions(stage, self.cap))
            self._cache[id(stage)] = hit
        return hit[1]

    def solve(self, stage, coloring, counts, budget=None):
        want = tuple(counts)
        return next((s for s in self._all(stage) if coloring.profile(s) == want), None)

    def solve_profiles(self, stage, coloring, profiles, budget=None):
        wanted = set(map(tuple, profiles))
        found = {}
        for sol in self._all(stage):
            prof = coloring.profile(sol)
            if prof in wanted and prof not in found:
                found[prof] = sol
        return found


def brute_multistage(mi) -> list[Solution] | None:
    """Layered reachability over the complete solution sets."""
    from .multistage import chain_families
    return chain_families(mi.stages, [enumerate_solutions(st) for st in mi.stages], mi.ell)


# -- representative verification ---------------------------------------------


def _far_masks(members: Sequence[frozenset[int]], universe: int, ell: int, outside: int) -> set[int]:
    """For every ``A`` over the base set plus ``outside`` fresh elements, the members it is ``ell``-far from."""
    masks = set()
    for extra in range(outside + 1):
        for bits in range(1 << universe):
            a = {x for x in range(universe) if bits >> x & 1}
            mask = 0
            for j, m in enumerate(members):
                if len(a ^ m) + extra >= ell:
                    mask |= 1 << j
            masks.add(mask)
    return masks


def _fails(masks: set[int], k: int) -> bool:
    """Some ``A``, ``B`` far from the probe (bit ``k``) share no far family member."""
    far = list({m & ((1 << k) - 1) for m in masks if m >> k & 1})
    for i, x in enumerate(far):
        for y in far[i:]:
            if not x & y:
                return True
    return False


def verify_representative(stage, fam, ell: int, outside: bool = True, solutions: Sequence[Solution] | None = None,
                          method: str = "auto") -> bool:
    """Definition check against every solution and every pair of target sets.

    Targets range over subsets of the base set, plus up to ``ell`` elements
    outside it when ``outside`` is set (other stages' solutions may use
    labels this stage does not have).  ``method="brute"`` enumerates targets
    directly (base sets up to 8 elements); ``"types"`` counts targets by
    their intersection pattern with the sets involved, which scales to
    larger base sets.
    """
    members = [frozenset(s) for s in (fam.solutions if hasattr(fam, "solutions") else fam)]
    sols = list(solutions) if solutions is not None else enumerate_solutions(stage)
    pad = ell if outside else 0
    if method == "auto":
        method = "brute" if stage.base_size <= VERIFY_CAP else "types"
    if method == "brute":
        if stage.base_size > VERIFY_CAP:
            raise ResourceLimitError(f"brute verification capped at {VERIFY_CAP} elements")
        k = len(members)
        for s in sols:
            if _fails(_far_masks(members + [frozenset(s)], stage.base_size, ell, pad), k):
                return False
        return True
    if method == "types":
        return all(_types_ok(members, frozenset(s), stage.base_size, ell, pad) for s in sols)
    raise PreconditionError(f"unknown verification method {method!r}")


def _types_ok(members: list[frozenset[int]], probe: frozenset[int], universe: int, ell: int, pad: int) -> bool:
    sets = members + [probe]
    k = len(members)
    classes: dict[tuple[bool, ...], int] = {}
    for x in range(universe):
        sig = tuple(x in m for m in sets)
        classes[sig] = classes.get(sig, 0) + 1
    sigs = list(classes)
    sizes = [len(m) for m in sets]
    work = 1
    for sig in sigs:
        work *= classes[sig] + 1
    if work * (pad + 1) > TYPE_VERIFY_CAP:
        raise ResourceLimitError("type-based verification too large")
    masks = set()
    for counts in itertools.product(*(range(classes[sig] + 1) for sig in sigs)):
        total = sum(counts)
        inter = [sum(c for c, sig in zip(counts, sigs) if sig[j]) for j in range(len(sets))]
        base = [total + sizes[j] - 2 * inter[j] for j in range(len(sets))]
        for extra in range(pad + 1):
            mask = 0
            for j, d in enumerate(base):
                if d + extra >= ell:
                    mask |= 1 << j
            masks.add(mask)
    return not _fails(masks, k)


# -- signed matching enumeration ------------------------------------------------


def pairing_sign(pairs: Sequence[tuple[int, int]]) -> int:
    """Sign of the permutation ``i1 j1 i2 j2 ...`` with ``i_k < j_k`` and ``i_1 < i_2 < ...``."""
    seq = [x for p in sorted((min(p), max(p)) for p in pairs) for x in p]
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def signed_matching_sum(stage, coloring: Coloring, weights: Sequence[int], counts: Sequence[int]) -> int:
    """Sum over perfect matchings with the given profile of ``sign * prod(weights)``."""
    total = 0
    want = tuple(counts)
    for m in _perfect_matchings(stage.n, stage.edges):
        if coloring.profile(m) != want:
            continue
        prod = 1
        for e in m:
            prod *= weights[e]
        total += pairing_sign([stage.edges[e] for e in m]) * prod
    return total
