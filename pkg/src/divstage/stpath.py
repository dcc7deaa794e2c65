"""s-t path stages: the colored exact path DP and the two-long-cycles shortcut.

The base set of a stage is its vertex set; a solution is the vertex set of
a simple s-t path.

DP states at a bag are ``(pairs, counts)``.  ``pairs`` lists the endpoint
pairs of vertex-disjoint partial paths whose interiors were already
forgotten.  ``counts`` tallies, per color, the forgotten vertices lying on
those paths.  The terminals are added at the root, so no vertex is counted
twice when a join combines two subtrees.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Sequence

import networkx as nx

from .core import (ColoredExactSolver, Coloring, ErrorBudget, PreconditionError, ResourceLimitError, Solution,
                   distance, make_solution)
from .treedec import DEFAULT_WIDTH_CAP, NiceTreeDecomposition, WidthCapExceeded, nice_decomposition
from .representatives import RepresentativeFamily, rep_from_triple

log = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class StPathStage:
    n: int
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int
    vertex_colors: tuple[int, ...] | None = None
    vertex_labels: tuple[Hashable, ...] | None = None
    kind: str = field(default="stpath", init=False)

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"invalid edge {(u, v)} for n={self.n}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise PreconditionError("graph must be simple (duplicate edge)")
        object.__setattr__(self, "edges", tuple(norm))
        if self.s == self.t or not (0 <= self.s < self.n and 0 <= self.t < self.n):
            raise PreconditionError("terminals must be two distinct vertices")
        if self.vertex_colors is not None and len(self.vertex_colors) != self.n:
            raise PreconditionError("one color per vertex")
        if self.vertex_labels is not None and len(self.vertex_labels) != self.n:
            raise PreconditionError("one label per vertex")

    @property
    def base_size(self) -> int:
        return self.n

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return self.vertex_labels if self.vertex_labels is not None else tuple(range(self.n))

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def adjacency(self) -> dict[int, set[int]]:
        return _adjacency(self.n, self.edges)

    def size_range(self) -> tuple[int, int]:
        return 2, self.n

    def is_feasible(self, solution: Solution) -> bool:
        return _spans_path(self.n, self.edges, self.s, self.t, tuple(solution))

    def coloring(self) -> Coloring:
        if self.vertex_colors is None:
            raise PreconditionError("stage carries no vertex colors")
        return Coloring(self.vertex_colors, max(self.vertex_colors, default=1))


@lru_cache(maxsize=256)
def _adjacency(n: int, edges: tuple[tuple[int, int], ...]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


@lru_cache(maxsize=65536)
def _spans_path(n: int, edges: tuple[tuple[int, int], ...], s: int, t: int, verts: tuple[int, ...]) -> bool:
    """Whether ``G[verts]`` has a Hamiltonian path from ``s`` to ``t``."""
    vs = set(verts)
    if len(vs) != len(verts) or s not in vs or t not in vs or any(not 0 <= v < n for v in vs):
        return False
    adj = _adjacency(n, edges)
    target = len(vs)

    def dfs(v: int, seen: set[int]) -> bool:
        if v == t:
            return len(seen) == target
        for w in adj[v]:
            if w in vs and w not in seen:
                seen.add(w)
                if dfs(w, seen):
                    return True
                seen.discard(w)
        return False

    return dfs(s, {s})


def path_from_edges(edges: Sequence[Pair], s: int, t: int) -> list[int] | None:
    """Vertex sequence of the s-t path formed by ``edges``; ``None`` if they form something else."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if s not in adj or t not in adj or len(adj[s]) != 1 or len(adj[t]) != 1:
        return None
    if any(len(nb) != 2 for v, nb in adj.items() if v not in (s, t)):
        return None
    path = [s]
    prev = None
    while path[-1] != t:
        nxt = [w for w in adj[path[-1]] if w != prev]
        prev = path[-1]
        path.append(nxt[0])
        if len(path) > len(adj):
            return None
    return path if len(path) == len(adj) else None


# -- dynamic program --------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def _pairs_ok(pairs: tuple[Pair, ...], s: int, t: int) -> bool:
    if len(set(pairs)) != len(pairs):
        return False
    deg: dict[int, int] = {}
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    if deg.get(s, 0) > 1 or deg.get(t, 0) > 1 or any(d > 2 for d in deg.values()):
        return False
    # a finished s-t chain cannot absorb anything else
    if s in deg and t in deg and find(s) == find(t) and len(pairs) > len([p for p in pairs if find(p[0]) == find(s)]):
        return False
    return True


def _degree_masks(pairs: tuple[Pair, ...]) -> tuple[int, int]:
    """Bit masks of the endpoints used once or more, and of those used twice."""
    used = full = 0
    for a, b in pairs:
        for v in (a, b):
            bit = 1 << v
            if used & bit:
                full |= bit
            used |= bit
    return used, full


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class _Skeleton:
    """Pair-state transitions per node; they do not depend on the coloring.

    Node entries by kind: ``leaf`` lists ``(state, edge_mask)``; ``introduce``
    lists ``(child_state, state, edge_mask)``; ``forget`` lists
    ``(child_state, state, counted)``; ``join`` lists ``(left, right, state)``.
    """

    kinds: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]
    vertex: tuple[int | None, ...]
    moves: tuple[tuple, ...]
    final: tuple[int, ...]


def _skeleton(ntd: NiceTreeDecomposition, adj: dict[int, set[int]], s: int, t: int,
              edge_index: dict[Pair, int]) -> _Skeleton:
    ids: list[dict[tuple[Pair, ...], int]] = []
    moves = []

    def sid(i: int, pairs: tuple[Pair, ...]) -> int:
        return ids[i].setdefault(pairs, len(ids[i]))

    for i, kind in enumerate(ntd.kinds):
        ids.append({})
        ch = ntd.children[i]
        mv = []
        if kind == "leaf":
            mv.append((sid(i, ()), 0))
            if t in adj[s]:
                mv.append((sid(i, (_pair(s, t),)), 1 << edge_index[_pair(s, t)]))
        elif kind == "introduce":
            u = ntd.vertex[i]
            nbs = sorted(adj[u] & ntd.bags[ch[0]])
            options: list[tuple[Pair, ...]] = [()]
            options += [(_pair(u, x),) for x in nbs]
            options += [(_pair(u, x), _pair(u, y)) for x, y in itertools.combinations(nbs, 2)]
            for pairs, c in ids[ch[0]].items():
                for extra in options:
                    new = tuple(sorted(pairs + extra))
                    if extra and not _pairs_ok(new, s, t):
                        continue
                    mask = 0
                    for e in extra:
                        mask |= 1 << edge_index[e]
                    mv.append((c, sid(i, new), mask))
        elif kind == "forget":
            u = ntd.vertex[i]
            for pairs, c in ids[ch[0]].items():
                touching = [p for p in pairs if u in p]
                if not touching:
                    mv.append((c, sid(i, pairs), False))
                elif len(touching) == 2:
                    (a,) = [x for x in touching[0] if x != u]
                    (b,) = [x for x in touching[1] if x != u]
                    rest = tuple(sorted([p for p in pairs if u not in p] + [_pair(a, b)]))
                    if _pairs_ok(rest, s, t):
                        mv.append((c, sid(i, rest), True))
        else:
            ends = (1 << s) | (1 << t)
            right = [(rp, rc, *_degree_masks(rp)) for rp, rc in ids[ch[1]].items()]
            for lp, lc in ids[ch[0]].items():
                l_used, l_full = _degree_masks(lp)
                for rp, rc, r_used, r_full in right:
                    # cheap degree screen before the full acyclicity check
                    if l_full & r_used or r_full & l_used or l_used & r_used & ends:
                        continue
                    new = tuple(sorted(lp + rp))
                    if lp and rp and not _pairs_ok(new, s, t):
                        continue
                    mv.append((lc, rc, sid(i, new)))
        moves.append(tuple(mv))
    want = (_pair(s, t),)
    final = tuple(c for pairs, c in ids[ntd.root].items() if pairs == want)
    return _Skeleton(tuple(ntd.kinds), tuple(ntd.children), tuple(ntd.vertex), tuple(moves), final)


def _run_dp(sk: _Skeleton, n: int, s: int, t: int, colors: tuple[int, ...],
            n_colors: int) -> dict[tuple[int, ...], int]:
    """Realizable color profiles mapped to one witness edge mask.

    Counts are packed into one integer, base ``n + 1`` per color.
    """
    base = n + 1
    unit = [base ** (c - 1) for c in colors]
    tables: dict[int, dict[int, dict[int, int]]] = {}
    for i, kind in enumerate(sk.kinds):
        ch = sk.children[i]
        table: dict[int, dict[int, int]] = {}
        if kind == "leaf":
            for st, mask in sk.moves[i]:
                table.setdefault(st, {})[0] = mask
        elif kind == "introduce":
            child = tables.pop(ch[0])
            for c, st, extra in sk.moves[i]:
                src = child.get(c)
                if not src:
                    continue
                dst = table.setdefault(st, {})
                for cnt, mask in src.items():
                    dst.setdefault(cnt, mask | extra)
        elif kind == "forget":
            child = tables.pop(ch[0])
            bump = unit[sk.vertex[i]]
            for c, st, counted in sk.moves[i]:
                src = child.get(c)
                if not src:
                    continue
                dst = table.setdefault(st, {})
                if counted:
                    for cnt, mask in src.items():
                        dst.setdefault(cnt + bump, mask)
                else:
                    for cnt, mask in src.items():
                        dst.setdefault(cnt, mask)
        else:
            left = tables.pop(ch[0])
            right = tables.pop(ch[1])
            for lc, rc, st in sk.moves[i]:
                lsrc, rsrc = left.get(lc), right.get(rc)
                if not lsrc or not rsrc:
                    continue
                dst = table.setdefault(st, {})
                for lcnt, lmask in lsrc.items():
                    for rcnt, rmask in rsrc.items():
                        dst.setdefault(lcnt + rcnt, lmask | rmask)
        tables[i] = table
    root = tables[len(sk.kinds) - 1]
    ends = unit[s] + unit[t]
    out: dict[tuple[int, ...], int] = {}
    for st in sk.final:
        for cnt, mask in sorted(root.get(st, {}).items()):
            packed = cnt + ends
            prof = []
            for _ in range(n_colors):
                packed, digit = divmod(packed, base)
                prof.append(digit)
            out.setdefault(tuple(prof), mask)
    return out


@lru_cache(maxsize=4096)
def _decomposition(stage: StPathStage, width_cap: int) -> NiceTreeDecomposition:
    return nice_decomposition(stage.adjacency(), (stage.s, stage.t), width_cap)


@lru_cache(maxsize=4096)
def _stage_skeleton(stage: StPathStage, width_cap: int) -> _Skeleton:
    index = {e: j for j, e in enumerate(stage.edges)}
    return _skeleton(_decomposition(stage, width_cap), stage.adjacency(), stage.s, stage.t, index)


@lru_cache(maxsize=8192)
def _profile_table(stage: StPathStage, colors: tuple[int, ...], n_colors: int,
                   width_cap: int) -> dict[tuple[int, ...], Solution]:
    raw = _run_dp(_stage_skeleton(stage, width_cap), stage.n, stage.s, stage.t, colors, n_colors)
    out = {}
    for prof, mask in raw.items():
        path = path_from_edges([e for j, e in enumerate(stage.edges) if mask >> j & 1], stage.s, stage.t)
        if path is None:
            raise AssertionError("DP witness is not an s-t path")
        out[prof] = make_solution(path)
    return out


def colored_path_profiles(stage: StPathStage, coloring: Coloring,
                          width_cap: int = DEFAULT_WIDTH_CAP) -> dict[tuple[int, ...], Solution]:
    """Every realizable color profile with one witness path (as a vertex set)."""
    if len(coloring) != stage.n:
        raise PreconditionError("coloring must cover every vertex")
    return _profile_table(stage, coloring.colors, coloring.s, width_cap)


def solve_colored_stpath(stage: StPathStage, coloring: Coloring, counts: Sequence[int],
                         _budget: ErrorBudget | None = None, width_cap: int = DEFAULT_WIDTH_CAP) -> Solution | None:
    if len(counts) != coloring.s:
        raise PreconditionError("counts must have one entry per color")
    return colored_path_profiles(stage, coloring, width_cap).get(tuple(counts))


class StPathSolver(ColoredExactSolver):
    deterministic = True

    def __init__(self, width_cap: int = DEFAULT_WIDTH_CAP):
        self.width_cap = width_cap

    def solve(self, stage, coloring, counts, budget):
        return solve_colored_stpath(stage, coloring, counts, budget, self.width_cap)

    def solve_profiles(self, stage, coloring, profiles, budget):
        table = colored_path_profiles(stage, coloring, self.width_cap)
        return {tuple(p): table[tuple(p)] for p in profiles if tuple(p) in table}

    def solve_first(self, stage, coloring, profiles, budget):
        table = colored_path_profiles(stage, coloring, self.width_cap)
        for p in profiles:
            if tuple(p) in table:
                return tuple(p), table[tuple(p)]
        return None


# -- two long disjoint cycles -------------------------------------------------


def relevant_subgraph(stage: StPathStage) -> nx.Graph:
    """Vertices lying on some s-t path, i.e. the block of ``G + st`` containing ``s`` and ``t``."""
    g = stage.graph()
    if not nx.has_path(g, stage.s, stage.t):
        return nx.Graph()
    h = g.copy()
    h.add_edge(stage.s, stage.t)
    for comp in nx.biconnected_components(h):
        if stage.s in comp and stage.t in comp:
            return g.subgraph(comp).copy()
    return nx.Graph()


def _cycle_edges(cycle: Sequence[int]) -> set[Pair]:
    return {_pair(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}


def _enters_once(path: Sequence[int], cycle_vertices: set[int], cycle_edges: set[Pair]) -> bool:
    """The path meets the cycle in one contiguous run that walks along cycle edges."""
    hits = [i for i, v in enumerate(path) if v in cycle_vertices]
    if len(hits) < 2 or hits[-1] - hits[0] != len(hits) - 1:
        return False
    return all(_pair(path[i], path[i + 1]) in cycle_edges for i in range(hits[0], hits[-1]))


def _swap_arc(path: Sequence[int], cycle_edges: set[Pair], s: int, t: int) -> list[int] | None:
    edges = {_pair(path[i], path[i + 1]) for i in range(len(path) - 1)}
    return path_from_edges(sorted(edges ^ cycle_edges), s, t)


def two_long_cycles_representative(stage: StPathStage, ell: int,
                                   max_cycles: int = 20000) -> RepresentativeFamily | None:
    """Three pairwise ``2 * ell``-far paths built from two vertex-disjoint cycles of length ``>= 4 * ell``."""
    if ell < 0:
        raise PreconditionError("ell must be non-negative")
    g = relevant_subgraph(stage)
    s, t = stage.s, stage.t
    if g.number_of_nodes() == 0:
        return None
    if ell == 0:
        return RepresentativeFamily((make_solution(nx.shortest_path(g, s, t)),), 0, "triple")
    cycles = []
    for c in nx.simple_cycles(g):
        if len(c) >= max(4 * ell, 3):
            cycles.append(c)
        if len(cycles) >= max_cycles:
            break
    if len(cycles) < 2:
        return None
    cycles.sort(key=lambda c: (-len(c), sorted(c)))
    paths = None
    for a, b in itertools.combinations(range(len(cycles)), 2):
        ca, cb = cycles[a], cycles[b]
        if set(ca) & set(cb):
            continue
        if paths is None:
            paths = [p for p in nx.all_simple_paths(g, s, t)]
        for first, second in ((ca, cb), (cb, ca)):
            fam = _triple_from_cycles(paths, first, second, ell, s, t)
            if fam is not None:
                return fam
    return None


def _triple_from_cycles(paths: list[list[int]], c1: list[int], c2: list[int], ell: int,
                        s: int, t: int) -> RepresentativeFamily | None:
    v1, e1 = set(c1), _cycle_edges(c1)
    v2, e2 = set(c2), _cycle_edges(c2)
    for p1 in paths:
        if not _enters_once(p1, v1, e1):
            continue
        p2 = _swap_arc(p1, e1, s, t)
        if p2 is None:
            continue
        candidates = []
        if _enters_once(p1, v2, e2):
            swapped = _swap_arc(p1, e2, s, t)
            if swapped is not None:
                candidates.append(swapped)
        half = (len(c2) + 1) // 2
        candidates += [p for p in paths
                       if sum(_pair(p[i], p[i + 1]) in e2 for i in range(len(p) - 1)) >= half]
        for p3 in candidates:
            sols = [make_solution(p) for p in (p1, p2, p3)]
            if all(distance(x, y) >= 2 * ell for x, y in itertools.combinations(sols, 2)):
                return rep_from_triple(*sols, ell)
    return None


# -- multistage -------------------------------------------------------------


def solve_stpath_multistage(stages: Sequence[StPathStage], ell: int, budget: ErrorBudget = ErrorBudget(),
                            family_provider=None, width_cap: int = DEFAULT_WIDTH_CAP) -> list[Solution] | None:
    """Stages with two long disjoint cycles get a path triple; the rest is split into runs solved separately.

    A triple always contains a path far from both neighbours, so the runs
    are independent and the triples are filled in afterwards.
    """
    from .multistage import MultistageInstance, chain_families, label_set, verify_sequence
    from .oracles import BruteSolver, enumerate_solutions
    from .representatives import compute_representative

    stages = list(stages)
    mi = MultistageInstance(tuple(stages), ell)
    triples = [two_long_cycles_representative(st, ell) for st in stages]
    per_stage = budget.share(len(stages))
    solver = StPathSolver(width_cap)
    seq: list[Solution | None] = [None] * len(stages)
    i = 0
    while i < len(stages):
        if triples[i] is not None:
            i += 1
            continue
        j = i
        while j < len(stages) and triples[j] is None:
            j += 1
        fams = []
        for k in range(i, j):
            try:
                _decomposition(stages[k], width_cap)
                chosen = solver
            except WidthCapExceeded:
                log.info("stage %d exceeds width cap %d; brute-force colored solver", k, width_cap)
                chosen = BruteSolver()
            try:
                fam = compute_representative(stages[k], ell, chosen, family_provider,
                                             per_stage.child("stage", k)).solutions
            except ResourceLimitError:
                # no coloring family at this size; the full solution set represents itself
                log.info("stage %d: coloring family out of reach; enumerating every path", k)
                fam = tuple(enumerate_solutions(stages[k]))
            fams.append(fam)
        run = chain_families(stages[i:j], fams, ell)
        if run is None:
            return None
        seq[i:j] = run
        i = j
    for k, fam in enumerate(triples):
        if fam is None:
            continue
        near = [label_set(stages[q], seq[q]) for q in (k - 1, k + 1) if 0 <= q < len(stages) and seq[q] is not None]
        pick = next((p for p in fam.solutions
                     if all(len(label_set(stages[k], p) ^ other) >= ell for other in near)), None)
        if pick is None:
            raise AssertionError("path triple has no member far from both neighbours")
        seq[k] = pick
    if not verify_sequence(mi, seq):
        raise AssertionError("spliced sequence fails verification")
    return seq
