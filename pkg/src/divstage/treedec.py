"""Nice tree decompositions with the two terminals in every bag.

The decomposition is built from an elimination ordering of ``G - {s, t}``
(min-fill, or an exact subset DP on small graphs when min-fill is too wide);
adding ``s`` and ``t`` to every bag then gives a decomposition of ``G``.
Leaves and the root carry the bag ``{s, t}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx

from .core import PreconditionError, ResourceLimitError

DEFAULT_WIDTH_CAP = 8
EXACT_MAX_VERTICES = 12

Adjacency = dict[int, set[int]]


class WidthCapExceeded(ResourceLimitError):
    def __init__(self, width: int, cap: int):
        super().__init__(f"decomposition width {width} exceeds the cap {cap}")
        self.width = width
        self.cap = cap


def adjacency(g: nx.Graph | Mapping[int, Iterable[int]]) -> Adjacency:
    if isinstance(g, nx.Graph):
        return {v: set(g.neighbors(v)) - {v} for v in g.nodes}
    return {v: set(nb) - {v} for v, nb in g.items()}


def _fill_in(adj: Adjacency, v: int) -> int:
    nb = list(adj[v])
    return sum(1 for i in range(len(nb)) for j in range(i + 1, len(nb)) if nb[j] not in adj[nb[i]])


def _eliminate(adj: Adjacency, v: int) -> None:
    nb = adj.pop(v)
    for a in nb:
        adj[a].discard(v)
        adj[a].update(nb - {a})


def min_fill_order(adj: Adjacency) -> list[int]:
    """Greedy elimination order: fewest fill edges, then lowest degree, then lowest id."""
    work = {v: set(nb) for v, nb in adj.items()}
    order = []
    while work:
        v = min(work, key=lambda u: (_fill_in(work, u), len(work[u]), u))
        order.append(v)
        _eliminate(work, v)
    return order


def order_width(adj: Adjacency, order: list[int]) -> int:
    work = {v: set(nb) for v, nb in adj.items()}
    width = -1
    for v in order:
        width = max(width, len(work[v]))
        _eliminate(work, v)
    return width


def exact_order(adj: Adjacency) -> list[int]:
    """Optimal elimination ordering by dynamic programming over vertex subsets."""
    verts = sorted(adj)
    n = len(verts)
    if n > EXACT_MAX_VERTICES:
        raise ResourceLimitError(f"exact treewidth capped at {EXACT_MAX_VERTICES} vertices")
    index = {v: i for i, v in enumerate(verts)}
    nbm = [sum(1 << index[u] for u in adj[v]) for v in verts]

    def q_size(mask: int, i: int) -> int:
        # vertices outside mask + {i} reachable from i through mask
        seen = 1 << i
        stack = [i]
        out = 0
        while stack:
            x = stack.pop()
            rest = nbm[x] & ~seen
            seen |= rest
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                rest ^= low
                if mask >> j & 1:
                    stack.append(j)
                else:
                    out += 1
        return out

    full = (1 << n) - 1
    best = [0] * (1 << n)
    choice = [-1] * (1 << n)
    best[0] = -1
    for mask in range(1, full + 1):
        b, c = None, -1
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            prev = mask ^ low
            val = max(best[prev], q_size(prev, i))
            if b is None or val < b:
                b, c = val, i
        best[mask] = b
        choice[mask] = c
    order = []
    mask = full
    while mask:
        i = choice[mask]
        order.append(verts[i])
        mask ^= 1 << i
    return order[::-1]


def treewidth_exact(g: nx.Graph | Mapping[int, Iterable[int]]) -> int:
    adj = adjacency(g)
    if not adj:
        return -1
    return order_width(adj, exact_order(adj))


@dataclass
class NiceTreeDecomposition:
    """Nodes are numbered so that every child precedes its parent; the root is last."""

    bags: list[frozenset[int]] = field(default_factory=list)
    kinds: list[str] = field(default_factory=list)
    children: list[tuple[int, ...]] = field(default_factory=list)
    vertex: list[int | None] = field(default_factory=list)
    terminals: frozenset[int] = frozenset()

    def add(self, bag: Iterable[int], kind: str, children: tuple[int, ...] = (), vertex: int | None = None) -> int:
        self.bags.append(frozenset(bag))
        self.kinds.append(kind)
        self.children.append(children)
        self.vertex.append(vertex)
        return len(self.bags) - 1

    @property
    def root(self) -> int:
        return len(self.bags) - 1

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def __len__(self) -> int:
        return len(self.bags)


def _raw_decomposition(adj: Adjacency, order: list[int]) -> tuple[dict[int, frozenset[int]], dict[int, int | None]]:
    pos = {v: i for i, v in enumerate(order)}
    work = {v: set(nb) for v, nb in adj.items()}
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int | None] = {}
    for v in order:
        nb = work[v]
        bags[v] = frozenset(nb | {v})
        parent[v] = min(nb, key=pos.__getitem__) if nb else None
        _eliminate(work, v)
    return bags, parent


def build_nice(adj: Adjacency, terminals: tuple[int, int], order: list[int]) -> NiceTreeDecomposition:
    s, t = terminals
    st = frozenset(terminals)
    inner = {v: nb - st for v, nb in adj.items() if v not in st}
    bags, parent = _raw_decomposition(inner, order)
    kids: dict[int, list[int]] = {v: [] for v in bags}
    roots = []
    for v, p in parent.items():
        (kids[p].append(v) if p is not None else roots.append(v))
    ntd = NiceTreeDecomposition(terminals=st)

    def morph(node: int, have: frozenset[int], want: frozenset[int]) -> int:
        for u in sorted(have - want):
            have = have - {u}
            node = ntd.add(have, "forget", (node,), u)
        for u in sorted(want - have):
            have = have | {u}
            node = ntd.add(have, "introduce", (node,), u)
        return node

    def join_all(nodes: list[int], bag: frozenset[int]) -> int:
        acc = nodes[0]
        for other in nodes[1:]:
            acc = ntd.add(bag, "join", (acc, other))
        return acc

    def make(v: int) -> int:
        bag = bags[v] | st
        subs = [morph(make(c), bags[c] | st, bag) for c in sorted(kids[v])]
        if not subs:
            leaf = ntd.add(st, "leaf")
            return morph(leaf, st, bag)
        return join_all(subs, bag)

    tops = [morph(make(r), bags[r] | st, st) for r in sorted(roots)]
    if not tops:
        ntd.add(st, "leaf")
    elif len(tops) > 1:
        join_all(tops, st)
    return ntd


def nice_decomposition(g: nx.Graph | Mapping[int, Iterable[int]], terminals: tuple[int, int],
                       width_cap: int = DEFAULT_WIDTH_CAP) -> NiceTreeDecomposition:
    """Raises :class:`WidthCapExceeded` when no ordering found keeps the augmented width within ``width_cap``."""
    adj = adjacency(g)
    s, t = terminals
    if s == t or s not in adj or t not in adj:
        raise PreconditionError("terminals must be two distinct vertices of the graph")
    st = {s, t}
    inner = {v: nb - st for v, nb in adj.items() if v not in st}
    order = min_fill_order(inner)
    width = order_width(inner, order) + 2 if inner else 1
    if width > width_cap and len(inner) <= EXACT_MAX_VERTICES:
        order = exact_order(inner)
        width = order_width(inner, order) + 2
    if width > width_cap:
        raise WidthCapExceeded(width, width_cap)
    ntd = build_nice(adj, (s, t), order)
    problems = validate(ntd, adj)
    if problems:
        raise AssertionError("invalid decomposition: " + "; ".join(problems))
    return ntd


def validate(ntd: NiceTreeDecomposition, g: nx.Graph | Mapping[int, Iterable[int]]) -> list[str]:
    """Every violated axiom or node-kind rule, as text; empty when the decomposition is valid."""
    adj = adjacency(g)
    problems: list[str] = []
    bags = ntd.bags
    covered = set().union(*bags) if bags else set()
    if covered != set(adj):
        problems.append("bags do not cover exactly the vertex set")
    for u, nb in adj.items():
        for v in nb:
            if u < v and not any(u in b and v in b for b in bags):
                problems.append(f"edge {(u, v)} in no bag")
    parent = {c: i for i, ch in enumerate(ntd.children) for c in ch}
    if len(parent) != len(bags) - 1 or ntd.root in parent:
        problems.append("nodes do not form a tree rooted at the last node")
    for v in covered:
        holders = [i for i, b in enumerate(bags) if v in b]
        tops = [i for i in holders if i not in parent or v not in bags[parent[i]]]
        if len(tops) != 1:
            problems.append(f"nodes holding {v} are not connected")
    for i, kind in enumerate(ntd.kinds):
        ch = ntd.children[i]
        bag = bags[i]
        if kind == "leaf":
            ok = not ch and bag == ntd.terminals
        elif kind == "introduce":
            ok = len(ch) == 1 and ntd.vertex[i] not in bags[ch[0]] and bag == bags[ch[0]] | {ntd.vertex[i]}
        elif kind == "forget":
            ok = len(ch) == 1 and ntd.vertex[i] in bags[ch[0]] and bag == bags[ch[0]] - {ntd.vertex[i]}
        elif kind == "join":
            ok = len(ch) == 2 and bag == bags[ch[0]] == bags[ch[1]]
        else:
            ok = False
        if not ok:
            problems.append(f"node {i} breaks the {kind} rule")
        if any(c >= i for c in ch):
            problems.append(f"node {i} has a child numbered after it")
    if bags and bags[ntd.root] != ntd.terminals:
        problems.append("root bag is not the terminal pair")
    if not ntd.terminals <= set().union(*bags) or any(not ntd.terminals <= b for b in bags):
        problems.append("terminals missing from some bag")
    return problems
