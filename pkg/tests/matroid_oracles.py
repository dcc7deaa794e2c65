"""Brute-force matroid checks shared by the unit and acceptance tests."""

import itertools

from divstage.matroid import GraphicMatroid, PartitionMatroid, UniformMatroid


def _subsets(n):
    for mask in range(1 << n):
        yield mask, [x for x in range(n) if mask >> x & 1]


def matroid_violations(oracle) -> list[str]:
    """Exhaustive axiom check through the induced rank function.

    With ``r(X)`` the largest independent subset of ``X``, a hereditary,
    nonempty family is a matroid exactly when ``r`` is submodular, and local
    submodularity on single-element steps is enough.
    """
    n = oracle.size
    indep = [oracle.is_independent(xs) for _, xs in _subsets(n)]
    bad = []
    if not indep[0]:
        bad.append("empty set dependent")
    rank = [0] * (1 << n)
    for mask, xs in _subsets(n):
        if indep[mask]:
            rank[mask] = len(xs)
            if any(not indep[mask & ~(1 << x)] for x in xs):
                bad.append(f"not hereditary at {xs}")
        else:
            rank[mask] = max(rank[mask & ~(1 << x)] for x in xs)
    for mask, _ in _subsets(n):
        out = [x for x in range(n) if not mask >> x & 1]
        for a, b in itertools.combinations(out, 2):
            if rank[mask | 1 << a] + rank[mask | 1 << b] < rank[mask | 1 << a | 1 << b] + rank[mask]:
                bad.append(f"exchange fails at {mask:b} with {a}, {b}")
    return bad


def augmentation_holds(oracle, rng, trials=300) -> bool:
    n = oracle.size
    indep = [xs for _, xs in _subsets(n) if oracle.is_independent(xs)]
    for _ in range(trials):
        i, j = rng.choice(indep), rng.choice(indep)
        if len(i) < len(j) and not any(oracle.is_independent(i + [x]) for x in j if x not in i):
            return False
    return True


def brute_intersection(m1, m2, weights, target):
    best = None
    for comb in itertools.combinations(range(m1.size), target):
        if m1.is_independent(comb) and m2.is_independent(comb):
            w = sum(weights[x] for x in comb)
            if best is None or w > best:
                best = w
    return best


def random_oracle(rng, size):
    kind = rng.choice(["uniform", "partition", "graphic"])
    if kind == "uniform":
        return UniformMatroid(size, rng.randint(0, size))
    if kind == "partition":
        nb = rng.randint(1, 4)
        block = tuple(rng.randrange(nb) for _ in range(size))
        return PartitionMatroid(block, tuple(rng.randint(0, 3) for _ in range(nb)))
    verts = rng.randint(2, 6)
    return GraphicMatroid(verts, tuple(tuple(rng.sample(range(verts), 2)) for _ in range(size)))
