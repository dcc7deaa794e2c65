"""Small graph builders shared by the path and matching tests."""

import random

from divstage.stpath import StPathStage


def cycle(vertices):
    return [(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]


def two_cycle_gadget(length=8):
    """``s`` - cycle - bridge - cycle - ``t``: two vertex-disjoint cycles on every s-t route."""
    s = 0
    c1 = list(range(1, length + 1))
    c2 = list(range(length + 1, 2 * length + 1))
    t = 2 * length + 1
    half = length // 2
    edges = cycle(c1) + cycle(c2) + [(s, c1[0]), (c1[half], c2[0]), (c2[half], t)]
    return StPathStage(t + 1, tuple(edges), s, t)


def random_stpath(rng: random.Random, n_max=10, n_colors=4):
    n = rng.randint(2, n_max)
    density = rng.uniform(0.15, 0.7)
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density)
    s, t = rng.sample(range(n), 2)
    colors = tuple(rng.randint(1, n_colors) for _ in range(n))
    return StPathStage(n, edges, s, t), colors
