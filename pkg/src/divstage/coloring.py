"""4-coloring families that realize every small target partition.

A family with budget ``b`` *covers* ``(n, b)`` when for every disjoint
``B_1..B_4`` with ``|B_1 u .. u B_4| <= b`` some member maps each ``B_i`` to
color ``i``.  Three providers exist: all ``4^n`` colorings, independent
uniform colorings, and colorings derived from a binary universal set over
``2n`` indices (element ``i`` is encoded by the pair ``i``, ``i + n``).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from math import ceil, comb, log, log1p
from typing import Iterator, Sequence

import numpy as np

from .core import Coloring, PreconditionError, ResourceLimitError


MODES = ("exhaustive", "randomized", "universal-set")
EXHAUSTIVE_MAX_N = 9
RANDOMIZED_MAX_T = 2_000_000
GREEDY_MAX_M = 24
GREEDY_MAX_T = 6
COVERING_WORK_CAP = 50_000_000


def _restricted_growth(n: int, blocks: int) -> Iterator[tuple[int, ...]]:
    """Canonical colorings (first-appearance labels) with exactly ``blocks`` colors."""
    if n == 0:
        if blocks == 0:
            yield ()
        return

    def rec(prefix: list[int], top: int):
        if len(prefix) == n:
            if top == blocks:
                yield tuple(prefix)
            return
        # enough positions must remain to open the missing colors
        if blocks - top > n - len(prefix):
            return
        for c in range(1, min(top + 1, blocks) + 1):
            prefix.append(c)
            yield from rec(prefix, max(top, c))
            prefix.pop()

    yield from rec([], 0)


@dataclass(frozen=True)
class ColoringFamily:
    n: int
    b: int
    mode: str
    colors: tuple[tuple[int, ...], ...]
    s: int = 4

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def colorings(self) -> list[Coloring]:
        return [Coloring(c, self.s) for c in self.colors]

    def partitions(self) -> list[tuple[int, ...]]:
        """Distinct induced partitions, as canonical color tuples.

        Queries that range over every count profile of a coloring only see
        its partition, and a finer partition answers every profile of a
        coarser one.  For the exhaustive family this leaves exactly the
        partitions into ``min(4, n)`` nonempty blocks.
        """
        if self.mode == "exhaustive":
            return list(_restricted_growth(self.n, min(self.s, self.n)))
        seen: dict[tuple[int, ...], None] = {}
        for c in self.colors:
            seen.setdefault(Coloring(c, self.s).canonical(), None)
        return list(seen)

    def halvings(self) -> list[tuple[int, ...]]:
        """Distinct canonical 2-colorings ``x -> ceil(c(x) / 2)`` over the members."""
        if self.mode == "exhaustive":
            out = [p for k in range(1, min(2, self.n) + 1) for p in _restricted_growth(self.n, k)]
            return out or [()]
        seen: dict[tuple[int, ...], None] = {}
        for c in self.colors:
            half = Coloring(tuple((x + 1) // 2 for x in c), 2)
            seen.setdefault(half.canonical(), None)
        return list(seen)

    def to_json(self) -> str:
        return json.dumps([list(c) for c in self.colors])

    @classmethod
    def from_json(cls, text: str, b: int, mode: str = "exhaustive") -> "ColoringFamily":
        rows = json.loads(text)
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise PreconditionError("a coloring family is a JSON array of color arrays")
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise PreconditionError("all colorings must have the same length")
        colors = tuple(Coloring(tuple(r), 4).colors for r in rows)
        return cls(n, b, mode, colors)


@dataclass(frozen=True)
class BinaryUniversalSet:
    """Subsets of ``{0..m-1}`` (as bitmasks) inducing every pattern on every ``t``-subset."""

    m: int
    t: int
    masks: tuple[int, ...]

    @property
    def sets(self) -> list[frozenset[int]]:
        return [frozenset(i for i in range(self.m) if mask >> i & 1) for mask in self.masks]

    def check(self) -> bool:
        return _universal_ok(self.m, self.t, self.masks)


def _pattern_codes(masks: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """``codes[u, j]`` = bits of ``masks[u]`` at ``positions[j, :]`` packed little-endian."""
    codes = np.zeros((masks.shape[0], positions.shape[0]), dtype=np.int64)
    for k in range(positions.shape[1]):
        codes |= ((masks[:, None] >> positions[None, :, k]) & 1) << k
    return codes


def _universal_ok(m: int, t: int, masks: Sequence[int]) -> bool:
    if t > m:
        return False
    if t == 0:
        return len(masks) > 0
    positions = np.array(list(itertools.combinations(range(m), t)), dtype=np.int64)
    arr = np.array(masks, dtype=np.int64)
    if arr.size == 0:
        return False
    codes = _pattern_codes(arr, positions)
    seen = np.zeros((positions.shape[0], 1 << t), dtype=bool)
    seen[np.arange(positions.shape[0])[None, :], codes] = True
    return bool(seen.all())


@lru_cache(maxsize=32)
def greedy_universal_set(m: int, t: int, seed: int = 0, pool: int = 48) -> BinaryUniversalSet:
    """Greedy cover of the ``(t-subset, pattern)`` requirements.

    For ``m <= 10`` every subset of ``{0..m-1}`` is a candidate in each round.
    Above that, each round scores a pool of candidates that each satisfy one
    open requirement and are random elsewhere.
    """
    if not 0 <= t <= m:
        raise PreconditionError("strength must lie in 0..m")
    if t == m and m <= 2 * EXHAUSTIVE_MAX_N:
        # full strength: only the whole power set qualifies
        return BinaryUniversalSet(m, t, tuple(range(1 << m)))
    if m > GREEDY_MAX_M or t > GREEDY_MAX_T:
        raise ResourceLimitError(f"greedy universal set capped at m <= {GREEDY_MAX_M}, t <= {GREEDY_MAX_T}")
    if t == 0:
        return BinaryUniversalSet(m, t, (0,))
    positions = np.array(list(itertools.combinations(range(m), t)), dtype=np.int64)
    n_sub = positions.shape[0]
    covered = np.zeros((n_sub, 1 << t), dtype=bool)
    rows = np.arange(n_sub)
    exact = m <= 10
    if exact:
        cand = np.arange(1 << m, dtype=np.int64)
        cand_codes = _pattern_codes(cand, positions)
    rng = random.Random(seed)
    chosen: list[int] = []
    while not covered.all():
        if not exact:
            open_sub, open_pat = np.nonzero(~covered)
            picks = [rng.randrange(len(open_sub)) for _ in range(pool)]
            cand_list = []
            for p in picks:
                mask = rng.getrandbits(m)
                for k, pos in enumerate(positions[open_sub[p]]):
                    bit = (int(open_pat[p]) >> k) & 1
                    mask = (mask | (1 << int(pos))) if bit else (mask & ~(1 << int(pos)))
                cand_list.append(mask)
            cand = np.array(cand_list, dtype=np.int64)
            cand_codes = _pattern_codes(cand, positions)
        gain = (~covered[rows[None, :], cand_codes]).sum(axis=1)
        best = int(np.argmax(gain))
        mask = int(cand[best])
        chosen.append(mask)
        covered[rows, cand_codes[best]] = True
    out = BinaryUniversalSet(m, t, tuple(chosen))
    if not out.check():
        raise RuntimeError("greedy universal set failed its own check")
    return out


def universal_to_colorings(n: int, universal: BinaryUniversalSet) -> list[tuple[int, ...]]:
    """Pair index ``i`` with ``i + n``: both in ``U`` -> 1, only ``i`` -> 2, only ``i + n`` -> 3, neither -> 4."""
    if universal.m != 2 * n:
        raise PreconditionError("universal set must live on 2n indices")
    out = []
    for mask in universal.masks:
        row = []
        for i in range(n):
            lo, hi = mask >> i & 1, mask >> (i + n) & 1
            row.append(1 if lo and hi else 2 if lo else 3 if hi else 4)
        out.append(tuple(row))
    return out


def required_pattern(n: int, blocks: Sequence[Sequence[int]], b: int) -> tuple[list[int], set[int]]:
    """Index set ``B'`` (padded to ``2b`` with the smallest unused indices) and the pattern ``B''`` on it.

    Any ``U`` with ``B' & U == B''`` yields a coloring mapping ``blocks[i]`` to color ``i + 1``.
    """
    touched = sorted(x for blk in blocks for x in blk)
    if len(set(touched)) != len(touched):
        raise PreconditionError("target blocks must be disjoint")
    if len(touched) > b:
        raise PreconditionError("target exceeds the budget")
    chosen = {i for x in touched for i in (x, x + n)}
    for i in range(2 * n):
        if len(chosen) >= min(2 * b, 2 * n):
            break
        chosen.add(i)
    want: set[int] = set()
    for q, blk in enumerate(blocks, start=1):
        for x in blk:
            if q in (1, 2):
                want.add(x)
            if q in (1, 3):
                want.add(x + n)
    return sorted(chosen), want


def randomized_count(n: int, b: int, delta: float) -> int:
    """Draws needed so that all ``C(n, b) * 4^b`` targets are covered with probability ``>= 1 - delta``."""
    b = min(b, n)
    if b == 0:
        return 1
    q = 4.0 ** -b
    targets = comb(n, b) * 4**b
    return max(1, ceil(log(delta / targets) / log1p(-q)))


def build_family(n: int, b: int, mode: str = "exhaustive", seed: int = 0, delta: float = 0.01) -> ColoringFamily:
    if n < 0 or b < 0:
        raise PreconditionError("n and b must be non-negative")
    if mode not in MODES:
        raise PreconditionError(f"unknown coloring mode {mode!r}")
    eff_b = min(b, n)
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ResourceLimitError(f"exhaustive family capped at n <= {EXHAUSTIVE_MAX_N}")
        colors = tuple(itertools.product(range(1, 5), repeat=n))
        return ColoringFamily(n, b, mode, colors)
    if mode == "randomized":
        if not 0 < delta < 1:
            raise PreconditionError("delta must lie in (0, 1)")
        count = randomized_count(n, eff_b, delta)
        if count > RANDOMIZED_MAX_T:
            raise ResourceLimitError(f"randomized family would need {count} colorings")
        rng = random.Random(seed)
        colors = tuple(tuple(rng.randint(1, 4) for _ in range(n)) for _ in range(count))
        return ColoringFamily(n, b, mode, colors)
    if b > n:
        raise PreconditionError("universal-set mode needs b <= n")
    try:
        universal = greedy_universal_set(2 * n, 2 * b, seed)
    except ResourceLimitError as exc:
        raise ResourceLimitError(f"no universal set provider succeeds at ({2 * n}, {2 * b})") from exc
    return ColoringFamily(n, b, mode, tuple(universal_to_colorings(n, universal)))


def verify_covering(family: ColoringFamily) -> bool:
    n, b = family.n, min(family.b, family.n)
    work = comb(n, b) * max(len(family), 1) * b
    if work > COVERING_WORK_CAP:
        raise ResourceLimitError("covering check too large")
    if not family.colors:
        return False
    if b == 0:
        return True
    arr = np.array(family.colors, dtype=np.int64) - 1
    need = 4**b
    powers = 4 ** np.arange(b, dtype=np.int64)
    for subset in itertools.combinations(range(n), b):
        codes = arr[:, list(subset)] @ powers
        if np.unique(codes).size < need:
            return False
    return True


class FamilyProvider:
    """Memoized ``(n, b) -> ColoringFamily``; universal-set mode clamps ``b`` to ``n``."""

    def __init__(self, mode: str = "exhaustive", seed: int = 0, delta: float = 0.01):
        if mode not in MODES:
            raise PreconditionError(f"unknown coloring mode {mode!r}")
        self.mode = mode
        self.seed = seed
        self.delta = delta
        self._cache: dict[tuple[int, int], ColoringFamily] = {}

    def __call__(self, n: int, b: int) -> ColoringFamily:
        key = (n, min(b, n))
        if key not in self._cache:
            self._cache[key] = build_family(n, key[1], self.mode, self.seed, self.delta)
        return self._cache[key]
