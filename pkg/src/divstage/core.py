"""Shared vocabulary: solutions, colorings, error budgets and the solver contract.

A *solution* is a sorted, duplicate-free tuple of element indices into a
stage's base set.  Every stage kind exposes ``base_size``, ``labels`` (one
hashable label per element, used to compare solutions across stages) and a
deterministic ``is_feasible`` check.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Protocol, Sequence

Solution = tuple[int, ...]


class DivstageError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(DivstageError, ValueError):
    pass


class ResourceLimitError(DivstageError):
    """A desk-scale cap would be exceeded."""


class SolverContractError(DivstageError):
    """A solver surfaced a set that is not a valid answer to its query."""


class UnsupportedKindError(DivstageError):
    pass


class InstanceFormatError(DivstageError, ValueError):
    """Malformed instance or witness document; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def make_solution(elements: Iterable[int]) -> Solution:
    return tuple(sorted(set(elements)))


def symmetric_difference(a: Sequence[int], b: Sequence[int]) -> Solution:
    return tuple(sorted(set(a).symmetric_difference(b)))


def distance(a: Iterable[Hashable], b: Iterable[Hashable]) -> int:
    """Size of the symmetric difference."""
    return len(set(a).symmetric_difference(b))


@dataclass(frozen=True)
class Coloring:
    """Total map from element index to a color in ``1..s``."""

    colors: tuple[int, ...]
    s: int = 4

    def __post_init__(self):
        if self.s < 1:
            raise PreconditionError(f"number of colors must be positive, got {self.s}")
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        for c in self.colors:
            if not 1 <= c <= self.s:
                raise PreconditionError(f"color {c} outside 1..{self.s}")

    @classmethod
    def monochrome(cls, n: int, s: int = 4) -> "Coloring":
        return cls((1,) * n, s)

    @classmethod
    def by_membership(cls, n: int, groups: Sequence[Iterable[int]], s: int = 4) -> "Coloring":
        """Color ``i+1`` for members of ``groups[i]``; the rest get the last color."""
        colors = [s] * n
        for color, group in enumerate(groups, start=1):
            for x in group:
                colors[x] = color
        return cls(tuple(colors), s)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, x: int) -> int:
        return self.colors[x]

    def classes(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.s)]
        for x, c in enumerate(self.colors):
            out[c - 1].append(x)
        return [tuple(cls) for cls in out]

    def class_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.s
        for c in self.colors:
            sizes[c - 1] += 1
        return tuple(sizes)

    def profile(self, solution: Iterable[int]) -> tuple[int, ...]:
        counts = [0] * self.s
        for x in solution:
            counts[self.colors[x] - 1] += 1
        return tuple(counts)

    def canonical(self) -> tuple[int, ...]:
        """Colors relabeled in order of first appearance (identifies the induced partition)."""
        relabel: dict[int, int] = {}
        return tuple(relabel.setdefault(c, len(relabel) + 1) for c in self.colors)


def count_vectors(sizes: Sequence[int], total_max: int, total_min: int = 0) -> Iterator[tuple[int, ...]]:
    """All vectors ``m`` with ``0 <= m_i <= sizes[i]`` and ``total_min <= sum(m) <= total_max``.

    Lexicographic order.
    """
    for m in itertools.product(*(range(z + 1) for z in sizes)):
        t = sum(m)
        if total_min <= t <= total_max:
            yield m


def derive_seed(seed: int, *labels: object) -> int:
    h = hashlib.blake2b(repr((seed,) + labels).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


@dataclass(frozen=True)
class ErrorBudget:
    """Target failure probability ``p`` plus the seed every random draw derives from.

    Deterministic solvers ignore both fields.
    """

    p: Fraction = Fraction(1, 4)
    seed: int = 0

    def __post_init__(self):
        p = Fraction(self.p)
        if not 0 <= p <= 1:
            raise PreconditionError(f"error probability must lie in [0, 1], got {p}")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "p", p)

    def share(self, parts: int) -> "ErrorBudget":
        """Budget for one of ``parts`` calls that together may fail with probability ``p``."""
        return ErrorBudget(self.p / max(parts, 1), self.seed)

    def scaled(self, factor: Fraction | int) -> "ErrorBudget":
        return ErrorBudget(self.p * Fraction(factor), self.seed)

    def child(self, *labels: object) -> "ErrorBudget":
        return ErrorBudget(self.p, derive_seed(self.seed, *labels))


class Stage(Protocol):
    kind: str

    @property
    def base_size(self) -> int: ...

    @property
    def labels(self) -> tuple[Hashable, ...]: ...

    def is_feasible(self, solution: Solution) -> bool: ...

    def size_range(self) -> tuple[int, int]: ...


class ColoredExactSolver:
    """Contract for the exact-count colored variant of a stage problem.

    ``solve`` returns a solution with exactly ``counts[i]`` elements of color
    ``i+1`` or ``None``.  "Yes" answers are always correct; Monte-Carlo
    solvers may answer ``None`` wrongly with probability at most ``budget.p``.
    """

    deterministic: bool = True

    def solve(self, stage, coloring: Coloring, counts: Sequence[int], budget: ErrorBudget) -> Solution | None:
        raise NotImplementedError

    def solve_profiles(self, stage, coloring: Coloring, profiles: Sequence[tuple[int, ...]],
                       budget: ErrorBudget) -> dict[tuple[int, ...], Solution]:
        """Answer several count queries on one coloring; ``budget`` is per query.

        Returns only the profiles that have a solution.
        """
        found = {}
        for counts in profiles:
            sol = self.solve(stage, coloring, counts, budget)
            if sol is not None:
                found[tuple(counts)] = sol
        return found

    def solve_first(self, stage, coloring: Coloring, profiles: Sequence[tuple[int, ...]],
                    budget: ErrorBudget) -> tuple[tuple[int, ...], Solution] | None:
        """The first profile (in the given order) that has a solution; ``budget`` is per query."""
        for counts in profiles:
            sol = self.solve(stage, coloring, counts, budget)
            if sol is not None:
                return tuple(counts), sol
        return None


def check_answer(stage, coloring: Coloring, counts: Sequence[int], sol: Solution | None) -> Solution | None:
    """Re-verify a solver answer before it is surfaced."""
    if sol is None:
        return None
    sol = tuple(sol)
    if list(sol) != sorted(set(sol)) or (sol and not 0 <= sol[0] <= sol[-1] < stage.base_size):
        raise SolverContractError(f"solver returned a non-canonical solution {sol}")
    if coloring.profile(sol) != tuple(counts):
        raise SolverContractError(f"solution {sol} has profile {coloring.profile(sol)}, wanted {tuple(counts)}")
    if not stage.is_feasible(sol):
        raise SolverContractError(f"solution {sol} is infeasible for the stage")
    return sol


def query(solver: ColoredExactSolver, stage, coloring: Coloring, counts: Sequence[int],
          budget: ErrorBudget) -> Solution | None:
    return check_answer(stage, coloring, counts, solver.solve(stage, coloring, counts, budget))


def query_profiles(solver: ColoredExactSolver, stage, coloring: Coloring,
                   profiles: Sequence[tuple[int, ...]], budget: ErrorBudget) -> dict[tuple[int, ...], Solution]:
    found = solver.solve_profiles(stage, coloring, profiles, budget)
    wanted = set(map(tuple, profiles))
    out = {}
    for prof, sol in found.items():
        if prof not in wanted:
            raise SolverContractError(f"solver answered an unasked profile {prof}")
        out[prof] = check_answer(stage, coloring, prof, sol)
    return out


def query_first(solver: ColoredExactSolver, stage, coloring: Coloring,
                profiles: Sequence[tuple[int, ...]], budget: ErrorBudget) -> tuple[tuple[int, ...], Solution] | None:
    hit = solver.solve_first(stage, coloring, profiles, budget)
    if hit is None:
        return None
    prof, sol = hit
    if tuple(prof) not in set(map(tuple, profiles)):
        raise SolverContractError(f"solver answered an unasked profile {prof}")
    return tuple(prof), check_answer(stage, coloring, prof, sol)
