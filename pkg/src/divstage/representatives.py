"""ℓ-diverse representative families of a stage's solution set.

A family ``F`` represents ``R`` when for every ``S`` in ``R`` and every pair
of sets ``A``, ``B`` that are both at distance ``>= ell`` from ``S``, some
member of ``F`` is also at distance ``>= ell`` from both.

The top-level routine looks for three solutions pairwise ``2 * ell`` apart.
When it finds fewer it falls back to color-coding around one or two centers,
built from count-profile queries against a :class:`ColoredExactSolver`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .coloring import ColoringFamily, FamilyProvider
from .core import (ColoredExactSolver, Coloring, ErrorBudget, PreconditionError, Solution, count_vectors, distance,
                   make_solution, query_first, query_profiles)

log = logging.getLogger(__name__)

PROVENANCES = ("empty", "triple", "one-center", "two-centers")

Provider = Callable[[int, int], ColoringFamily]


@dataclass(frozen=True)
class RepresentativeFamily:
    solutions: tuple[Solution, ...]
    ell: int
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise PreconditionError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def rep_from_triple(s1: Solution, s2: Solution, s3: Solution, ell: int) -> RepresentativeFamily:
    triple = (make_solution(s1), make_solution(s2), make_solution(s3))
    for i in range(3):
        for j in range(i + 1, 3):
            d = distance(triple[i], triple[j])
            if d < 2 * ell:
                raise PreconditionError(f"members {i} and {j} are at distance {d} < {2 * ell}")
    return RepresentativeFamily(triple, ell, "triple")


def _profiles(stage, coloring: Coloring) -> list[tuple[int, ...]]:
    lo, hi = stage.size_range()
    return list(count_vectors(coloring.class_sizes(), min(hi, stage.base_size), lo))


def _profile_family(stage, coloring: Coloring, solver: ColoredExactSolver, budget: ErrorBudget) -> list[Solution]:
    profiles = _profiles(stage, coloring)
    if not profiles:
        return []
    found = query_profiles(solver, stage, coloring, profiles, budget.share(len(profiles)))
    out = [found[p] for p in profiles if p in found]
    assert len(out) <= comb(stage.base_size + 4, 4)
    return out


def family_two_sets(stage, c4: Coloring, solver: ColoredExactSolver, budget: ErrorBudget) -> list[Solution]:
    """One solution per realizable count profile of ``c4`` (lexicographic profile order)."""
    if c4.s != 4:
        raise PreconditionError("family_two_sets needs a 4-coloring")
    if len(c4) != stage.base_size:
        raise PreconditionError("coloring must cover the base set")
    return _profile_family(stage, c4, solver, budget)


def refine_by_solution(c2: Coloring, m: Solution) -> Coloring:
    """Cells ``c2^1 & M``, ``c2^2 & M``, ``c2^1 - M``, ``c2^2 - M`` as colors 1..4."""
    if any(c not in (1, 2) for c in c2.colors):
        raise PreconditionError("family_near_solution needs a 2-coloring")
    inside = set(m)
    return Coloring(tuple((c if x in inside else c + 2) for x, c in enumerate(c2.colors)), 4)


def family_near_solution(stage, c2: Coloring, m: Solution, solver: ColoredExactSolver,
                         budget: ErrorBudget) -> list[Solution]:
    if len(c2) != stage.base_size:
        raise PreconditionError("coloring must cover the base set")
    if not stage.is_feasible(make_solution(m)):
        raise PreconditionError("center must be a solution of the stage")
    return _profile_family(stage, refine_by_solution(c2, m), solver, budget)


def _merge(*groups: Sequence[Solution]) -> tuple[Solution, ...]:
    return tuple(sorted({tuple(s) for g in groups for s in g}, key=lambda s: (len(s), s)))


def _default_provider(provider: Provider | None) -> Provider:
    return provider if provider is not None else FamilyProvider("exhaustive")


def rep_all_near(stage, m_star: Solution, ell: int, solver: ColoredExactSolver, family_provider: Provider | None,
                 budget: ErrorBudget) -> RepresentativeFamily:
    """Every solution lies within ``2 * ell`` of ``m_star``; color-code with budget ``8 * ell``."""
    m_star = make_solution(m_star)
    if not stage.is_feasible(m_star):
        raise PreconditionError("center must be a solution of the stage")
    if ell <= 0:
        return RepresentativeFamily((m_star,), ell, "one-center")
    family = _default_provider(family_provider)(stage.base_size, 8 * ell)
    parts = family.partitions()
    share = budget.share(len(parts))
    found: list[Solution] = []
    for j, p in enumerate(parts):
        found.extend(family_two_sets(stage, Coloring(p, 4), solver, share.child("two-sets", j)))
    return RepresentativeFamily(_merge([m_star], found), ell, "one-center")


def rep_two_centers(stage, m1: Solution, m2: Solution, ell: int, solver: ColoredExactSolver,
                    family_provider: Provider | None, budget: ErrorBudget) -> RepresentativeFamily:
    """Every solution lies within ``2 * ell`` of ``m1`` or ``m2``; color-code with budget ``10 * ell``."""
    m1, m2 = make_solution(m1), make_solution(m2)
    if distance(m1, m2) < 2 * ell:
        raise PreconditionError(f"centers are at distance {distance(m1, m2)} < {2 * ell}")
    for m in (m1, m2):
        if not stage.is_feasible(m):
            raise PreconditionError("centers must be solutions of the stage")
    if ell <= 0:
        return RepresentativeFamily(_merge([m1, m2]), ell, "two-centers")
    family = _default_provider(family_provider)(stage.base_size, 10 * ell)
    third = budget.scaled(Fraction(1, 3))
    parts = family.partitions()
    halves = family.halvings()
    found: list[Solution] = []
    share = third.share(len(parts))
    for j, p in enumerate(parts):
        found.extend(family_two_sets(stage, Coloring(p, 4), solver, share.child("two-sets", j)))
    share = third.share(len(halves))
    for j, h in enumerate(halves):
        c2 = Coloring(h, 2)
        found.extend(family_near_solution(stage, c2, m1, solver, share.child("near-first", j)))
        found.extend(family_near_solution(stage, c2, m2, solver, share.child("near-second", j)))
    return RepresentativeFamily(_merge([m1, m2], found), ell, "two-centers")


def compute_representative(stage, ell: int, solver: ColoredExactSolver, family_provider: Provider | None = None,
                           budget: ErrorBudget = ErrorBudget()) -> RepresentativeFamily:
    """Find up to three mutually far solutions, falling back to the one- or two-center constructions."""
    if ell < 0:
        raise PreconditionError("ell must be non-negative")
    n = stage.base_size
    lo, hi = stage.size_range()
    hi = min(hi, n)
    quarter = budget.scaled(Fraction(1, 4))

    # first solution: monochrome queries by ascending size
    mono = Coloring.monochrome(n, 1)
    sizes = [(m,) for m in range(lo, hi + 1)]
    hit = query_first(solver, stage, mono, sizes, quarter.share(max(len(sizes), 1)).child("first")) if sizes else None
    if hit is None:
        return RepresentativeFamily((), ell, "empty")
    m1 = hit[1]
    if ell == 0:
        return RepresentativeFamily((m1,), ell, "one-center")

    # second solution: strictly more than 2 * ell away from the first
    c2 = Coloring.by_membership(n, [m1], 2)
    size1 = len(m1)
    pairs = [p for p in count_vectors(c2.class_sizes(), hi, lo) if p[1] + size1 - p[0] > 2 * ell]
    hit = query_first(solver, stage, c2, pairs, quarter.share(len(pairs)).child("second")) if pairs else None
    if hit is None:
        log.debug("no solution beyond %d of the first; one-center fallback", 2 * ell)
        return rep_all_near(stage, m1, ell, solver, family_provider, budget.scaled(Fraction(1, 2)).child("near"))
    m2 = hit[1]

    # third solution: at least 2 * ell away from both
    s1, s2 = set(m1), set(m2)
    c4 = Coloring(tuple(1 if (x in s1 and x not in s2) else 2 if (x in s2 and x not in s1)
                        else 3 if x in s1 else 4 for x in range(n)), 4)
    size2 = len(m2)
    quads = [q for q in count_vectors(c4.class_sizes(), hi, lo)
             if q[1] + q[3] + size1 - q[0] - q[2] >= 2 * ell and q[0] + q[3] + size2 - q[1] - q[2] >= 2 * ell]
    hit = query_first(solver, stage, c4, quads, quarter.share(len(quads)).child("third")) if quads else None
    if hit is None:
        log.debug("no third far solution; two-center fallback")
        return rep_two_centers(stage, m1, m2, ell, solver, family_provider, quarter.child("centers"))
    return rep_from_triple(m1, m2, hit[1], ell)
