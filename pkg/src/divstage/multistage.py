"""Stage-by-stage dynamic program over representative families.

The table keeps, for every member ``S`` of stage ``i``'s family, the first
member of stage ``i - 1``'s family that is reachable and at distance
``>= ell`` from ``S``; a witness sequence is read off by back-pointers.
Distances between stages are computed on element labels, so stages may have
different base sets as long as they share a label namespace.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Hashable, Sequence

from .coloring import FamilyProvider
from .core import ColoredExactSolver, ErrorBudget, PreconditionError, Solution, UnsupportedKindError
from .representatives import Provider, RepresentativeFamily, compute_representative

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultistageInstance:
    stages: tuple
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise PreconditionError("a multistage instance needs at least one stage")
        kinds = {st.kind for st in self.stages}
        if len(kinds) != 1:
            raise PreconditionError(f"all stages must share one kind, got {sorted(kinds)}")
        if self.ell < 0:
            raise PreconditionError("ell must be non-negative")

    @property
    def kind(self) -> str:
        return self.stages[0].kind

    @property
    def tau(self) -> int:
        return len(self.stages)


def label_set(stage, solution: Solution) -> frozenset[Hashable]:
    labels = stage.labels
    return frozenset(labels[e] for e in solution)


def get_solver(kind: str, width_cap: int | None = None) -> ColoredExactSolver:
    if kind == "voting":
        from .voting import VotingSolver
        return VotingSolver()
    if kind == "matroid":
        from .matroid import MatroidSolver
        return MatroidSolver()
    if kind == "matching":
        from .matching import MatchingSolver
        return MatchingSolver()
    if kind == "stpath":
        from .stpath import StPathSolver
        return StPathSolver() if width_cap is None else StPathSolver(width_cap)
    raise UnsupportedKindError(f"no colored exact solver exists for kind {kind!r}")


def chain_families(stages: Sequence, families: Sequence[Sequence[Solution]], ell: int) -> list[Solution] | None:
    """Back-pointer DP over the given per-stage candidate lists."""
    if not families:
        return []
    keyed = [[(sol, label_set(st, sol)) for sol in fam] for st, fam in zip(stages, families)]
    reach: list[dict[int, int]] = [{j: -1 for j in range(len(keyed[0]))}]
    for i in range(1, len(keyed)):
        row: dict[int, int] = {}
        prev = keyed[i - 1]
        for j, (_, lab) in enumerate(keyed[i]):
            for h in reach[i - 1]:
                if len(lab ^ prev[h][1]) >= ell:
                    row[j] = h
                    break
        reach.append(row)
        if not row:
            return None
    if not reach[-1]:
        return None
    j = min(reach[-1])
    out = []
    for i in range(len(keyed) - 1, -1, -1):
        out.append(keyed[i][j][0])
        j = reach[i][j]
    return out[::-1]


def stage_families(mi: MultistageInstance, budget: ErrorBudget, family_provider: Provider | None = None,
                   solver: ColoredExactSolver | None = None) -> list[RepresentativeFamily]:
    solver = solver if solver is not None else get_solver(mi.kind)
    provider = family_provider if family_provider is not None else FamilyProvider("exhaustive")
    per_stage = budget.share(mi.tau)
    return [compute_representative(st, mi.ell, solver, provider, per_stage.child("stage", i))
            for i, st in enumerate(mi.stages)]


def solve_multistage(mi: MultistageInstance, budget: ErrorBudget = ErrorBudget(),
                     family_provider: Provider | None = None,
                     solver: ColoredExactSolver | None = None) -> list[Solution] | None:
    """A witness sequence or ``None``; ``None`` may be wrong with probability ``<= budget.p``."""
    families = stage_families(mi, budget, family_provider, solver)
    for i, fam in enumerate(families):
        log.debug("stage %d: %d representatives (%s)", i, len(fam), fam.provenance)
    seq = chain_families(mi.stages, [f.solutions for f in families], mi.ell)
    if seq is not None and not verify_sequence(mi, seq):
        raise AssertionError("dynamic program produced an invalid sequence")
    return seq


def verify_sequence(mi: MultistageInstance, seq: Sequence[Sequence[int]]) -> bool:
    if len(seq) != mi.tau:
        return False
    labs = []
    for st, sol in zip(mi.stages, seq):
        sol = tuple(sol)
        if list(sol) != sorted(set(sol)) or any(not 0 <= e < st.base_size for e in sol):
            return False
        if not st.is_feasible(sol):
            return False
        labs.append(label_set(st, sol))
    return all(len(a ^ b) >= mi.ell for a, b in zip(labs, labs[1:]))
