"""Plurality-voting stages: committees of at most ``k`` candidates with at least ``x`` votes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .core import ColoredExactSolver, Coloring, ErrorBudget, PreconditionError, Solution, make_solution


@dataclass(frozen=True)
class VotingStage:
    """``votes[a]`` is the candidate index agent ``a`` votes for, or ``None`` for an abstention."""

    n_candidates: int
    votes: tuple[int | None, ...]
    k: int
    x: int
    candidate_labels: tuple[Hashable, ...] | None = None
    kind: str = field(default="voting", init=False)

    def __post_init__(self):
        if self.k < 0 or self.x < 0:
            raise PreconditionError("k and x must be non-negative")
        for v in self.votes:
            if v is not None and not 0 <= v < self.n_candidates:
                raise PreconditionError(f"vote for unknown candidate {v}")
        if self.candidate_labels is not None and len(self.candidate_labels) != self.n_candidates:
            raise PreconditionError("one label per candidate")

    @property
    def base_size(self) -> int:
        return self.n_candidates

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return self.candidate_labels if self.candidate_labels is not None else tuple(range(self.n_candidates))

    def scores(self) -> list[int]:
        score = [0] * self.n_candidates
        for v in self.votes:
            if v is not None:
                score[v] += 1
        return score

    def size_range(self) -> tuple[int, int]:
        return 0, min(self.k, self.n_candidates)

    def is_feasible(self, solution: Solution) -> bool:
        score = self.scores()
        return len(solution) <= self.k and sum(score[c] for c in solution) >= self.x


def solve_colored_voting(stage: VotingStage, coloring: Coloring, counts: Sequence[int],
                         _budget: ErrorBudget | None = None) -> Solution | None:
    """Take the ``n_i`` best-scoring candidates of each color (ties: lowest index first)."""
    if len(coloring) != stage.n_candidates:
        raise PreconditionError("coloring must cover every candidate")
    if sum(counts) > stage.k:
        return None
    score = stage.scores()
    chosen: list[int] = []
    total = 0
    for members, need in zip(coloring.classes(), counts):
        if need > len(members):
            return None
        best = sorted(members, key=lambda c: (-score[c], c))[:need]
        chosen.extend(best)
        total += sum(score[c] for c in best)
    if total < stage.x:
        return None
    return make_solution(chosen)


class VotingSolver(ColoredExactSolver):
    deterministic = True

    def solve(self, stage, coloring, counts, budget):
        return solve_colored_voting(stage, coloring, counts, budget)

    def solve_profiles(self, stage, coloring, profiles, budget):
        # prefix sums of each color class sorted by score answer every profile
        score = stage.scores()
        ranked = [sorted(members, key=lambda c: (-score[c], c)) for members in coloring.classes()]
        prefix = []
        for members in ranked:
            acc = [0]
            for c in members:
                acc.append(acc[-1] + score[c])
            prefix.append(acc)
        found = {}
        for counts in profiles:
            if sum(counts) > stage.k or any(m > len(r) for m, r in zip(counts, ranked)):
                continue
            if sum(p[m] for p, m in zip(prefix, counts)) >= stage.x:
                found[tuple(counts)] = make_solution(c for r, m in zip(ranked, counts) for c in r[:m])
        return found
