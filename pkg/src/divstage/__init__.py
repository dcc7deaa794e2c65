"""Diverse multistage problems: per-stage solutions whose consecutive symmetric differences are all large."""

from .core import (Coloring, ColoredExactSolver, DivstageError, ErrorBudget, InstanceFormatError, PreconditionError,
                   ResourceLimitError, SolverContractError, UnsupportedKindError, distance, make_solution,
                   symmetric_difference)
from .coloring import ColoringFamily, FamilyProvider, build_family, verify_covering
from .multistage import MultistageInstance, solve_multistage, verify_sequence
from .representatives import RepresentativeFamily, compute_representative

__version__ = "0.1.0"

__all__ = [
    "Coloring", "ColoredExactSolver", "ColoringFamily", "DivstageError", "ErrorBudget", "FamilyProvider",
    "InstanceFormatError", "MultistageInstance", "PreconditionError", "RepresentativeFamily", "ResourceLimitError",
    "SolverContractError", "UnsupportedKindError", "build_family", "compute_representative", "distance",
    "make_solution", "solve_multistage", "symmetric_difference", "verify_covering", "verify_sequence",
]
