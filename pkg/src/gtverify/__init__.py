"""Finite permutation-group engine and theorem-verification harness."""

from .perms import Perm, parse_cycles, format_cycles
from .groups import PermGroup, group_from_generators, coset_action
from .errors import BudgetExceeded, InputError, PreconditionError, UnknownGroupError

__version__ = "0.1.0"

__all__ = [
    "Perm",
    "parse_cycles",
    "format_cycles",
    "PermGroup",
    "group_from_generators",
    "coset_action",
    "BudgetExceeded",
    "InputError",
    "PreconditionError",
    "UnknownGroupError",
    "__version__",
]
