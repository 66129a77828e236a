"""Enumeration budgets.

All potentially explosive operations (element enumeration, subgroup walks,
lattice closures) consult a budget and fail loudly with BudgetExceeded when
they would overrun it.  The element budget can be overridden globally with
the ``GT_BUDGET`` environment variable or per call site.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_ELEMENT_BUDGET = 10**6


@dataclass(frozen=True)
class Budget:
    # max elements enumerated from a single group
    elements: int = DEFAULT_ELEMENT_BUDGET
    # max nodes in a normal-subgroup lattice
    lattice_nodes: int = 10**4
    # max subgroups produced by a full subgroup-lattice closure
    subgroup_closure: int = 20000
    # max subgroups produced by the p-group walk at one order
    p_subgroups: int = 20000
    # max points in a conjugation orbit during normalizer computation
    conjugate_orbit: int = 50000
    # max group order accepted by the isomorphism backtracker
    iso_order: int = 1000
    # max size of an intertwiner-space scan (p ** nullity)
    intertwiner_scan: int = 10**6


def default_budget() -> Budget:
    raw = os.environ.get("GT_BUDGET")
    if raw is None:
        return Budget()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GT_BUDGET must be an integer, got {raw!r}") from None
    return Budget(elements=n)


def budget_or_default(budget: Budget | None) -> Budget:
    return budget if budget is not None else default_budget()
