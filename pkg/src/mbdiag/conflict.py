"""Minimal conflict computation by preference-ordered divide and conquer.

Deterministic contract: the candidate list keeps its caller-given order, each
split takes the first ceil(n/2) elements as the left half, and the left half
is explored with the right half backing it, so identical inputs always yield
the identical minimal conflict.  The number of requirement checks stays within
2k(1 + log2(n/k)) + 2 for a conflict of size k in a universe of size n.

Precondition: background ∪ positive tests are consistent on their own (the
session validates this once up front).
"""

from __future__ import annotations

import time
from typing import Sequence

from .dpi import Dpi, check_candidate
from .reasoner import CheckCounter
from .stats import EASY, HARD, MEDIUM, EngineStats


def find_min_conflict_counted(universe: Sequence[int], dpi: Dpi) -> tuple[tuple[int, ...] | None, int]:
    """Minimal conflict within ``universe`` (or None), plus the check count."""
    counter = CheckCounter()

    def conflicting(indices: list[int]) -> bool:
        return not check_candidate(dpi, dpi.formulas(indices), counter)

    candidates = list(universe)
    if not conflicting(candidates):
        return None, counter.sat_checks

    def qx(background: list[int], background_just_set: bool, cand: list[int]) -> list[int]:
        if background_just_set and conflicting(background):
            return []
        if len(cand) == 1:
            return list(cand)
        mid = (len(cand) + 1) // 2
        left, right = cand[:mid], cand[mid:]
        delta2 = qx(background + left, True, right)
        delta1 = qx(background + delta2, bool(delta2), left)
        return delta1 + delta2

    if not candidates:
        return (), counter.sat_checks
    result = qx([], False, candidates)
    return tuple(sorted(result)), counter.sat_checks


def find_min_conflict(universe: Sequence[int], dpi: Dpi,
                      stats: EngineStats | None = None,
                      small: bool = False) -> tuple[int, ...] | None:
    """Instrumented minimal-conflict search.

    ``small=False`` marks a fresh search over (close to) the whole system:
    recorded as a hard call when a conflict comes back, as a medium call on
    "no conflict".  ``small=True`` marks a restricted-universe search and is
    always recorded as an easy call.
    """
    started = time.perf_counter_ns()
    result, checks = find_min_conflict_counted(universe, dpi)
    if stats is not None:
        if small:
            category = EASY
        else:
            category = HARD if result is not None else MEDIUM
        stats.record_call(category, time.perf_counter_ns() - started, checks)
    return result
