"""Deterministic SAT reasoning over clause sets, plus the test-requirements check.

The solver is a plain DPLL with unit propagation.  Branching is deterministic:
always the unassigned atom with the lowest index (atoms are indexed in sorted
name order), positive polarity first.  Determinism is observable through the
step counter returned by :func:`solve`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import Clause, Formula, Not, clauses_for


def _index_clauses(clauses: Iterable[Clause]) -> list[list[int]]:
    names = sorted({name for clause in clauses for name, _ in clause})
    index = {name: i + 1 for i, name in enumerate(names)}
    return [[index[name] if pol else -index[name] for name, pol in sorted(clause)]
            for clause in clauses]


def solve(clauses: Iterable[Clause]) -> tuple[bool, int]:
    """Return (satisfiable?, deterministic step count)."""
    int_clauses = _index_clauses(clauses)
    steps = [0]
    result = _dpll(int_clauses, {}, steps)
    return result, steps[0]


def is_satisfiable(clauses: Iterable[Clause]) -> bool:
    return solve(clauses)[0]


def _dpll(clauses: list[list[int]], assignment: dict[int, bool], steps: list[int]) -> bool:
    assignment = dict(assignment)
    while True:
        steps[0] += 1
        unit = None
        all_satisfied = True
        for clause in clauses:
            unassigned = []
            satisfied = False
            for lit in clause:
                val = assignment.get(abs(lit))
                if val is None:
                    unassigned.append(lit)
                elif val == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not unassigned:
                return False  # falsified clause
            all_satisfied = False
            if len(unassigned) == 1 and unit is None:
                unit = unassigned[0]
        if all_satisfied:
            return True
        if unit is None:
            break
        assignment[abs(unit)] = unit > 0
    # branch on the lowest-indexed unassigned atom, positive first
    var = min(v for clause in clauses for lit in clause
              if (v := abs(lit)) not in assignment)
    for value in (True, False):
        assignment[var] = value
        if _dpll(clauses, assignment, steps):
            return True
    return False


OK = "ok"
INCONSISTENT = "inconsistent"
ENTAILS_NEGATIVE = "entails_negative_test"


@dataclass
class Verdict:
    """Outcome of checking a sentence set against the test requirements."""

    outcome: str  # OK, INCONSISTENT or ENTAILS_NEGATIVE
    violated: Formula | None = None
    sat_checks: int = 0

    def __bool__(self) -> bool:
        return self.outcome == OK


@dataclass
class CheckCounter:
    """Tally of SAT checks made on behalf of one caller."""

    sat_checks: int = 0


def check_requirements(sentences: Sequence[Formula], background: Sequence[Formula],
                       positive: Sequence[Formula], negative: Sequence[Formula],
                       counter: CheckCounter | None = None) -> Verdict:
    """Check that sentences ∪ background ∪ positive is consistent and entails
    no negative test.

    Short-circuits at the first violation: the consistency check runs first,
    then the negative tests in input order, so one invocation performs at most
    len(negative) + 1 SAT checks.
    """
    base = list(sentences) + list(background) + list(positive)
    checks = 0

    checks += 1
    if not is_satisfiable(clauses_for(base)):
        return _done(Verdict(INCONSISTENT, None, checks), counter)
    for n in negative:
        checks += 1
        if not is_satisfiable(clauses_for(base + [Not(n)])):
            return _done(Verdict(ENTAILS_NEGATIVE, n, checks), counter)
    return _done(Verdict(OK, None, checks), counter)


def _done(verdict: Verdict, counter: CheckCounter | None) -> Verdict:
    if counter is not None:
        counter.sat_checks += verdict.sat_checks
    return verdict


def entails(premises: Sequence[Formula], conclusion: Formula,
            counter: CheckCounter | None = None) -> bool:
    """premises ⊨ conclusion, decided as UNSAT(premises ∪ {¬conclusion})."""
    if counter is not None:
        counter.sat_checks += 1
    return not is_satisfiable(clauses_for(list(premises) + [Not(conclusion)]))
