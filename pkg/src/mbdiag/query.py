"""Measurement selection: partition candidate sentences by their effect on the
leading diagnoses and score the discriminating ones.

The entropy and most-probable-singleton scores are lightweight surrogates of
their information-theoretic originals: ENT minimizes |p(S+) - p(S-)| + p(S0),
SPL minimizes ||S+| - |S-|| + |S0|, MPS maximizes the pair (diagnoses
eliminated in the better outcome, probability of that outcome).  Undecided
diagnoses contribute half their mass to each outcome probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dpi import Dpi
from .formula import Atom, Formula, Implies, Not, atoms, render
from .reasoner import CheckCounter, check_requirements, entails

HEURISTICS = ("ent", "spl", "mps")


@dataclass(frozen=True)
class QueryPartition:
    """How one candidate sentence splits the leading diagnoses: positions of
    diagnoses whose remainder entails it (``d_plus``), contradicts it
    (``d_minus``), or neither (``d_zero``)."""

    sentence: Formula
    text: str
    d_plus: tuple[int, ...]
    d_minus: tuple[int, ...]
    d_zero: tuple[int, ...]

    @property
    def discriminating(self) -> bool:
        return bool(self.d_plus) and bool(self.d_minus)


def q_partition(sentence: Formula, diagnoses: Sequence[frozenset[int]], dpi: Dpi,
                counter: CheckCounter | None = None) -> QueryPartition:
    plus, minus, zero = [], [], []
    for i, diagnosis in enumerate(diagnoses):
        kept = dpi.remainder(diagnosis)
        premises = kept + list(dpi.background) + list(dpi.positive)
        if entails(premises, sentence, counter):
            plus.append(i)
        elif not check_requirements(kept + [sentence], dpi.background, dpi.positive,
                                    dpi.negative, counter):
            minus.append(i)
        else:
            zero.append(i)
    return QueryPartition(sentence, render(sentence), tuple(plus), tuple(minus), tuple(zero))


def generate_candidates(dpi: Dpi, include_implications: bool = True) -> list[Formula]:
    """Literals over the system's atoms, optionally plus implications between
    literals of distinct atoms."""
    names = sorted(set().union(*(atoms(c.formula) for c in dpi.components)))
    literals: list[Formula] = []
    for name in names:
        literals.append(Atom(name))
        literals.append(Not(Atom(name)))
    candidates = list(literals)
    if include_implications:
        for a in literals:
            for b in literals:
                if _atom_of(a) != _atom_of(b):
                    candidates.append(Implies(a, b))
    return candidates


def _atom_of(literal: Formula) -> str:
    return literal.child.name if isinstance(literal, Not) else literal.name


def diagnosis_probabilities(diagnoses: Sequence[frozenset[int]], dpi: Dpi) -> list[float]:
    """Leading-diagnosis weights normalized to sum 1."""
    weights = [dpi.weight(d) for d in diagnoses]
    total = sum(weights)
    return [w / total for w in weights]


def outcome_probabilities(partition: QueryPartition, probs: Sequence[float]) -> tuple[float, float]:
    """(p positive, p negative) with undecided mass split evenly."""
    p_plus = sum(probs[i] for i in partition.d_plus)
    p_minus = sum(probs[i] for i in partition.d_minus)
    p_zero = sum(probs[i] for i in partition.d_zero)
    return p_plus + 0.5 * p_zero, p_minus + 0.5 * p_zero


def select_best(diagnoses: Sequence[frozenset[int]], dpi: Dpi, heuristic: str,
                include_implications: bool = True,
                counter: CheckCounter | None = None) -> QueryPartition | None:
    """Best discriminating candidate under ``heuristic``; None if no candidate
    discriminates.  Ties fall to the lexicographically smallest sentence text."""
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    probs = diagnosis_probabilities(diagnoses, dpi)
    best: tuple | None = None
    best_partition: QueryPartition | None = None
    for sentence in generate_candidates(dpi, include_implications):
        partition = q_partition(sentence, diagnoses, dpi, counter)
        if not partition.discriminating:
            continue
        if heuristic == "ent":
            p_plus = sum(probs[i] for i in partition.d_plus)
            p_minus = sum(probs[i] for i in partition.d_minus)
            p_zero = sum(probs[i] for i in partition.d_zero)
            key = (abs(p_plus - p_minus) + p_zero, partition.text)
        elif heuristic == "spl":
            key = (abs(len(partition.d_plus) - len(partition.d_minus)) + len(partition.d_zero),
                   partition.text)
        else:  # mps: maximize, so negate the lexicographic pair
            p_pos, p_neg = outcome_probabilities(partition, probs)
            better = max((len(partition.d_minus), p_pos), (len(partition.d_plus), p_neg))
            key = (-better[0], -better[1], partition.text)
        if best is None or key < best:
            best = key
            best_partition = partition
    return best_partition
