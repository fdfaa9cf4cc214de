"""Diagnosis problem instances: a set of possibly-faulty components with fault
probabilities, background knowledge assumed correct, and positive/negative
test sentences.

Components are referred to by 1-based index internally and by their string id
externally.  Diagnoses and conflicts are frozensets of component indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .formula import Formula, FormulaError, parse_formula, render
from .reasoner import CheckCounter, Verdict, check_requirements

ORACLE_BOUND = 16
DEFAULT_PROB = 0.25


class DpiFormatError(ValueError):
    """Malformed DPI document."""


@dataclass(frozen=True)
class Component:
    index: int  # 1-based
    id: str
    formula: Formula
    prob: float


@dataclass(frozen=True)
class Dpi:
    components: tuple[Component, ...]
    background: tuple[Formula, ...] = ()
    positive: tuple[Formula, ...] = ()
    negative: tuple[Formula, ...] = ()
    name: str = "dpi"

    @property
    def indices(self) -> range:
        return range(1, len(self.components) + 1)

    def component(self, index: int) -> Component:
        return self.components[index - 1]

    def id_of(self, index: int) -> str:
        return self.components[index - 1].id

    def index_of(self, component_id: str) -> int:
        for c in self.components:
            if c.id == component_id:
                return c.index
        raise KeyError(component_id)

    def formulas(self, indices: Iterable[int]) -> list[Formula]:
        return [self.components[i - 1].formula for i in sorted(indices)]

    def remainder(self, removed: Iterable[int]) -> list[Formula]:
        removed = set(removed)
        return [c.formula for c in self.components if c.index not in removed]

    def probs(self) -> dict[int, float]:
        return {c.index: c.prob for c in self.components}

    def with_tests(self, positive: Sequence[Formula] = (), negative: Sequence[Formula] = ()) -> "Dpi":
        if not positive and not negative:
            return self
        return replace(self, positive=self.positive + tuple(positive),
                       negative=self.negative + tuple(negative))

    def weight(self, subset: Iterable[int]) -> float:
        """Probability mass of exactly the components in ``subset`` being faulty."""
        inside = set(subset)
        w = 1.0
        for c in self.components:
            w *= c.prob if c.index in inside else 1.0 - c.prob
        return w

    def order_key(self, subset: Iterable[int]) -> tuple:
        """Sort key: heavier first, then smaller, then lexicographic ids."""
        s = sorted(set(subset))
        return (-self.weight(s), len(s), tuple(s))


def check_candidate(dpi: Dpi, kept: Sequence[Formula], counter: CheckCounter | None = None) -> Verdict:
    return check_requirements(kept, dpi.background, dpi.positive, dpi.negative, counter)


def is_diagnosis(indices: Iterable[int], dpi: Dpi, counter: CheckCounter | None = None) -> bool:
    """True iff removing ``indices`` from the system satisfies all tests."""
    return bool(check_candidate(dpi, dpi.remainder(indices), counter))


def is_conflict(indices: Iterable[int], dpi: Dpi, counter: CheckCounter | None = None) -> bool:
    """True iff the components in ``indices`` cannot all be healthy."""
    return not check_candidate(dpi, dpi.formulas(indices), counter)


def _minimal_subsets(universe: Sequence[int], predicate) -> list[frozenset[int]]:
    found: list[frozenset[int]] = []
    for size in range(len(universe) + 1):
        for combo in combinations(universe, size):
            combo_set = frozenset(combo)
            if any(prior <= combo_set for prior in found):
                continue
            if predicate(combo_set):
                found.append(combo_set)
    return found


def brute_force_minimal_diagnoses(dpi: Dpi, bound: int = ORACLE_BOUND,
                                  counter: CheckCounter | None = None) -> list[frozenset[int]]:
    """All minimal diagnoses by ascending-cardinality enumeration.

    Supersets of an already-found diagnosis are skipped without a check (any
    superset of a diagnosis is a diagnosis).  Refuses systems larger than
    ``bound`` components.
    """
    if len(dpi.components) > bound:
        raise ValueError(f"exhaustive search limited to {bound} components")
    return _minimal_subsets(list(dpi.indices), lambda s: is_diagnosis(s, dpi, counter))


def brute_force_minimal_conflicts(dpi: Dpi, bound: int = ORACLE_BOUND,
                                  counter: CheckCounter | None = None) -> list[frozenset[int]]:
    """All minimal conflicts by ascending-cardinality enumeration."""
    if len(dpi.components) > bound:
        raise ValueError(f"exhaustive search limited to {bound} components")
    return _minimal_subsets(list(dpi.indices), lambda s: is_conflict(s, dpi, counter))


def minimal_hitting_sets(sets: Sequence[frozenset[int]], universe: Sequence[int]) -> list[frozenset[int]]:
    """Exhaustive minimal hitting sets; the independent cross-check oracle."""
    hits: list[frozenset[int]] = []
    for size in range(len(universe) + 1):
        for combo in combinations(universe, size):
            combo_set = frozenset(combo)
            if any(prior <= combo_set for prior in hits):
                continue
            if all(combo_set & s for s in sets):
                hits.append(combo_set)
    return hits


def adjust_probabilities(dpi: Dpi) -> Dpi:
    """Scale fault probabilities so that all are below 0.5.

    If the maximum probability is >= 0.5 every probability is multiplied by
    0.49 / max; otherwise the DPI is returned unchanged.
    """
    top = max(c.prob for c in dpi.components)
    if top < 0.5:
        return dpi
    factor = 0.49 / top
    scaled = tuple(replace(c, prob=c.prob * factor) for c in dpi.components)
    return replace(dpi, components=scaled)


def _parse_formula_field(value, where: str) -> Formula:
    if not isinstance(value, str):
        raise DpiFormatError(f"{where}: formula must be a string")
    try:
        return parse_formula(value)
    except FormulaError as exc:
        raise DpiFormatError(f"{where}: {exc}") from exc


def load_dpi(document: str | Mapping) -> Dpi:
    """Load a DPI from its JSON document (text or parsed object)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DpiFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise DpiFormatError("DPI document must be a JSON object")
    raw_components = document.get("components")
    if not isinstance(raw_components, list) or not raw_components:
        raise DpiFormatError("'components' must be a non-empty list")
    components = []
    seen_ids = set()
    for i, entry in enumerate(raw_components, start=1):
        if not isinstance(entry, Mapping):
            raise DpiFormatError(f"component {i}: must be an object")
        cid = entry.get("id", f"ax{i}")
        if not isinstance(cid, str) or not cid:
            raise DpiFormatError(f"component {i}: 'id' must be a non-empty string")
        if cid in seen_ids:
            raise DpiFormatError(f"component {i}: duplicate id {cid!r}")
        seen_ids.add(cid)
        formula = _parse_formula_field(entry.get("formula"), f"component {cid}")
        prob = entry.get("prob", DEFAULT_PROB)
        if not isinstance(prob, (int, float)) or isinstance(prob, bool) or not 0.0 < prob < 1.0:
            raise DpiFormatError(f"component {cid}: 'prob' must be a number in (0, 1)")
        components.append(Component(i, cid, formula, float(prob)))

    def section(key: str) -> tuple[Formula, ...]:
        raw = document.get(key, [])
        if not isinstance(raw, list):
            raise DpiFormatError(f"'{key}' must be a list")
        return tuple(_parse_formula_field(text, f"{key}[{j}]") for j, text in enumerate(raw))

    name = document.get("name", "dpi")
    if not isinstance(name, str):
        raise DpiFormatError("'name' must be a string")
    return Dpi(tuple(components), section("background"), section("positiveTests"),
               section("negativeTests"), name)


def dump_dpi(dpi: Dpi) -> dict:
    return {
        "name": dpi.name,
        "components": [{"id": c.id, "formula": render(c.formula), "prob": c.prob}
                       for c in dpi.components],
        "background": [render(f) for f in dpi.background],
        "positiveTests": [render(f) for f in dpi.positive],
        "negativeTests": [render(f) for f in dpi.negative],
    }


def ids_of(dpi: Dpi, indices: Iterable[int]) -> list[str]:
    return [dpi.id_of(i) for i in sorted(indices)]
