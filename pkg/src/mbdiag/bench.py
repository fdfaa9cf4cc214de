"""Paired benchmark runs: both engines solve the same sequential sessions and
every run is audited for identical per-iteration output.

A suite is a set of scenarios (DPI x leading-diagnoses bound x heuristic); for
each scenario a number of target diagnoses is sampled from the brute-force
minimal diagnoses and each target is diagnosed twice, once per engine, with
the same simulated oracle.  Rows go to CSV in a fixed column order; aggregates
(medians, win fractions, memory and prune-time ratios) go to JSON.
"""

from __future__ import annotations

import csv
import json
import random
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .dpi import (Component, Dpi, DpiFormatError, brute_force_minimal_diagnoses, dump_dpi,
                  ids_of, load_dpi)
from .formula import And, Atom, Formula, Iff, Implies, Not, Or
from .query import HEURISTICS
from .reasoner import OK, check_requirements
from .session import SessionConfig, SessionResult, TargetDiagnosisOracle, run_session

CSV_COLUMNS = ["dpi", "ld", "heuristic", "engine", "target", "iterations",
               "hardCalls", "mediumCalls", "easyCalls", "satChecks",
               "nodesGenerated", "nodesProcessed", "maxNodesStored",
               "duplicatesStored", "pruneTimeNs", "totalTimeNs"]


class EngineMismatchError(Exception):
    """The two engines disagreed on a session; carries the full context."""

    def __init__(self, scenario: dict, detail: str):
        super().__init__(f"engine outputs diverged in scenario {scenario}: {detail}")
        self.scenario = scenario
        self.detail = detail


@dataclass
class BenchSuite:
    dpis: list[Dpi]
    ld_values: list[int] = field(default_factory=lambda: [2, 4, 6])
    heuristics: list[str] = field(default_factory=lambda: list(HEURISTICS))
    targets_per_scenario: int = 2
    seed: int = 0


@dataclass
class BenchReport:
    rows: list[dict]
    aggregates: dict
    suite: BenchSuite


def random_formula(rng: random.Random, names: Sequence[str], depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.35:
        atom = Atom(rng.choice(list(names)))
        return Not(atom) if rng.random() < 0.4 else atom
    op = rng.choice([And, Or, Implies, Implies, Iff])
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_dpi(rng: random.Random, min_components: int = 6, max_components: int = 10,
               max_atoms: int = 6, name: str = "random") -> Dpi:
    """A random faulty system with at least two minimal diagnoses."""
    for _ in range(10000):
        n = rng.randint(min_components, max_components)
        atom_count = rng.randint(3, max_atoms)
        names = [chr(ord("A") + i) for i in range(atom_count)]
        components = tuple(
            Component(i + 1, f"ax{i + 1}", random_formula(rng, names, rng.randint(1, 2)),
                      round(rng.uniform(0.05, 0.45), 3))
            for i in range(n))
        negative = tuple(random_formula(rng, names, 1) for _ in range(rng.randint(1, 2)))
        dpi = Dpi(components, negative=negative, name=name)
        if check_requirements([], (), (), dpi.negative).outcome != OK:
            continue  # a tautological negative test: nothing could ever pass
        if check_requirements([c.formula for c in components], (), (), dpi.negative):
            continue  # not faulty
        if len(brute_force_minimal_diagnoses(dpi)) < 2:
            continue
        return dpi
    raise RuntimeError("failed to sample a usable random system")


def load_suite(document: str | dict, base_dir: Path | None = None) -> BenchSuite:
    if isinstance(document, str):
        document = json.loads(document)
    dpis: list[Dpi] = []
    for entry in document.get("dpis", []):
        if isinstance(entry, str):
            path = Path(entry)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            dpis.append(load_dpi(path.read_text()))
        else:
            dpis.append(load_dpi(entry))
    seed = int(document.get("seed", 0))
    randomized = document.get("random")
    if randomized:
        rng = random.Random(seed)
        for i in range(int(randomized.get("count", 20))):
            dpis.append(random_dpi(rng,
                                   int(randomized.get("minComponents", 6)),
                                   int(randomized.get("maxComponents", 10)),
                                   int(randomized.get("maxAtoms", 6)),
                                   name=f"random{i + 1}"))
    if not dpis:
        raise DpiFormatError("benchmark suite contains no systems")
    return BenchSuite(
        dpis=dpis,
        ld_values=[int(v) for v in document.get("ldValues", [2, 4, 6])],
        heuristics=[str(h) for h in document.get("heuristics", list(HEURISTICS))],
        targets_per_scenario=int(document.get("targetsPerScenario", 2)),
        seed=seed,
    )


def _row(scenario: dict, engine: str, target_ids: list[str], result: SessionResult) -> dict:
    totals = result.totals
    return {
        **scenario, "engine": engine, "target": "+".join(target_ids),
        "iterations": len(result.iterations),
        "hardCalls": totals["hardCalls"], "mediumCalls": totals["mediumCalls"],
        "easyCalls": totals["easyCalls"], "satChecks": totals["satChecks"],
        "nodesGenerated": totals["nodesGenerated"], "nodesProcessed": totals["nodesProcessed"],
        "maxNodesStored": totals["maxNodesStored"], "duplicatesStored": totals["duplicatesStored"],
        "pruneTimeNs": totals["pruneTimeNs"], "totalTimeNs": totals["totalTimeNs"],
    }


def _audit_pair(scenario: dict, dynamic: SessionResult, stateless: SessionResult) -> None:
    if len(dynamic.iterations) != len(stateless.iterations):
        raise EngineMismatchError(scenario, "different session lengths")
    for a, b in zip(dynamic.iterations, stateless.iterations):
        if a.leading != b.leading:
            raise EngineMismatchError(
                scenario, f"iteration {a.index}: {a.leading} vs {b.leading}")
        if a.query != b.query or a.outcome != b.outcome:
            raise EngineMismatchError(scenario, f"iteration {a.index}: diverging measurements")
    if dynamic.final != stateless.final or dynamic.status != stateless.status:
        raise EngineMismatchError(scenario, "different session outcomes")


def run_benchmark(suite: BenchSuite) -> BenchReport:
    rng = random.Random(suite.seed)
    rows: list[dict] = []
    pair_keys: list[tuple] = []
    for dpi in suite.dpis:
        diagnoses = brute_force_minimal_diagnoses(dpi)
        count = min(suite.targets_per_scenario, len(diagnoses))
        targets = rng.sample(diagnoses, count)
        for ld in suite.ld_values:
            for heuristic in suite.heuristics:
                scenario = {"dpi": dpi.name, "ld": ld, "heuristic": heuristic}
                for target in targets:
                    oracle = TargetDiagnosisOracle(target)
                    results = {}
                    for engine in ("dynamichs", "hstree"):
                        config = SessionConfig(dpi=dpi, ld=ld, engine=engine,
                                               heuristic=heuristic, seed=suite.seed)
                        results[engine] = run_session(config, oracle=oracle)
                    _audit_pair(scenario, results["dynamichs"], results["hstree"])
                    target_ids = ids_of(dpi, target)
                    for engine in ("dynamichs", "hstree"):
                        rows.append(_row(scenario, engine, target_ids, results[engine]))
                    pair_keys.append((dpi.name, ld, heuristic, tuple(target_ids)))
    return BenchReport(rows=rows, aggregates=_aggregate(rows), suite=suite)


def _pairs(rows: list[dict]):
    by_key: dict[tuple, dict] = {}
    for row in rows:
        key = (row["dpi"], row["ld"], row["heuristic"], row["target"])
        by_key.setdefault(key, {})[row["engine"]] = row
    return [(key, pair["dynamichs"], pair["hstree"])
            for key, pair in sorted(by_key.items()) if len(pair) == 2]


def _aggregate(rows: list[dict]) -> dict:
    pairs = _pairs(rows)
    if not pairs:
        return {"pairs": 0}

    def savings(metric: str) -> dict:
        values = []
        wins = 0
        for _, dynamic, stateless in pairs:
            if stateless[metric] > 0:
                values.append(1.0 - dynamic[metric] / stateless[metric])
            if dynamic[metric] < stateless[metric]:
                wins += 1
        return {
            "medianSavings": statistics.median(values) if values else 0.0,
            "winFraction": wins / len(pairs),
        }

    memory_factors = [dynamic["maxNodesStored"] / stateless["maxNodesStored"]
                      for _, dynamic, stateless in pairs if stateless["maxNodesStored"] > 0]
    prune_fractions = [dynamic["pruneTimeNs"] / dynamic["totalTimeNs"]
                       for _, dynamic, _ in pairs if dynamic["totalTimeNs"] > 0]
    hardest = max(pairs, key=lambda p: p[2]["hardCalls"])
    return {
        "pairs": len(pairs),
        "hardCalls": savings("hardCalls"),
        "mediumCalls": savings("mediumCalls"),
        "nodesProcessed": savings("nodesProcessed"),
        "totalTimeNs": savings("totalTimeNs"),
        "memoryFactorMedian": statistics.median(memory_factors) if memory_factors else 0.0,
        "pruneTimeFractionMedian": statistics.median(prune_fractions) if prune_fractions else 0.0,
        "hardestCase": {
            "scenario": list(hardest[0]),
            "dynamicHardCalls": hardest[1]["hardCalls"],
            "statelessHardCalls": hardest[2]["hardCalls"],
        },
    }


def write_report(report: BenchReport, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "rows.csv", "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(report.rows)
    (out / "aggregate.json").write_text(json.dumps(report.aggregates, indent=2))
    (out / "systems.json").write_text(
        json.dumps([dump_dpi(d) for d in report.suite.dpis], indent=2))
