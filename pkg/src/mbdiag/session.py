"""Sequential diagnosis sessions: run an engine, ask the best measurement,
absorb the answer, repeat until a single diagnosis remains.

The session can be driven three ways: by an oracle object answering the
heuristically selected queries, by a fixed measurement script (sentence plus
outcome, bypassing selection), or interactively one answer at a time (the CLI
and the HTTP service use this mode).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dpi import Dpi, adjust_probabilities, ids_of, is_diagnosis
from .dynamichs import DhsState, dynamic_hs
from .formula import Formula, render
from .hstree import Node, hs_tree
from .query import HEURISTICS, QueryPartition, diagnosis_probabilities, q_partition, select_best
from .reasoner import CheckCounter, OK, check_requirements, entails
from .stats import EngineStats, snapshot_delta

ENGINES = ("hstree", "dynamichs")

AWAITING = "awaiting_answer"
FINAL = "final"
STUCK = "no_discriminating_query"
EXHAUSTED = "script_exhausted"


class SessionError(Exception):
    pass


class FaultFreeDpiError(SessionError):
    """The system passes all tests; there is nothing to diagnose."""


class UndiagnosableDpiError(SessionError):
    """Background plus positive tests already violate the requirements."""


class MaxIterationsError(SessionError):
    pass


@dataclass
class SessionConfig:
    dpi: Dpi
    ld: int = 5
    engine: str = "dynamichs"
    heuristic: str = "ent"
    include_implications: bool = True
    max_iterations: int = 100
    seed: int | None = None
    adjust_probs: bool = True


@dataclass
class IterationRecord:
    index: int
    leading: list[list[str]]
    weights: list[float]
    query: str | None = None
    outcome: str | None = None
    counts: dict = field(default_factory=dict)
    iter_time_ns: int = 0

    def to_json(self) -> dict:
        return {
            "iteration": self.index,
            "leadingDiagnoses": self.leading,
            "weights": self.weights,
            "query": self.query,
            "outcome": self.outcome,
            "hardCalls": self.counts.get("hardCalls", 0),
            "mediumCalls": self.counts.get("mediumCalls", 0),
            "easyCalls": self.counts.get("easyCalls", 0),
            "nodesGenerated": self.counts.get("nodesGenerated", 0),
            "nodesProcessed": self.counts.get("nodesProcessed", 0),
            "maxNodesStored": self.counts.get("maxNodesStored", 0),
            "duplicatesStored": self.counts.get("duplicatesStored", 0),
            "pruneTimeNs": self.counts.get("pruneTimeNs", 0),
            "iterTimeNs": self.iter_time_ns,
        }


@dataclass
class SessionResult:
    status: str
    final: list[str] | None
    surviving: list[list[str]]
    iterations: list[IterationRecord]
    totals: dict
    engine: str
    heuristic: str

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "final": self.final,
            "surviving": self.surviving,
            "engine": self.engine,
            "heuristic": self.heuristic,
            "iterations": [r.to_json() for r in self.iterations],
            "totals": self.totals,
        }


class InteractiveSession:
    """One sequential diagnosis run, advanced one measurement at a time."""

    def __init__(self, config: SessionConfig, auto_select: bool = True,
                 script: Sequence[Formula] | None = None):
        if config.ld < 2:
            raise ValueError("ld must be >= 2 (a single leaf cannot discriminate)")
        if config.engine not in ENGINES:
            raise ValueError(f"unknown engine {config.engine!r}")
        if config.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {config.heuristic!r}")
        background_ok = check_requirements([], config.dpi.background, config.dpi.positive,
                                           config.dpi.negative)
        if background_ok.outcome != OK:
            raise UndiagnosableDpiError("background and positive tests already violate the "
                                        "requirements; no diagnosis can exist")
        all_formulas = [c.formula for c in config.dpi.components]
        if check_requirements(all_formulas, config.dpi.background, config.dpi.positive,
                              config.dpi.negative):
            raise FaultFreeDpiError("the system passes all tests; nothing to diagnose")
        self.config = config
        self.dpi0 = adjust_probabilities(config.dpi) if config.adjust_probs else config.dpi
        self.auto_select = auto_select
        self.script = list(script) if script is not None else None
        self.script_pos = 0
        self.p_acc: list[Formula] = []
        self.n_acc: list[Formula] = []
        self.state = DhsState()
        self.ok_nodes: list[Node] = []
        self.nok_nodes: list[Node] = []
        self.stats = EngineStats()
        self.query_checks = CheckCounter()
        self.records: list[IterationRecord] = []
        self.leading: list[Node] = []
        self.status = AWAITING
        self.final: list[str] | None = None
        self.current_query: QueryPartition | None = None
        self._advance()

    # -- engine side ------------------------------------------------------

    def current_dpi(self) -> Dpi:
        return self.dpi0.with_tests(self.p_acc, self.n_acc)

    def leading_sets(self) -> list[frozenset[int]]:
        return [nd.path_set() for nd in self.leading]

    def leading_ids(self) -> list[list[str]]:
        return [ids_of(self.dpi0, s) for s in self.leading_sets()]

    def weights(self) -> list[float]:
        return diagnosis_probabilities(self.leading_sets(), self.dpi0)

    def _advance(self) -> None:
        if len(self.records) >= self.config.max_iterations:
            raise MaxIterationsError(
                f"no final diagnosis after {self.config.max_iterations} iterations")
        started = time.perf_counter_ns()
        before = self.stats.snapshot()
        if self.config.engine == "dynamichs":
            self.leading = dynamic_hs(self.dpi0, self.p_acc, self.n_acc, self.config.ld,
                                      self.ok_nodes, self.nok_nodes, self.state, self.stats)
        else:
            self.leading = hs_tree(self.dpi0, self.p_acc, self.n_acc, self.config.ld,
                                   self.stats)
        if not self.leading:
            raise SessionError("engine returned no diagnosis for a faulty system")
        record = IterationRecord(
            index=len(self.records) + 1,
            leading=self.leading_ids(),
            weights=self.weights(),
            counts=snapshot_delta(self.stats.snapshot(), before),
        )
        self.records.append(record)
        if len(self.leading) == 1:
            self.status = FINAL
            self.final = record.leading[0]
            self.current_query = None
        else:
            self.status = AWAITING
            self.current_query = None
            if self.script is not None:
                # replay mode: the next measurement sentence is predetermined,
                # only its outcome is awaited
                if self.script_pos < len(self.script):
                    self.current_query = q_partition(self.script[self.script_pos],
                                                     self.leading_sets(),
                                                     self.current_dpi(),
                                                     self.query_checks)
                else:
                    self.status = EXHAUSTED
            elif self.auto_select:
                self.current_query = select_best(self.leading_sets(), self.current_dpi(),
                                                 self.config.heuristic,
                                                 self.config.include_implications,
                                                 self.query_checks)
                if self.current_query is None:
                    self.status = STUCK
        record.iter_time_ns = time.perf_counter_ns() - started

    # -- measurement side --------------------------------------------------

    def answer(self, positive: bool) -> None:
        """Answer the currently posed query (selected or scripted)."""
        if self.status != AWAITING or self.current_query is None:
            raise SessionError(f"session is not awaiting an answer (status {self.status})")
        sentence = self.current_query.sentence
        if self.script is not None:
            self.script_pos += 1
        self.apply_measurement(sentence, positive)

    def apply_measurement(self, sentence: Formula, positive: bool) -> None:
        """Record a measurement outcome and recompute the leading diagnoses."""
        if self.status == FINAL:
            raise SessionError("session already ended")
        record = self.records[-1]
        record.query = render(sentence)
        record.outcome = "positive" if positive else "negative"
        if positive:
            self.p_acc.append(sentence)
        else:
            self.n_acc.append(sentence)
        if self.config.engine == "dynamichs":
            self.ok_nodes, self.nok_nodes = self._split_by_validity()
        self._advance()

    def _split_by_validity(self) -> tuple[list[Node], list[Node]]:
        dpi = self.current_dpi()
        ok, nok = [], []
        for node in self.leading:
            if is_diagnosis(node.edges, dpi, self.query_checks):
                ok.append(node)
            else:
                nok.append(node)
        return ok, nok

    def result(self) -> SessionResult:
        return SessionResult(
            status=self.status,
            final=self.final,
            surviving=self.leading_ids(),
            iterations=self.records,
            totals=self.stats.snapshot(),
            engine=self.config.engine,
            heuristic=self.config.heuristic,
        )


class TargetDiagnosisOracle:
    """Answers queries as if ``target`` were the actual fault state: positive
    iff the system without the target components, the background and all
    positive knowledge so far entail the sentence.  The target then stays a
    diagnosis throughout the session."""

    def __init__(self, target: Sequence[int]):
        self.target = frozenset(target)

    def answer(self, sentence: Formula, dpi: Dpi) -> bool:
        premises = dpi.remainder(self.target) + list(dpi.background) + list(dpi.positive)
        return entails(premises, sentence)


def run_session(config: SessionConfig,
                oracle: TargetDiagnosisOracle | Callable[[Formula, Dpi], bool] | None = None,
                script: Sequence[tuple[Formula, bool]] | None = None) -> SessionResult:
    """Drive a session to completion with an oracle or a fixed script."""
    if (oracle is None) == (script is None):
        raise ValueError("provide exactly one of oracle or script")
    session = InteractiveSession(config, auto_select=script is None)
    if script is not None:
        step = 0
        while session.status == AWAITING:
            if step >= len(script):
                session.status = EXHAUSTED
                break
            sentence, positive = script[step]
            session.apply_measurement(sentence, positive)
            step += 1
        return session.result()
    answer = oracle.answer if hasattr(oracle, "answer") else oracle
    while session.status == AWAITING:
        session.answer(answer(session.current_query.sentence, session.current_dpi()))
    return session.result()
