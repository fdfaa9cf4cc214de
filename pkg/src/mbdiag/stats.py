"""Counters shared by both diagnosis engines.

Reasoner work is tallied per minimal-conflict computation: a fresh search over
(roughly) the whole system that returns a conflict is a hard call, the same
search concluding "no conflict" is a medium call, and any search over a small
universe (stored-conflict re-verification, redundancy checks) is an easy call.
SAT checks are counted individually underneath those calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

HARD = "hard"
MEDIUM = "medium"
EASY = "easy"


@dataclass
class EngineStats:
    hard_calls: int = 0
    medium_calls: int = 0
    easy_calls: int = 0
    sat_checks: int = 0
    hard_time_ns: int = 0
    medium_time_ns: int = 0
    easy_time_ns: int = 0
    nodes_generated: int = 0
    nodes_processed: int = 0
    max_nodes_stored: int = 0
    duplicates_stored: int = 0
    prune_time_ns: int = 0
    total_time_ns: int = 0

    def record_call(self, category: str, duration_ns: int, sat_checks: int) -> None:
        if category == HARD:
            self.hard_calls += 1
            self.hard_time_ns += duration_ns
        elif category == MEDIUM:
            self.medium_calls += 1
            self.medium_time_ns += duration_ns
        elif category == EASY:
            self.easy_calls += 1
            self.easy_time_ns += duration_ns
        else:
            raise ValueError(f"unknown call category {category!r}")
        self.sat_checks += sat_checks

    def observe_storage(self, stored_nodes: int) -> None:
        if stored_nodes > self.max_nodes_stored:
            self.max_nodes_stored = stored_nodes

    def snapshot(self) -> dict[str, int]:
        return {
            "hardCalls": self.hard_calls,
            "mediumCalls": self.medium_calls,
            "easyCalls": self.easy_calls,
            "satChecks": self.sat_checks,
            "nodesGenerated": self.nodes_generated,
            "nodesProcessed": self.nodes_processed,
            "maxNodesStored": self.max_nodes_stored,
            "duplicatesStored": self.duplicates_stored,
            "pruneTimeNs": self.prune_time_ns,
            "totalTimeNs": self.total_time_ns,
        }


def snapshot_delta(after: dict[str, int], before: dict[str, int]) -> dict[str, int]:
    """Per-phase view of two cumulative snapshots (max counters keep 'after')."""
    out = {}
    for key, value in after.items():
        if key == "maxNodesStored":
            out[key] = value
        else:
            out[key] = value - before[key]
    return out
