"""Stateless best-first hitting-set tree over minimal conflicts.

Each node is the edge-label path from the root; its weight is the probability
that exactly the components on the path are faulty.  The queue pops heaviest
first, ties broken by smaller cardinality and then by the sorted component-id
tuple, so both engines enumerate diagnoses in the identical order.  With all
fault probabilities below 0.5 a subset always pops before its supersets.
"""

from __future__ import annotations

import bisect
import time
from typing import Sequence

from .conflict import find_min_conflict
from .dpi import Dpi
from .formula import Formula
from .stats import EngineStats


class Node:
    """A tree path: edge labels in traversal order and the conflict that each
    edge was drawn from."""

    __slots__ = ("edges", "cs")

    def __init__(self, edges: list[int], cs: list[tuple[int, ...]]):
        self.edges = edges
        self.cs = cs

    def path_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def __repr__(self) -> str:
        return f"Node({self.edges})"


def insert_sorted(queue: list[Node], node: Node, dpi: Dpi) -> None:
    """Insert keeping best-first order; equal keys go after existing ones."""
    bisect.insort(queue, node, key=lambda nd: dpi.order_key(nd.edges))


def hs_tree(dpi0: Dpi, new_positive: Sequence[Formula] = (), new_negative: Sequence[Formula] = (),
            ld: int = 1, stats: EngineStats | None = None,
            conflicts_out: list[tuple[int, ...]] | None = None) -> list[Node]:
    """Compute up to ``ld`` most probable minimal diagnoses from scratch.

    Label order per popped node: close if superset of a found diagnosis, close
    if its component set was already processed, reuse a disjoint stored
    conflict, otherwise ask the reasoner for a fresh minimal conflict over the
    remaining components ("no conflict" marks the node a diagnosis).
    ``conflicts_out`` collects the minimal conflicts used as labels.
    """
    if ld < 1:
        raise ValueError("ld must be >= 1")
    if stats is None:
        stats = EngineStats()
    started = time.perf_counter_ns()
    dpi = dpi0.with_tests(new_positive, new_negative)
    all_indices = set(dpi.indices)

    queue: list[Node] = [Node([], [])]
    diagnoses: list[Node] = []
    conflicts: list[tuple[int, ...]] = conflicts_out if conflicts_out is not None else []
    processed_sets: set[frozenset[int]] = set()

    while queue and len(diagnoses) < ld:
        node = queue.pop(0)
        stats.nodes_processed += 1
        stats.nodes_generated += 1  # one labeling event per pop
        path = node.path_set()
        label: tuple[int, ...] | None = None
        closed = False
        if any(d.path_set() <= path for d in diagnoses):
            closed = True
        elif path in processed_sets:
            closed = True
        else:
            for c in conflicts:
                if not path & set(c):
                    label = c
                    break
            else:
                label = find_min_conflict(sorted(all_indices - path), dpi, stats)
                if label is None:
                    diagnoses.append(node)
                else:
                    conflicts.append(label)
        processed_sets.add(path)
        if not closed and label is not None:
            for e in label:
                insert_sorted(queue, Node(node.edges + [e], node.cs + [label]), dpi)
        stats.observe_storage(len(queue) + len(diagnoses))

    stats.total_time_ns += time.perf_counter_ns() - started
    return diagnoses
