"""Stateful hitting-set engine that carries its search tree across measurements.

Between calls the engine keeps the open queue, set-equal duplicate nodes, the
non-minimal ("superset") nodes and all stored conflicts.  After a measurement
invalidates part of the previous answer, update_tree repairs the forest:
invalidated diagnosis nodes are tested for redundancy (their path uses a
conflict that is no longer minimal) and every redundant node is pruned, with
set-equal duplicates reconstructed into replacements so no explored subtree is
lost.  Diagnoses that survived the measurement are re-used without any
reasoner work when they pop again.
"""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .conflict import find_min_conflict
from .dpi import Dpi
from .formula import Formula
from .hstree import Node, insert_sorted
from .stats import EngineStats

VALID = "valid"
NONMIN = "nonmin"

_UPDATE_ROUNDS_LIMIT = 100000


@dataclass
class DhsState:
    """Search state carried from one engine call to the next."""

    queue: list[Node] = field(default_factory=list)
    duplicates: list[Node] = field(default_factory=list)  # ascending cardinality
    supersets: list[Node] = field(default_factory=list)
    conflicts: list[tuple[int, ...]] = field(default_factory=list)  # antichain
    initialized: bool = False

    def stored_nodes(self) -> int:
        return len(self.queue) + len(self.duplicates) + len(self.supersets)


def _insert_duplicate(duplicates: list[Node], node: Node) -> None:
    """Keep ascending cardinality; later arrivals go after equal-sized ones."""
    position = bisect.bisect_right([len(d.edges) for d in duplicates], len(node.edges))
    duplicates.insert(position, node)


def _add_conflict(conflicts: list[tuple[int, ...]], new: tuple[int, ...]) -> None:
    """Insert keeping the antichain property: drop proper supersets of ``new``."""
    new_set = set(new)
    conflicts[:] = [c for c in conflicts if not new_set < set(c)]
    if new not in conflicts:
        conflicts.append(new)


def dynamic_hs(dpi0: Dpi, new_positive: Sequence[Formula], new_negative: Sequence[Formula],
               ld: int, ok_diagnoses: list[Node], nok_diagnoses: list[Node],
               state: DhsState, stats: EngineStats | None = None) -> list[Node]:
    """Compute up to ``ld`` most probable minimal diagnoses, reusing ``state``.

    ``ok_diagnoses``/``nok_diagnoses`` partition the previous answer into the
    diagnoses that survived the latest measurement and those it invalidated;
    both lists may be pruned or repaired in place.
    """
    if ld < 1:
        raise ValueError("ld must be >= 1")
    if stats is None:
        stats = EngineStats()
    started = time.perf_counter_ns()
    dpi = dpi0.with_tests(new_positive, new_negative)

    if not state.initialized:
        state.queue = [Node([], [])]
        state.initialized = True
    else:
        update_tree(dpi, ok_diagnoses, nok_diagnoses, state, stats)

    surviving_sets = {nd.path_set() for nd in ok_diagnoses}
    diagnoses: list[Node] = []

    while state.queue and len(diagnoses) < ld:
        node = state.queue.pop(0)
        stats.nodes_processed += 1
        if node.path_set() in surviving_sets:
            diagnoses.append(node)  # already known to be a diagnosis: no reasoning
            stats.observe_storage(state.stored_nodes() + len(diagnoses))
            continue
        stats.nodes_generated += 1  # a labeling event
        label = _dynamic_label(dpi, node, diagnoses, state, stats)
        if label == VALID:
            diagnoses.append(node)
        elif label == NONMIN:
            state.supersets.append(node)
        else:
            _expand(node, label, state, dpi, stats)
        stats.observe_storage(state.stored_nodes() + len(diagnoses))

    stats.total_time_ns += time.perf_counter_ns() - started
    return diagnoses


def _dynamic_label(dpi: Dpi, node: Node, diagnoses: list[Node], state: DhsState,
                   stats: EngineStats):
    """Label a popped node: NONMIN, VALID, or the minimal conflict to expand with."""
    path = node.path_set()
    for d in diagnoses:
        if d.path_set() < path:
            return NONMIN
    for c in state.conflicts:
        if not path & set(c):
            # stored conflicts may have shrunk since they were computed: re-verify
            refined = find_min_conflict(list(c), dpi, stats, small=True)
            if refined is None:
                raise AssertionError("stored conflict vanished although tests only grow")
            if set(refined) == set(c):
                return c
            prune(refined, dpi, state, {"diagnoses": diagnoses}, stats)
            return refined
    fresh = find_min_conflict(sorted(set(dpi.indices) - path), dpi, stats)
    if fresh is None:
        return VALID
    _add_conflict(state.conflicts, fresh)
    return fresh


def _expand(node: Node, label: tuple[int, ...], state: DhsState, dpi: Dpi,
            stats: EngineStats) -> None:
    """Queue the children of a conflict-labeled node; set-equal twins of an
    active node are parked as duplicates instead."""
    active_sets = {nd.path_set() for nd in state.queue}
    active_sets.update(nd.path_set() for nd in state.supersets)
    for e in label:
        child = Node(node.edges + [e], node.cs + [label])
        if child.path_set() in active_sets:
            _insert_duplicate(state.duplicates, child)
            stats.duplicates_stored += 1
            stats.nodes_generated += 1
        else:
            insert_sorted(state.queue, child, dpi)


def update_tree(dpi: Dpi, ok_diagnoses: list[Node], nok_diagnoses: list[Node],
                state: DhsState, stats: EngineStats) -> None:
    """Repair the stored tree after a measurement.

    Every invalidated diagnosis node is checked for redundancy; a witness
    triggers a prune, which may delete or replace nodes in any collection
    (including ``nok_diagnoses`` itself, so membership is re-read each round).
    Afterwards the surviving invalidated nodes, the superset nodes that no
    longer cover a surviving diagnosis, and all surviving diagnoses re-enter
    the queue.
    """
    processed: set[int] = set()
    rounds = 0
    while True:
        node = next((nd for nd in nok_diagnoses if id(nd) not in processed), None)
        if node is None:
            break
        rounds += 1
        if rounds > _UPDATE_ROUNDS_LIMIT:
            raise AssertionError("update_tree failed to converge")
        witness = redundancy_witness(node, dpi, stats)
        if witness is None:
            processed.add(id(node))
        else:
            prune(witness[0], dpi, state, {"ok": ok_diagnoses, "nok": nok_diagnoses}, stats)

    for node in nok_diagnoses:
        insert_sorted(state.queue, node, dpi)
    nok_diagnoses.clear()

    surviving = [d.path_set() for d in ok_diagnoses]
    kept: list[Node] = []
    for node in state.supersets:
        if any(s < node.path_set() for s in surviving):
            kept.append(node)
        else:
            insert_sorted(state.queue, node, dpi)
    state.supersets[:] = kept

    for node in ok_diagnoses:
        insert_sorted(state.queue, node, dpi)


def redundancy_witness(node: Node, dpi: Dpi,
                       stats: EngineStats | None = None) -> tuple[tuple[int, ...], int] | None:
    """Find (conflict X, edge position k) proving ``node`` redundant, if any.

    Quick check first: one search over the union of the node's conflict labels
    minus its own edges; any conflict found there that is a proper subset of
    some label is a witness (the maximal such position is returned).  If that
    fails, the complete check searches each label minus its outgoing edge, in
    ascending position order.
    """
    if not node.edges:
        return None
    union = set().union(*(set(c) for c in node.cs)) - set(node.edges)
    quick = find_min_conflict(sorted(union), dpi, stats, small=True)
    if quick is not None:
        quick_set = set(quick)
        hits = [i + 1 for i, c in enumerate(node.cs) if quick_set < set(c)]
        if hits:
            return quick, max(hits)
    for i, c in enumerate(node.cs):
        restricted = sorted(set(c) - {node.edges[i]})
        found = find_min_conflict(restricted, dpi, stats, small=True)
        if found is not None:
            return found, i + 1
    return None


def _scan_relabel(node: Node, new_conflict: tuple[int, ...]) -> int:
    """Replace every conflict label that properly contains ``new_conflict``,
    returning the maximal edge position whose label shrank away from under its
    own edge (0 = node stays justified)."""
    new_set = set(new_conflict)
    redundant_at = 0
    for i, label in enumerate(node.cs):
        label_set = set(label)
        if new_set < label_set:
            if node.edges[i] in label_set - new_set:
                redundant_at = i + 1
            node.cs[i] = new_conflict
    return redundant_at


def _reconstruct(deleted: Node, k: int, pool: Iterable[Node]) -> Node | None:
    """Build a replacement for ``deleted`` from the first qualifying duplicate.

    A duplicate with at least ``k`` edges whose component set equals the set of
    the deleted node's first edges can stand in for that prefix; the deleted
    node's remaining edges and labels are appended unchanged.  Modifiers are
    copied, never consumed.
    """
    for candidate in pool:
        m = len(candidate.edges)
        if m < k or m > len(deleted.edges):
            continue
        if set(candidate.edges) == set(deleted.edges[:m]):
            return Node(candidate.edges + deleted.edges[m:],
                        candidate.cs + deleted.cs[m:])
    return None


def prune(new_conflict: tuple[int, ...], dpi: Dpi, state: DhsState,
          extra_collections: dict[str, list[Node]], stats: EngineStats) -> None:
    """Propagate a newly minimal conflict through all stored nodes.

    Every node whose labels properly contain ``new_conflict`` is relabeled in
    place; nodes left standing on an edge outside the shrunken label are
    redundant and deleted, each with a reconstruction attempt from the (already
    cleaned) duplicates.  The duplicate list is processed first, in ascending
    cardinality, so that every modifier used for reconstruction is itself known
    non-redundant.  Finally the stored conflicts adopt ``new_conflict`` and
    lose its proper supersets.
    """
    started = time.perf_counter_ns()

    cleaned: list[Node] = []
    for node in state.duplicates:
        k = _scan_relabel(node, new_conflict)
        if k == 0:
            cleaned.append(node)
        else:
            replacement = _reconstruct(node, k, cleaned)
            if replacement is not None:
                cleaned.append(replacement)
    state.duplicates[:] = cleaned

    survivors: list[Node] = []
    queue_replacements: list[Node] = []
    for node in state.queue:
        k = _scan_relabel(node, new_conflict)
        if k == 0:
            survivors.append(node)
            continue
        replacement = _reconstruct(node, k, state.duplicates)
        if replacement is not None:
            queue_replacements.append(replacement)
    state.queue[:] = survivors
    for node in queue_replacements:
        _place(node, state, state.queue, dpi)

    for collection in [state.supersets] + list(extra_collections.values()):
        index = 0
        while index < len(collection):
            node = collection[index]
            k = _scan_relabel(node, new_conflict)
            if k == 0:
                index += 1
                continue
            del collection[index]
            replacement = _reconstruct(node, k, state.duplicates)
            if replacement is not None:
                _place(replacement, state, collection, dpi, index)
                # replacements are built from already-clean labels
                if index < len(collection) and collection[index] is replacement:
                    index += 1

    _add_conflict(state.conflicts, new_conflict)
    stats.prune_time_ns += time.perf_counter_ns() - started


def _place(node: Node, state: DhsState, collection: list[Node], dpi: Dpi,
           position: int | None = None) -> None:
    """Put a reconstructed node into its collection, unless a set-equal node is
    already active, in which case it is parked as a duplicate."""
    path = node.path_set()
    for nd in state.queue + state.supersets:
        if nd.path_set() == path:
            _insert_duplicate(state.duplicates, node)
            return
    if collection is state.queue:
        insert_sorted(state.queue, node, dpi)
    elif position is None:
        collection.append(node)
    else:
        collection.insert(position, node)


def state_to_json(state: DhsState, dpi: Dpi) -> dict:
    def node_doc(node: Node) -> dict:
        return {"edges": [dpi.id_of(i) for i in node.edges],
                "conflicts": [[dpi.id_of(i) for i in c] for c in node.cs]}

    return {
        "queue": [node_doc(nd) for nd in state.queue],
        "duplicates": [node_doc(nd) for nd in state.duplicates],
        "supersets": [node_doc(nd) for nd in state.supersets],
        "conflicts": [[dpi.id_of(i) for i in c] for c in state.conflicts],
        "initialized": state.initialized,
    }


def state_from_json(document: dict, dpi: Dpi) -> DhsState:
    def node_from(doc: dict) -> Node:
        return Node([dpi.index_of(cid) for cid in doc["edges"]],
                    [tuple(dpi.index_of(cid) for cid in c) for c in doc["conflicts"]])

    return DhsState(
        queue=[node_from(d) for d in document["queue"]],
        duplicates=[node_from(d) for d in document["duplicates"]],
        supersets=[node_from(d) for d in document["supersets"]],
        conflicts=[tuple(dpi.index_of(cid) for cid in c) for c in document["conflicts"]],
        initialized=bool(document.get("initialized", True)),
    )
