import pytest

from conftest import make_dpi
from mbdiag.dpi import brute_force_minimal_diagnoses
from mbdiag.formula import parse_formula
from mbdiag.hstree import Node, hs_tree, insert_sorted
from mbdiag.stats import EngineStats

M1 = parse_formula("A -> C")
M2 = parse_formula("A -> !B")
M3 = parse_formula("A -> !C")


def _run(dpi, positive=(), negative=(), ld=5):
    stats = EngineStats()
    conflicts = []
    diagnoses = hs_tree(dpi, positive, negative, ld, stats, conflicts_out=conflicts)
    return [d.edges for d in diagnoses], conflicts, stats


def test_first_iteration_golden(demo_dpi):
    diagnoses, conflicts, stats = _run(demo_dpi)
    assert diagnoses == [[1, 3], [1, 4], [2, 3], [2, 5]]
    assert conflicts == [(1, 2), (2, 3, 4), (1, 3, 5), (3, 4, 5)]
    assert (stats.hard_calls, stats.medium_calls, stats.easy_calls) == (4, 4, 0)
    assert stats.nodes_generated == 12 and stats.nodes_processed == 12
    assert stats.max_nodes_stored == 8
    assert stats.duplicates_stored == 0


def test_second_iteration_golden(demo_dpi):
    diagnoses, conflicts, stats = _run(demo_dpi, negative=[M1])
    assert diagnoses == [[1, 4], [2, 5]]
    assert conflicts == [(1, 2), (2, 4), (1, 5), (4, 5)]
    assert (stats.hard_calls, stats.medium_calls, stats.easy_calls) == (4, 2, 0)
    assert stats.nodes_generated == 9 and stats.nodes_processed == 9


def test_third_iteration_golden(demo_dpi):
    diagnoses, conflicts, stats = _run(demo_dpi, negative=[M1, M2])
    assert diagnoses == [[1, 4], [1, 2, 3, 5]]
    assert conflicts == [(1,), (2, 4), (3, 4), (4, 5)]
    assert (stats.hard_calls, stats.medium_calls, stats.easy_calls) == (4, 2, 0)
    assert stats.nodes_generated == 8 and stats.nodes_processed == 8


def test_fourth_iteration_golden(demo_dpi):
    diagnoses, conflicts, stats = _run(demo_dpi, positive=[M3], negative=[M1, M2])
    assert diagnoses == [[1, 4]]
    assert conflicts == [(1,), (4,)]
    assert (stats.hard_calls, stats.medium_calls, stats.easy_calls) == (2, 1, 0)
    assert stats.nodes_generated == 3 and stats.nodes_processed == 3


def test_every_pop_is_one_labeling_event(demo_dpi):
    _, _, stats = _run(demo_dpi)
    assert stats.nodes_generated == stats.nodes_processed


def test_stateless_repeatability(demo_dpi):
    assert _run(demo_dpi)[:2] == _run(demo_dpi)[:2]


def test_ld_truncates_breadth_first(demo_dpi):
    diagnoses, _, stats = _run(demo_dpi, ld=2)
    assert diagnoses == [[1, 3], [1, 4]]
    full = _run(demo_dpi, ld=5)[2]
    assert stats.nodes_processed < full.nodes_processed

    assert _run(demo_dpi, ld=1)[0] == [[1, 3]]


def test_ld_zero_rejected(demo_dpi):
    with pytest.raises(ValueError):
        hs_tree(demo_dpi, ld=0)


def test_fault_free_system_yields_the_empty_diagnosis():
    dpi = make_dpi(["A -> B"], negative=["C"])
    diagnoses = hs_tree(dpi, ld=3)
    assert [d.edges for d in diagnoses] == [[]]


def test_output_weights_are_non_increasing(demo_dpi):
    dpi = make_dpi(["A -> !B", "A -> B", "A -> !C", "B -> C", "A -> B | C"],
                   negative=["!A"], probs=[0.05, 0.45, 0.3, 0.1, 0.2])
    diagnoses = hs_tree(dpi, ld=6)
    weights = [dpi.weight(d.path_set()) for d in diagnoses]
    assert weights == sorted(weights, reverse=True)
    expected = sorted(brute_force_minimal_diagnoses(dpi), key=dpi.order_key)
    assert [d.path_set() for d in diagnoses] == expected[:6]


def test_insert_sorted_is_stable_for_equal_keys(demo_dpi):
    queue = []
    first = Node([1, 2], [])
    twin = Node([2, 1], [])
    insert_sorted(queue, first, demo_dpi)
    insert_sorted(queue, Node([1], []), demo_dpi)
    insert_sorted(queue, twin, demo_dpi)
    assert [n.edges for n in queue] == [[1], [1, 2], [2, 1]]
    assert queue[1] is first and queue[2] is twin


def test_node_path_set_and_repr():
    node = Node([3, 1], [(1, 2, 3), (1, 2)])
    assert node.path_set() == frozenset({1, 3})
    assert "3, 1" in repr(node)
