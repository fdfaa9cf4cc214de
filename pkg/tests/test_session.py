import random

import pytest

from conftest import make_dpi
from mbdiag.bench import random_dpi
from mbdiag.dpi import brute_force_minimal_diagnoses, ids_of
from mbdiag.formula import parse_formula
from mbdiag.session import (AWAITING, EXHAUSTED, FINAL, STUCK,
                            FaultFreeDpiError, InteractiveSession,
                            MaxIterationsError, SessionConfig, SessionError,
                            TargetDiagnosisOracle, UndiagnosableDpiError,
                            run_session)

M1 = parse_formula("A -> C")
M2 = parse_formula("A -> !B")
M3 = parse_formula("A -> !C")
SCRIPT = [(M1, False), (M2, False), (M3, True)]


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------

def test_ld_one_rejected(demo_dpi):
    with pytest.raises(ValueError, match="ld"):
        InteractiveSession(SessionConfig(dpi=demo_dpi, ld=1))


def test_unknown_engine_and_heuristic_rejected(demo_dpi):
    with pytest.raises(ValueError, match="engine"):
        InteractiveSession(SessionConfig(dpi=demo_dpi, engine="astar"))
    with pytest.raises(ValueError, match="heuristic"):
        InteractiveSession(SessionConfig(dpi=demo_dpi, heuristic="gain"))


def test_fault_free_system_rejected():
    dpi = make_dpi(["A"], negative=["B"])
    with pytest.raises(FaultFreeDpiError):
        InteractiveSession(SessionConfig(dpi=dpi))


def test_undiagnosable_background_rejected():
    dpi = make_dpi(["B"], background=["A"], negative=["A"])
    with pytest.raises(UndiagnosableDpiError):
        InteractiveSession(SessionConfig(dpi=dpi))


def test_component_probabilities_are_adjusted_below_half(demo_dpi):
    dpi = make_dpi(["A -> !B", "A -> B"], negative=["!A"], probs=[0.8, 0.6])
    session = InteractiveSession(SessionConfig(dpi=dpi))
    assert all(c.prob < 0.5 for c in session.dpi0.components)

    kept = InteractiveSession(SessionConfig(dpi=demo_dpi))
    assert [c.prob for c in kept.dpi0.components] == [0.25] * 5


# ---------------------------------------------------------------------------
# Scripted replay
# ---------------------------------------------------------------------------

def test_scripted_replay_matches_evolution_table(demo_dpi):
    for engine in ("dynamichs", "hstree"):
        result = run_session(SessionConfig(dpi=demo_dpi, ld=5, engine=engine),
                             script=SCRIPT)
        assert result.status == FINAL
        assert result.final == ["ax1", "ax4"]
        assert [r.leading for r in result.iterations] == [
            [["ax1", "ax3"], ["ax1", "ax4"], ["ax2", "ax3"], ["ax2", "ax5"]],
            [["ax1", "ax4"], ["ax2", "ax5"]],
            [["ax1", "ax4"], ["ax1", "ax2", "ax3", "ax5"]],
            [["ax1", "ax4"]],
        ]
        assert [(r.query, r.outcome) for r in result.iterations] == [
            ("A -> C", "negative"), ("A -> !B", "negative"),
            ("A -> !C", "positive"), (None, None)]


def test_script_exhaustion(demo_dpi):
    result = run_session(SessionConfig(dpi=demo_dpi, ld=5), script=SCRIPT[:1])
    assert result.status == EXHAUSTED
    assert result.final is None
    assert result.surviving == [["ax1", "ax4"], ["ax2", "ax5"]]


def test_sentence_script_session_poses_scripted_queries(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5),
                                 script=[M1, M2, M3])
    seen = []
    while session.status == AWAITING:
        seen.append(session.current_query.text)
        outcome = len(seen) == 3
        session.answer(outcome)
    assert seen == ["A -> C", "A -> !B", "A -> !C"]
    assert session.status == FINAL and session.final == ["ax1", "ax4"]


def test_sentence_script_session_exhausts(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5), script=[M1])
    session.answer(False)
    assert session.status == EXHAUSTED
    assert session.current_query is None
    with pytest.raises(SessionError):
        session.answer(True)


def test_run_session_requires_exactly_one_driver(demo_dpi):
    config = SessionConfig(dpi=demo_dpi)
    with pytest.raises(ValueError):
        run_session(config)
    with pytest.raises(ValueError):
        run_session(config, oracle=TargetDiagnosisOracle([1, 4]), script=SCRIPT)


# ---------------------------------------------------------------------------
# Oracle-driven sessions
# ---------------------------------------------------------------------------

def test_oracle_answers_follow_the_target(demo_dpi):
    oracle = TargetDiagnosisOracle([1, 4])
    assert oracle.answer(M1, demo_dpi) is False
    assert oracle.answer(M3, demo_dpi) is True
    # sentences already in the positive knowledge answer positively
    richer = demo_dpi.with_tests([parse_formula("B")], [])
    assert oracle.answer(parse_formula("B"), richer) is True


def test_oracle_driven_demo_session(demo_dpi):
    for engine in ("dynamichs", "hstree"):
        result = run_session(SessionConfig(dpi=demo_dpi, ld=5, engine=engine,
                                           heuristic="ent"),
                             oracle=TargetDiagnosisOracle([1, 4]))
        assert result.status == FINAL
        assert result.final == ["ax1", "ax4"]
        assert [(r.query, r.outcome) for r in result.iterations] == [
            ("!B -> !A", "positive"), ("!C -> !A", "negative"), (None, None)]
        assert [r.leading for r in result.iterations] == [
            [["ax1", "ax3"], ["ax1", "ax4"], ["ax2", "ax3"], ["ax2", "ax5"]],
            [["ax1", "ax3"], ["ax1", "ax4"]],
            [["ax1", "ax4"]],
        ]


def test_target_preserved_and_sessions_converge():
    rng = random.Random(848484)
    for _ in range(10):
        dpi = random_dpi(rng, 4, 8, 5)
        target = rng.choice(brute_force_minimal_diagnoses(dpi))
        config = SessionConfig(dpi=dpi, ld=4,
                               heuristic=rng.choice(("ent", "spl", "mps")))
        result = run_session(config, oracle=TargetDiagnosisOracle(target))
        ids = ids_of(dpi, sorted(target))
        if result.status == FINAL:
            assert result.final == ids
        else:
            assert result.status == STUCK
            assert ids in result.surviving


def test_engines_agree_on_queries_and_final():
    rng = random.Random(959595)
    for _ in range(6):
        dpi = random_dpi(rng, 4, 8, 5)
        target = rng.choice(brute_force_minimal_diagnoses(dpi))
        outputs = []
        for engine in ("hstree", "dynamichs"):
            config = SessionConfig(dpi=dpi, ld=4, engine=engine, heuristic="mps")
            result = run_session(config, oracle=TargetDiagnosisOracle(target))
            outputs.append((result.status, result.final,
                            [(r.query, r.outcome) for r in result.iterations],
                            [r.leading for r in result.iterations]))
        assert outputs[0] == outputs[1]


# ---------------------------------------------------------------------------
# Interactive stepping, records and results
# ---------------------------------------------------------------------------

def test_single_diagnosis_finishes_without_query():
    dpi = make_dpi(["A"], negative=["A"])
    session = InteractiveSession(SessionConfig(dpi=dpi, ld=3))
    assert session.status == FINAL
    assert session.final == ["ax1"]
    assert session.records[0].query is None


def test_answer_after_final_rejected(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5),
                                 script=[M1, M2, M3])
    for outcome in (False, False, True):
        session.answer(outcome)
    assert session.status == FINAL
    with pytest.raises(SessionError, match="not awaiting"):
        session.answer(True)
    with pytest.raises(SessionError, match="ended"):
        session.apply_measurement(M1, True)


def test_max_iterations_guard(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5,
                                               max_iterations=1))
    with pytest.raises(MaxIterationsError):
        session.apply_measurement(M1, False)


def test_iteration_records_carry_counts_and_timing(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5))
    record = session.records[0]
    assert record.index == 1
    assert record.counts["hardCalls"] == 4
    assert record.counts["nodesGenerated"] == 12
    assert record.iter_time_ns > 0
    assert record.weights == pytest.approx([0.25] * 4)
    doc = record.to_json()
    assert doc["iteration"] == 1 and doc["hardCalls"] == 4
    assert doc["leadingDiagnoses"] == record.leading


def test_result_document_shape(demo_dpi):
    result = run_session(SessionConfig(dpi=demo_dpi, ld=5), script=SCRIPT)
    doc = result.to_json()
    assert doc["status"] == "final"
    assert doc["final"] == ["ax1", "ax4"]
    assert doc["engine"] == "dynamichs" and doc["heuristic"] == "ent"
    assert len(doc["iterations"]) == 4
    assert doc["totals"]["hardCalls"] == 6
    assert doc["totals"]["nodesGenerated"] == 19
    assert doc["iterations"][0]["query"] == "A -> C"


def test_query_reasoning_is_not_charged_to_the_engine(demo_dpi):
    selecting = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5))
    scripted = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5),
                                  auto_select=False)
    assert selecting.query_checks.sat_checks > 0
    assert scripted.query_checks.sat_checks == 0
    counts = {k: v for k, v in selecting.stats.snapshot().items()
              if not k.endswith("TimeNs")}
    expected = {k: v for k, v in scripted.stats.snapshot().items()
                if not k.endswith("TimeNs")}
    assert counts == expected


def test_literal_only_pool_can_get_stuck(demo_dpi):
    session = InteractiveSession(SessionConfig(dpi=demo_dpi, ld=5,
                                               include_implications=False))
    assert session.status == STUCK
    assert session.current_query is None
    assert len(session.leading) == 4
