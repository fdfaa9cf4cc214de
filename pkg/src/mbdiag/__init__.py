"""Sequential model-based diagnosis over propositional systems.

Two interchangeable hitting-set engines (a stateless best-first tree and a
stateful tree that is repaired between measurements), a deterministic
minimal-conflict finder, measurement selection heuristics, and session, CLI,
benchmark and HTTP layers on top.
"""

from .conflict import find_min_conflict
from .dpi import (Component, Dpi, DpiFormatError, adjust_probabilities,
                  brute_force_minimal_conflicts, brute_force_minimal_diagnoses, dump_dpi,
                  ids_of, is_conflict, is_diagnosis, load_dpi, minimal_hitting_sets)
from .dynamichs import DhsState, dynamic_hs, state_from_json, state_to_json
from .formula import Formula, FormulaError, atoms, parse_formula, render, to_clauses
from .hstree import Node, hs_tree
from .query import HEURISTICS, QueryPartition, generate_candidates, q_partition, select_best
from .reasoner import CheckCounter, check_requirements, entails, is_satisfiable
from .session import (ENGINES, FaultFreeDpiError, InteractiveSession, IterationRecord,
                      MaxIterationsError, SessionConfig, SessionError, SessionResult,
                      TargetDiagnosisOracle, UndiagnosableDpiError, run_session)
from .stats import EngineStats

__version__ = "0.1.0"

__all__ = [
    "CheckCounter", "Component", "DhsState", "Dpi", "DpiFormatError", "ENGINES",
    "EngineStats", "FaultFreeDpiError", "Formula", "FormulaError", "HEURISTICS",
    "InteractiveSession", "IterationRecord", "MaxIterationsError", "Node",
    "QueryPartition", "SessionConfig", "SessionError", "SessionResult",
    "TargetDiagnosisOracle", "UndiagnosableDpiError", "adjust_probabilities", "atoms",
    "brute_force_minimal_conflicts", "brute_force_minimal_diagnoses", "check_requirements",
    "dump_dpi", "dynamic_hs", "entails", "find_min_conflict", "generate_candidates",
    "hs_tree", "ids_of", "is_conflict", "is_diagnosis", "is_satisfiable", "load_dpi",
    "minimal_hitting_sets", "parse_formula", "q_partition", "render", "run_session",
    "select_best", "state_from_json", "state_to_json", "to_clauses",
]
