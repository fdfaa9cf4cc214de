import itertools

import pytest
from hypothesis import given, strategies as st

from mbdiag.formula import (And, Atom, Const, FormulaError, Iff, Implies, Not, Or, atoms,
                            clauses_for, parse_formula, render, to_clauses)
from mbdiag.reasoner import is_satisfiable

A, B, C = Atom("A"), Atom("B"), Atom("C")


# -- parsing ---------------------------------------------------------------

def test_parse_precedence():
    assert parse_formula("A -> B | C") == Implies(A, Or(B, C))
    assert parse_formula("A | B & C") == Or(A, And(B, C))
    assert parse_formula("!A & B") == And(Not(A), B)
    assert parse_formula("A <-> B -> C") == Iff(A, Implies(B, C))


def test_parse_associativity():
    assert parse_formula("A -> B -> C") == Implies(A, Implies(B, C))
    assert parse_formula("A <-> B <-> C") == Iff(Iff(A, B), C)
    assert parse_formula("A & B & C") == And(And(A, B), C)
    assert parse_formula("A | B | C") == Or(Or(A, B), C)


def test_parse_unicode_and_double_bar():
    assert parse_formula("¬A ∧ B") == And(Not(A), B)
    assert parse_formula("A ∨ B") == Or(A, B)
    assert parse_formula("A → B") == Implies(A, B)
    assert parse_formula("A ↔ B") == Iff(A, B)
    assert parse_formula("A || B") == Or(A, B)


def test_parse_constants_and_parens():
    assert parse_formula("true") == Const(True)
    assert parse_formula("false & A") == And(Const(False), A)
    assert parse_formula("(A -> B) -> C") == Implies(Implies(A, B), C)
    assert parse_formula("!!A") == Not(Not(A))


def test_parse_errors_carry_positions():
    with pytest.raises(FormulaError):
        parse_formula("")
    with pytest.raises(FormulaError) as err:
        parse_formula("A -> ")
    assert err.value.position == 5
    with pytest.raises(FormulaError) as err:
        parse_formula("A @ B")
    assert err.value.position == 1
    with pytest.raises(FormulaError):
        parse_formula("A B")
    with pytest.raises(FormulaError):
        parse_formula("(A -> B")
    with pytest.raises(FormulaError):
        parse_formula(42)


def test_reserved_names_rejected():
    with pytest.raises(FormulaError):
        parse_formula("__aux1 -> A")


# -- rendering -------------------------------------------------------------

def test_render_minimal_parens():
    assert render(parse_formula("A -> (B | C)")) == "A -> B | C"
    assert render(parse_formula("(A | B) & C")) == "(A | B) & C"
    assert render(parse_formula("A -> B -> C")) == "A -> B -> C"
    assert render(parse_formula("(A -> B) -> C")) == "(A -> B) -> C"
    assert render(Not(And(A, B))) == "!(A & B)"
    assert render(Not(Not(A))) == "!!A"
    assert render(Iff(Iff(A, B), C)) == "A <-> B <-> C"
    assert render(Iff(A, Iff(B, C))) == "A <-> (B <-> C)"


names = st.sampled_from(["A", "B", "C", "D", "E"])
formulas = st.recursive(
    st.one_of(st.builds(Atom, names), st.builds(Const, st.booleans())),
    lambda sub: st.one_of(st.builds(Not, sub), st.builds(And, sub, sub),
                          st.builds(Or, sub, sub), st.builds(Implies, sub, sub),
                          st.builds(Iff, sub, sub)),
    max_leaves=12)


@given(formulas)
def test_render_parse_round_trip(f):
    assert parse_formula(render(f)) == f


def test_atoms():
    assert atoms(parse_formula("A -> !B & (C | A)")) == {"A", "B", "C"}
    assert atoms(Const(True)) == frozenset()


# -- clause conversion ------------------------------------------------------

def _evaluate(f, model: dict) -> bool:
    if isinstance(f, Atom):
        return model[f.name]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _evaluate(f.child, model)
    left, right = _evaluate(f.left, model), _evaluate(f.right, model)
    if isinstance(f, And):
        return left and right
    if isinstance(f, Or):
        return left or right
    if isinstance(f, Implies):
        return not left or right
    return left == right


def _truth_table_satisfiable(fs) -> bool:
    names = sorted(set().union(*(atoms(f) for f in fs)) or set())
    for values in itertools.product([False, True], repeat=len(names)):
        model = dict(zip(names, values))
        if all(_evaluate(f, model) for f in fs):
            return True
    return False


@given(formulas)
def test_clauses_equisatisfiable(f):
    assert is_satisfiable(to_clauses(f)) == _truth_table_satisfiable([f])


@given(formulas, formulas)
def test_clauses_for_conjunction(f, g):
    assert is_satisfiable(clauses_for([f, g])) == _truth_table_satisfiable([f, g])


def test_constant_clauses():
    assert to_clauses(Const(True)) == []
    assert to_clauses(Const(False)) == [frozenset()]


def test_tautologies_and_duplicates_dropped():
    f = parse_formula("(A | !A) & (B | C) & (B | C)")
    assert to_clauses(f) == [frozenset({("B", True), ("C", True)})]


def _wide_formula():
    # Or of seven conjunctions distributes to 2^7 clauses, beyond the direct
    # conversion limit, forcing the definitional translation.
    pairs = [And(Atom(f"x{i}"), Atom(f"y{i}")) for i in range(7)]
    f = pairs[0]
    for p in pairs[1:]:
        f = Or(f, p)
    return f


def test_definitional_conversion_kicks_in():
    f = _wide_formula()
    clauses = clauses_for([f])
    aux_names = {name for clause in clauses for name, _ in clause if name.startswith("__aux")}
    assert aux_names, "expected auxiliary atoms for a wide formula"
    assert is_satisfiable(clauses) == _truth_table_satisfiable([f]) is True
    assert is_satisfiable(clauses_for([f, Not(f)])) is False


def test_aux_numbering_does_not_collide_across_formulas():
    f, g = _wide_formula(), Not(_wide_formula())
    clauses = clauses_for([f, g])
    assert is_satisfiable(clauses) is False
