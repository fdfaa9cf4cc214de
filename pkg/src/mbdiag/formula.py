"""Propositional formulas: AST, parser, renderer and clause conversion.

The ASCII connectives are ``!``, ``&``, ``|``, ``->``, ``<->`` plus the
constants ``true``/``false``; the Unicode spellings ¬ ∧ ∨ → ↔ are accepted on
input.  Precedence from strongest to weakest: ! > & > | > -> (right
associative) > <-> (left associative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

AUX_PREFIX = "__aux"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Const, Not, And, Or, Implies, Iff]

# A literal is (atom name, polarity); a clause is a frozenset of literals.
Literal = tuple[str, bool]
Clause = frozenset


class FormulaError(ValueError):
    """Raised for unparsable input or reserved atom names."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lpar>\()|(?P<rpar>\))|(?P<iff><->|↔)|(?P<imp>->|→)"
    r"|(?P<and>&|∧)|(?P<or>\|{1,2}|∨)|(?P<not>!|¬)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise FormulaError(f"unexpected character {rest[0]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        if self.peek() != kind:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
            raise FormulaError(f"expected {kind!r}", pos)
        return self.take()

    def parse(self) -> Formula:
        f = self.iff()
        if self.i != len(self.tokens):
            raise FormulaError("trailing input", self.tokens[self.i][2])
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "iff":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "imp":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "or":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.peek() == "and":
            self.take()
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        if self.peek() == "not":
            self.take()
            return Not(self.neg())
        return self.primary()

    def primary(self) -> Formula:
        kind = self.peek()
        if kind == "lpar":
            self.take()
            f = self.iff()
            self.expect("rpar")
            return f
        if kind == "name":
            _, name, pos = self.take()
            if name == "true":
                return Const(True)
            if name == "false":
                return Const(False)
            if name.startswith(AUX_PREFIX):
                raise FormulaError(f"atom names starting with {AUX_PREFIX!r} are reserved", pos)
            return Atom(name)
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise FormulaError("expected a formula", pos)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula AST; raises FormulaError on bad input."""
    if not isinstance(text, str):
        raise FormulaError(f"formula must be a string, got {type(text).__name__}")
    parser = _Parser(text)
    if not parser.tokens:
        raise FormulaError("empty formula")
    return parser.parse()


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6}


def _prec(f: Formula) -> int:
    return _PREC[type(f)]


def render(f: Formula) -> str:
    """Canonical text with minimal parentheses; parse(render(f)) == f."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        child = render(f.child)
        if _prec(f.child) < _PREC[Not]:
            child = f"({child})"
        return "!" + child
    op, symbol = type(f), {And: "&", Or: "|", Implies: "->", Iff: "<->"}[type(f)]
    lp, rp = _prec(f.left), _prec(f.right)
    if op is Implies:
        # right associative: a -> b -> c parses as a -> (b -> c)
        left = render(f.left) if lp > _PREC[op] else f"({render(f.left)})"
        right = render(f.right) if rp >= _PREC[op] else f"({render(f.right)})"
    else:
        left = render(f.left) if lp >= _PREC[op] else f"({render(f.left)})"
        right = render(f.right) if rp > _PREC[op] else f"({render(f.right)})"
    return f"{left} {symbol} {right}"


def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return atoms(f.child)
    return atoms(f.left) | atoms(f.right)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Not):
        return _nnf(f.child, not negate)
    if isinstance(f, And):
        a, b = _nnf(f.left, negate), _nnf(f.right, negate)
        return Or(a, b) if negate else And(a, b)
    if isinstance(f, Or):
        a, b = _nnf(f.left, negate), _nnf(f.right, negate)
        return And(a, b) if negate else Or(a, b)
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        expanded = And(Or(Not(f.left), f.right), Or(f.left, Not(f.right)))
        return _nnf(expanded, negate)
    raise TypeError(f"not a formula: {f!r}")


_DIRECT_LIMIT = 32


def _distribute(f: Formula) -> list[set[Literal]] | None:
    """CNF of an NNF formula by distribution; None once > _DIRECT_LIMIT clauses."""
    if isinstance(f, Atom):
        return [{(f.name, True)}]
    if isinstance(f, Not):  # NNF: child is an atom
        return [{(f.child.name, False)}]
    if isinstance(f, Const):
        return [] if f.value else [set()]
    if isinstance(f, And):
        left, right = _distribute(f.left), _distribute(f.right)
        if left is None or right is None:
            return None
        out = left + right
        return out if len(out) <= _DIRECT_LIMIT else None
    if isinstance(f, Or):
        left, right = _distribute(f.left), _distribute(f.right)
        if left is None or right is None:
            return None
        if len(left) * len(right) > _DIRECT_LIMIT:
            return None
        return [lc | rc for lc in left for rc in right]
    raise TypeError(f"not in negation normal form: {f!r}")


def _clean(raw: Iterable[set[Literal]]) -> list[Clause]:
    """Drop tautological clauses and duplicate literals; keep first-seen order."""
    out: list[Clause] = []
    seen = set()
    for clause in raw:
        if any((name, not pol) in clause for name, pol in clause):
            continue
        frozen = frozenset(clause)
        if frozen not in seen:
            seen.add(frozen)
            out.append(frozen)
    return out


class _AuxCounter:
    def __init__(self):
        self.n = 0

    def fresh(self) -> str:
        self.n += 1
        return f"{AUX_PREFIX}{self.n}"


def _definitional(f: Formula, counter: _AuxCounter, clauses: list[set[Literal]]) -> Literal:
    """Return a literal equivalent to f, defining aux atoms in AST pre-order."""
    if isinstance(f, Atom):
        return (f.name, True)
    if isinstance(f, Not):
        name, pol = _definitional(f.child, counter, clauses)
        return (name, not pol)
    if isinstance(f, Const):
        aux = counter.fresh()
        clauses.append({(aux, f.value)})
        return (aux, True)
    aux = counter.fresh()
    if isinstance(f, Implies):
        f = Or(Not(f.left), f.right)
    if isinstance(f, And):
        a = _definitional(f.left, counter, clauses)
        b = _definitional(f.right, counter, clauses)
        clauses.append({_negate(a), _negate(b), (aux, True)})
        clauses.append({(aux, False), a})
        clauses.append({(aux, False), b})
    elif isinstance(f, Or):
        a = _definitional(f.left, counter, clauses)
        b = _definitional(f.right, counter, clauses)
        clauses.append({a, b, (aux, False)})
        clauses.append({(aux, True), _negate(a)})
        clauses.append({(aux, True), _negate(b)})
    elif isinstance(f, Iff):
        a = _definitional(f.left, counter, clauses)
        b = _definitional(f.right, counter, clauses)
        clauses.append({(aux, False), _negate(a), b})
        clauses.append({(aux, False), a, _negate(b)})
        clauses.append({(aux, True), a, b})
        clauses.append({(aux, True), _negate(a), _negate(b)})
    else:
        raise TypeError(f"not a formula: {f!r}")
    return (aux, True)


def _negate(lit: Literal) -> Literal:
    return (lit[0], not lit[1])


def clauses_for(formulas: Sequence[Formula]) -> list[Clause]:
    """Equisatisfiable clause set for the conjunction of ``formulas``.

    Direct conversion (no auxiliary atoms) whenever distribution stays small;
    otherwise a definitional transformation whose auxiliary atoms are numbered
    deterministically and never collide across the formulas of one call.
    """
    counter = _AuxCounter()
    raw: list[set[Literal]] = []
    for f in formulas:
        direct = _distribute(_nnf(f, False))
        if direct is not None:
            raw.extend(direct)
        else:
            defs: list[set[Literal]] = []
            root = _definitional(f, counter, defs)
            defs.append({root})
            raw.extend(defs)
    return _clean(raw)


def to_clauses(f: Formula) -> list[Clause]:
    return clauses_for([f])
