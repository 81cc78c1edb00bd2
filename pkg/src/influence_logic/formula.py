"""Formulas over budgeted influence atoms ``A |>p B`` with ``!`` and ``->``.

Concrete syntax::

    formula  := implies
    implies  := unary ( "->" implies )?
    unary    := "!" unary | "(" formula ")" | atom
    atom     := set "|>" number set
    set      := "{" ( ident ("," ident)* )? "}" | ident
    number   := DECIMAL | INT "/" INT

``->`` associates to the right and ``!`` binds tighter than ``->``.
"""

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from .network import InputError
from .numbers import format_fraction, to_fraction

__all__ = [
    "Atom",
    "Not",
    "Implies",
    "SemanticsMode",
    "FormulaSyntaxError",
    "parse_formula",
    "parse_atom",
    "parse_agent_set",
    "format_formula",
    "format_set",
    "atoms_of",
    "agents_of",
    "evaluate",
]


class SemanticsMode(enum.Enum):
    PROMOTIONAL = "promo"
    PREVENTIVE = "prev"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).lower()
        for mode in cls:
            if text in (mode.value, mode.name.lower()):
                return mode
        raise ValueError(f"unknown semantics mode {value!r}")


@dataclass(frozen=True)
class Atom:
    left: frozenset
    budget: Fraction
    right: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))
        budget = to_fraction(self.budget, "budget")
        if budget < 0:
            raise ValueError(f"negative budget {budget}")
        object.__setattr__(self, "budget", budget)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    antecedent: object
    consequent: object

    def __str__(self):
        return format_formula(self)


class FormulaSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<rhd>\|>)
  | (?P<number>-?\d+(?:\s*/\s*\d+|\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{},()!])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "punct":
                kind = value
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def finish(self, result):
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return result

    def implies(self):
        left = self.unary()
        if self.peek()[0] == "arrow":
            self.i += 1
            return Implies(left, self.implies())
        return left

    def unary(self):
        kind = self.peek()[0]
        if kind == "!":
            self.i += 1
            return Not(self.unary())
        if kind == "(":
            self.i += 1
            inner = self.implies()
            self.take(")")
            return inner
        return self.atom()

    def atom(self):
        left = self.agent_set()
        self.take("rhd")
        budget = self.number()
        right = self.agent_set()
        return Atom(left, budget, right)

    def number(self):
        _, value, pos = self.take("number")
        try:
            budget = Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise FormulaSyntaxError(f"zero denominator in {value!r}", pos) from None
        if budget < 0:
            raise ValueError(f"negative budget {value!r} at position {pos}")
        return budget

    def agent_set(self):
        kind, value, pos = self.peek()
        if kind == "ident":
            self.i += 1
            return frozenset([value])
        self.take("{")
        members = []
        if self.peek()[0] != "}":
            members.append(self.take("ident")[1])
            while self.peek()[0] == ",":
                self.i += 1
                members.append(self.take("ident")[1])
        self.take("}")
        return frozenset(members)


def parse_formula(text):
    p = _Parser(text)
    return p.finish(p.implies())


def parse_atom(text):
    f = parse_formula(text)
    if not isinstance(f, Atom):
        raise FormulaSyntaxError("expected a single atom", 0)
    return f


def parse_agent_set(text):
    """Parse ``{a, b}``, a bare identifier, or a comma list ``a,b`` (empty text is the empty set)."""
    text = text.strip()
    if not text or text == "{}":
        return frozenset()
    if not text.startswith("{"):
        text = "{" + text + "}"
    p = _Parser(text)
    return p.finish(p.agent_set())


def format_set(agents):
    return "{" + ",".join(sorted(agents)) + "}"


def format_formula(f):
    if isinstance(f, Atom):
        return f"{format_set(f.left)} |>{format_fraction(f.budget)} {format_set(f.right)}"
    if isinstance(f, Not):
        return "!" + _wrap(f.body)
    if isinstance(f, Implies):
        return f"{_wrap(f.antecedent)} -> {format_formula(f.consequent)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f):
    text = format_formula(f)
    return f"({text})" if isinstance(f, Implies) else text


def atoms_of(f):
    """Distinct atoms of ``f`` in first-occurrence order."""
    seen = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            seen.setdefault(g, None)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, Implies):
            stack.append(g.consequent)
            stack.append(g.antecedent)
        else:
            raise TypeError(f"not a formula: {g!r}")
    return list(seen)


def agents_of(f):
    out = set()
    for atom in atoms_of(f):
        out |= atom.left | atom.right
    return frozenset(out)


def truth_value(f, valuation):
    """Classical value of ``f`` given a truth value for each of its atoms."""
    if isinstance(f, Atom):
        return valuation[f]
    if isinstance(f, Not):
        return not truth_value(f.body, valuation)
    return (not truth_value(f.antecedent, valuation)) or truth_value(f.consequent, valuation)


def evaluate(net, f, mode):
    from . import solver

    mode = SemanticsMode.coerce(mode)
    unknown = agents_of(f) - net.agent_set
    if unknown:
        raise InputError(f"unknown agent {sorted(unknown)[0]!r} in formula")
    decide = solver.decide_promotional if mode is SemanticsMode.PROMOTIONAL else solver.decide_preventive
    valuation = {a: decide(net, a.left, a.right, a.budget) for a in atoms_of(f)}
    return truth_value(f, valuation)
