"""Hilbert-style proof checking and atomic derivability for both axiom systems.

Promotional system: Reflexivity, Augmentation, Transitivity with budgets
adding up (``A |>p B -> (B |>q C -> A |>p+q C)``).

Preventive system: Reflexivity, Augmentation, Transitivity at one budget,
and downward Monotonicity (``A |>p B -> A |>q B`` for ``q <= p``).

Both add propositional tautologies and Modus Ponens.
"""

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .formula import Atom, Implies, SemanticsMode, atoms_of, format_formula, truth_value
from .network import InputError
from .numbers import to_fraction

__all__ = [
    "System",
    "HypothesisSet",
    "Line",
    "Derivation",
    "CheckReport",
    "RULES",
    "MAX_TAUTOLOGY_ATOMS",
    "check_derivation",
    "promo_min_derivation_budget",
    "prev_closure",
    "decide_derivable",
    "promo_derivation",
    "prev_derivation",
    "render_derivation",
]

System = SemanticsMode
ZERO = Fraction(0)
MAX_TAUTOLOGY_ATOMS = 16

RULES = (
    "hypothesis",
    "reflexivity",
    "augmentation",
    "transitivity",
    "monotonicity",
    "tautology",
    "modus_ponens",
)


@dataclass(frozen=True)
class HypothesisSet:
    universe: frozenset
    hypotheses: tuple = ()

    def __post_init__(self):
        universe = frozenset(self.universe)
        hyps = tuple(self.hypotheses)
        for i, h in enumerate(hyps, 1):
            if not isinstance(h, Atom):
                raise InputError(f"hypothesis {i} is not an atom")
            stray = (h.left | h.right) - universe
            if stray:
                raise InputError(f"hypothesis {i} mentions unknown agent {sorted(stray)[0]!r}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "hypotheses", hyps)

    def __len__(self):
        return len(self.hypotheses)

    def budgets(self):
        return sorted({h.budget for h in self.hypotheses})


@dataclass(frozen=True)
class Line:
    formula: object
    rule: str
    refs: tuple = ()
    hyp: Optional[int] = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        object.__setattr__(self, "refs", tuple(self.refs))


@dataclass(frozen=True)
class Derivation:
    system: SemanticsMode
    lines: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "system", SemanticsMode.coerce(self.system))
        object.__setattr__(self, "lines", tuple(self.lines))

    @property
    def conclusion(self):
        return self.lines[-1].formula if self.lines else None


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    line: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "accepted"
        return f"rejected at line {self.line}: {self.reason}"


# Axiom schema matching


def _is_atom(f):
    return isinstance(f, Atom)


def _reflexivity(f):
    if not _is_atom(f):
        return "Reflexivity instance must be an atom"
    if not f.right <= f.left:
        return "Reflexivity side condition: right set is not a subset of left set"
    return None


def _augmentation(f):
    if not (isinstance(f, Implies) and _is_atom(f.antecedent) and _is_atom(f.consequent)):
        return "Augmentation instance must have the shape atom -> atom"
    pre, post = f.antecedent, f.consequent
    if pre.budget != post.budget:
        return "Augmentation budgets differ"
    # Need some C with pre.left | C == post.left and pre.right | C == post.right.
    if not (pre.left <= post.left and pre.right <= post.right):
        return "Augmentation side condition: sets do not grow"
    if not (post.left - pre.left <= post.right and post.right - pre.right <= post.left):
        return "Augmentation side condition: no common set C added to both sides"
    return None


def _nested(f):
    """Split ``P -> (Q -> R)`` into atoms (P, Q, R) or return None."""
    if not (isinstance(f, Implies) and isinstance(f.consequent, Implies)):
        return None
    p, q, r = f.antecedent, f.consequent.antecedent, f.consequent.consequent
    if not (_is_atom(p) and _is_atom(q) and _is_atom(r)):
        return None
    return p, q, r


def _transitivity(f, system):
    parts = _nested(f)
    if parts is None:
        return "Transitivity instance must have the shape atom -> (atom -> atom)"
    first, second, concl = parts
    if first.right != second.left:
        return "Transitivity side condition: middle sets differ"
    if concl.left != first.left or concl.right != second.right:
        return "Transitivity side condition: conclusion sets do not match"
    if system is SemanticsMode.PROMOTIONAL:
        if concl.budget != first.budget + second.budget:
            return "Transitivity side condition: conclusion budget is not the sum of premise budgets"
    elif not (first.budget == second.budget == concl.budget):
        return "Transitivity side condition: budgets must all be equal"
    return None


def _monotonicity(f, system):
    if system is SemanticsMode.PROMOTIONAL:
        return "Monotonicity is not an axiom of the promotional system"
    if not (isinstance(f, Implies) and _is_atom(f.antecedent) and _is_atom(f.consequent)):
        return "Monotonicity instance must have the shape atom -> atom"
    pre, post = f.antecedent, f.consequent
    if pre.left != post.left or pre.right != post.right:
        return "Monotonicity side condition: sets differ"
    if not post.budget <= pre.budget:
        return "Monotonicity side condition: conclusion budget exceeds premise budget"
    return None


def _tautology(f):
    atoms = atoms_of(f)
    if len(atoms) > MAX_TAUTOLOGY_ATOMS:
        return f"tautology check limited to {MAX_TAUTOLOGY_ATOMS} distinct atoms, line has {len(atoms)}"
    for values in itertools.product((False, True), repeat=len(atoms)):
        if not truth_value(f, dict(zip(atoms, values))):
            return "not a propositional tautology"
    return None


def check_derivation(derivation, hypotheses=None):
    """Validate every line against earlier lines; report the first failure."""
    system = derivation.system
    hyps = hypotheses.hypotheses if hypotheses is not None else ()
    lines = derivation.lines
    for n, line in enumerate(lines, 1):
        f = line.formula
        rule = line.rule
        if rule == "hypothesis":
            if line.hyp is None or not 1 <= line.hyp <= len(hyps):
                problem = f"no hypothesis number {line.hyp}"
            elif hyps[line.hyp - 1] != f:
                problem = f"formula differs from hypothesis {line.hyp}"
            else:
                problem = None
        elif rule == "reflexivity":
            problem = _reflexivity(f)
        elif rule == "augmentation":
            problem = _augmentation(f)
        elif rule == "transitivity":
            problem = _transitivity(f, system)
        elif rule == "monotonicity":
            problem = _monotonicity(f, system)
        elif rule == "tautology":
            problem = _tautology(f)
        else:
            problem = _modus_ponens(lines, n, line)
        if problem:
            return CheckReport(False, n, problem)
    return CheckReport(True)


def _modus_ponens(lines, n, line):
    if len(line.refs) != 2:
        return "Modus Ponens needs two references (premise, implication)"
    i, j = line.refs
    for ref in (i, j):
        if not 1 <= ref < n:
            return f"reference {ref} does not point to an earlier line"
    premise, implication = lines[i - 1].formula, lines[j - 1].formula
    if not isinstance(implication, Implies):
        return f"line {j} is not an implication"
    if implication.antecedent != premise:
        return f"line {i} is not the antecedent of line {j}"
    if implication.consequent != line.formula:
        return f"formula is not the consequent of line {j}"
    return None


# Derivability of atoms from atomic hypotheses


def _bits(universe):
    order = sorted(universe)
    return order, {a: 1 << i for i, a in enumerate(order)}


def _mask(agents, index):
    m = 0
    for a in agents:
        m |= index[a]
    return m


def _check_sets(X, *sets):
    for s in sets:
        stray = frozenset(s) - X.universe
        if stray:
            raise InputError(f"unknown agent {sorted(stray)[0]!r}")


def _promo_search(X, A, B):
    """Uniform-cost search over subsets; returns (cost, firing sequence) or None."""
    A, B = frozenset(A), frozenset(B)
    _check_sets(X, A, B)
    _, index = _bits(X.universe)
    goal = _mask(B, index)
    rules = [(_mask(h.left, index), _mask(h.right, index), h.budget, i) for i, h in enumerate(X.hypotheses)]
    start = _mask(A, index)
    heap = [(ZERO, start, ())]
    done = set()
    while heap:
        cost, state, fired = heapq.heappop(heap)
        if state in done:
            continue
        done.add(state)
        if state & goal == goal:
            return cost, fired
        for left, right, budget, i in rules:
            if left & state == left and right & ~state:
                nxt = state | right
                if nxt not in done:
                    heapq.heappush(heap, (cost + budget, nxt, fired + (i,)))
    return None


def promo_min_derivation_budget(X, A, B):
    """Least q with X |- A |>q B in the promotional system, or None if underivable."""
    found = _promo_search(X, A, B)
    return None if found is None else found[0]


def _prev_firings(X, A, p):
    A = frozenset(A)
    _check_sets(X, A)
    p = to_fraction(p, "budget")
    current = set(A)
    fired = []
    changed = True
    while changed:
        changed = False
        for i, h in enumerate(X.hypotheses):
            if h.budget >= p and h.left <= current and not h.right <= current:
                current |= h.right
                fired.append(i)
                changed = True
    return frozenset(current), fired


def prev_closure(X, A, p):
    """Agents a with X |- A |>p a in the preventive system."""
    return _prev_firings(X, A, p)[0]


def decide_derivable(system, X, A, B, p):
    system = SemanticsMode.coerce(system)
    p = to_fraction(p, "budget")
    if system is SemanticsMode.PROMOTIONAL:
        q = promo_min_derivation_budget(X, A, B)
        return q is not None and q <= p
    _check_sets(X, B)
    return frozenset(B) <= prev_closure(X, A, p)


# Proof emission


class _Builder:
    def __init__(self, system):
        self.system = system
        self.lines = []
        self.index = {}

    def add(self, formula, rule, refs=(), hyp=None):
        self.lines.append(Line(formula, rule, refs, hyp))
        n = len(self.lines)
        self.index.setdefault(formula, n)
        return n

    def mp(self, premise, implication):
        f = self.lines[implication - 1].formula
        return self.add(f.consequent, "modus_ponens", (premise, implication))

    def build(self):
        return Derivation(self.system, tuple(self.lines))


def _chain(b, system, A, hyp_steps, budget_of_step, level):
    """Emit A |>c S_k lines while firing hypotheses; returns (line, covered set, cost)."""
    promo = system is SemanticsMode.PROMOTIONAL
    A = frozenset(A)
    covered = A
    total = ZERO if promo else level
    have = None
    for i, h in hyp_steps:
        step = budget_of_step(h)
        hyp_line = b.add(h, "hypothesis", hyp=i + 1)
        usable = hyp_line
        base = h
        if step != h.budget:
            weakened = Atom(h.left, step, h.right)
            mono = b.add(Implies(h, weakened), "monotonicity")
            usable = b.mp(hyp_line, mono)
            base = weakened
        grown = covered | h.right
        aug = b.add(Implies(base, Atom(covered, step, grown)), "augmentation")
        step_line = b.mp(usable, aug)
        if have is None:
            have, covered, total = step_line, grown, step
            continue
        new_total = total + step if promo else level
        trans = b.add(
            Implies(
                Atom(A, total, covered),
                Implies(Atom(covered, step, grown), Atom(A, new_total, grown)),
            ),
            "transitivity",
        )
        have = _mp2(b, have, step_line, trans)
        covered, total = grown, new_total
    if have is None:
        have = b.add(Atom(A, total, A), "reflexivity")
    return have, covered, total


def _mp2(b, first, second, trans):
    partial = b.mp(first, trans)
    return b.mp(second, partial)


def _finish(b, system, A, covered, total, have, B, target_budget):
    """Shrink the right side to B and, for promotion, pad the budget up to target_budget."""
    A, B = frozenset(A), frozenset(B)
    if covered != B:
        pad = ZERO if system is SemanticsMode.PROMOTIONAL else total
        refl = b.add(Atom(covered, pad, B), "reflexivity")
        new_total = total + pad if system is SemanticsMode.PROMOTIONAL else total
        trans = b.add(
            Implies(Atom(A, total, covered), Implies(Atom(covered, pad, B), Atom(A, new_total, B))),
            "transitivity",
        )
        have = _mp2(b, have, refl, trans)
        total = new_total
    if system is SemanticsMode.PROMOTIONAL and target_budget > total:
        extra = target_budget - total
        refl = b.add(Atom(B, extra, B), "reflexivity")
        trans = b.add(
            Implies(Atom(A, total, B), Implies(Atom(B, extra, B), Atom(A, target_budget, B))),
            "transitivity",
        )
        have = _mp2(b, have, refl, trans)
    return have


def promo_derivation(X, A, B, p=None):
    """A promotional derivation of ``A |>p B`` from X (p defaults to the minimum budget)."""
    found = _promo_search(X, A, B)
    if found is None:
        raise ValueError("target is not derivable from the hypotheses")
    cost, fired = found
    p = cost if p is None else to_fraction(p, "budget")
    if p < cost:
        raise ValueError(f"least derivable budget is {cost}, above the requested {p}")
    system = SemanticsMode.PROMOTIONAL
    b = _Builder(system)
    if frozenset(B) <= frozenset(A):
        b.add(Atom(A, p, B), "reflexivity")
        return b.build()
    steps = [(i, X.hypotheses[i]) for i in fired]
    have, covered, total = _chain(b, system, A, steps, lambda h: h.budget, ZERO)
    _finish(b, system, A, covered, total, have, B, p)
    return b.build()


def prev_derivation(X, A, B, p):
    """A preventive derivation of ``A |>p B`` from X, following the closure computation."""
    p = to_fraction(p, "budget")
    closure, fired = _prev_firings(X, A, p)
    if not frozenset(B) <= closure:
        raise ValueError("target is not derivable from the hypotheses")
    system = SemanticsMode.PREVENTIVE
    b = _Builder(system)
    if frozenset(B) <= frozenset(A):
        b.add(Atom(A, p, B), "reflexivity")
        return b.build()
    steps = [(i, X.hypotheses[i]) for i in fired]
    have, covered, total = _chain(b, system, A, steps, lambda h: p, p)
    _finish(b, system, A, covered, total, have, B, p)
    return b.build()


def render_derivation(d):
    out = []
    for n, line in enumerate(d.lines, 1):
        extra = ""
        if line.rule == "hypothesis":
            extra = f" {line.hyp}"
        elif line.refs:
            extra = " " + ",".join(map(str, line.refs))
        out.append(f"{n}. {format_formula(line.formula)}  [{line.rule}{extra}]")
    return "\n".join(out)
