"""Shared fixtures and random generators for the test suite."""

import itertools
import json
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from influence_logic.files import hypotheses_from_json, network_from_json
from influence_logic.formula import Atom
from influence_logic.logic import HypothesisSet
from influence_logic.network import SocialNetwork, SpendingFunction

DATA = Path(__file__).parent / "data"

NAMES = "abcdefgh"
SMALL = [Fraction(n, d) for d in (1, 2, 4) for n in range(0, 9)]
BUDGET_GRID = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)]


def load(name):
    return json.loads((DATA / name).read_text())


def x_sample():
    return hypotheses_from_json(load("x_sample.json"))


def net1():
    return network_from_json(load("net1.json"))


def net2():
    return network_from_json(load("net2.json"))


def subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


# Plain random generators (used by the acceptance suite, seeded for reproducibility)


def rand_rational(rng, lo, hi):
    d = rng.choice((1, 2, 4))
    return Fraction(rng.randint(lo * d, hi * d), d)


def random_network(rng, n_agents=None, max_agents=8, negative=None, density=0.4):
    n = n_agents if n_agents is not None else rng.randint(1, max_agents)
    agents = list(NAMES[:n])
    weights = {}
    for a in agents:
        for b in agents:
            if rng.random() < density:
                weights[(a, b)] = rand_rational(rng, 0, 2)
    propensity = {a: rand_rational(rng, -2, 2) for a in agents}
    if negative is not None:
        for a in agents:
            if a not in negative and propensity[a] < 0:
                propensity[a] = -propensity[a]
            if a in negative and propensity[a] >= 0:
                propensity[a] = -propensity[a] - 1
    threshold = {a: rand_rational(rng, -1, 3) for a in agents}
    return SocialNetwork(agents, weights, propensity, threshold)


def random_spend(rng, net, p_zero=0.5):
    return SpendingFunction(
        {a: rand_rational(rng, 0, 3) for a in net.agents if rng.random() > p_zero}
    )


def random_subset(rng, agents, p=0.4):
    return frozenset(a for a in sorted(agents) if rng.random() < p)


def random_hypotheses(rng, max_base=4, max_hyps=3):
    base = list(NAMES[: rng.randint(1, max_base)])
    hyps = []
    for _ in range(rng.randint(0, max_hyps)):
        left = random_subset(rng, base, 0.4)
        right = random_subset(rng, base, 0.4) or frozenset([rng.choice(base)])
        hyps.append(Atom(left, rng.choice(BUDGET_GRID), right))
    return HypothesisSet(frozenset(base), tuple(hyps))


def sums_and_midpoints(budgets):
    """All subset sums of the budgets, plus midpoints of neighbouring sums and one beyond."""
    sums = {sum(c, Fraction(0)) for k in range(len(budgets) + 1) for c in itertools.combinations(budgets, k)}
    ordered = sorted(sums)
    mids = [(x + y) / 2 for x, y in zip(ordered, ordered[1:])]
    return sorted(set(ordered) | set(mids) | {ordered[-1] + 1})


# Hypothesis strategies

rationals = st.builds(Fraction, st.integers(0, 8), st.sampled_from([1, 2, 4]))
signed = st.builds(Fraction, st.integers(-8, 8), st.sampled_from([1, 2, 4]))


@st.composite
def networks(draw, max_agents=8):
    n = draw(st.integers(1, max_agents))
    agents = list(NAMES[:n])
    weights = {}
    for a in agents:
        for b in agents:
            if draw(st.booleans()):
                weights[(a, b)] = draw(rationals)
    propensity = {a: draw(signed) for a in agents}
    threshold = {a: draw(signed) for a in agents}
    return SocialNetwork(agents, weights, propensity, threshold)


def agent_sets(net):
    return st.frozensets(st.sampled_from(sorted(net.agents)))


def spends(net):
    return st.dictionaries(st.sampled_from(sorted(net.agents)), rationals).map(SpendingFunction)


# Diffusion laws, each returning True when the law holds for the given inputs.

from influence_logic.network import combine_oplus, diffuse_fixpoint, diffuse_step  # noqa: E402


def _steps(net, seed, s, n):
    current = seed
    for _ in range(n):
        current = diffuse_step(net, current, s)
    return current


def law_inflationary(net, A, s):
    one = diffuse_step(net, A, s)
    return A <= one <= diffuse_fixpoint(net, A, s).final


def law_stabilization(net, A, s):
    trace = diffuse_fixpoint(net, A, s)
    ok_chain = all(x <= y for x, y in zip(trace.steps, trace.steps[1:]))
    return ok_chain and trace.fixpoint_index <= len(net.agents) and trace.steps[-1] == trace.steps[-2]


def law_composition(net, A, s, n, k):
    return _steps(net, _steps(net, A, s, n), s, k) == _steps(net, A, s, n + k)


def law_idempotence(net, A, s):
    star = diffuse_fixpoint(net, A, s).final
    return diffuse_fixpoint(net, star, s).final == star


def law_seed_monotone(net, A, B, s):
    return diffuse_fixpoint(net, A, s).final <= diffuse_fixpoint(net, A | B, s).final


def law_union(net, A, B, s):
    fa = diffuse_fixpoint(net, A, s).final
    fb = diffuse_fixpoint(net, B, s).final
    return fa | fb <= diffuse_fixpoint(net, A | B, s).final


def law_oplus_bound(net, s1, s2):
    both = combine_oplus(s1, s2, net)
    return all(net.propensity[b] * s1[b] <= net.propensity[b] * both[b] for b in net.agents)


def law_spend_monotone(net, A, s1, s2):
    both = combine_oplus(s1, s2, net)
    return all(
        _steps(net, A, s1, n) <= _steps(net, A, both, n) for n in range(len(net.agents) + 2)
    )


def law_sequential(net, A, s1, s2):
    first = diffuse_fixpoint(net, A, s1).final
    second = diffuse_fixpoint(net, first, s2).final
    return second <= diffuse_fixpoint(net, A, combine_oplus(s1, s2, net)).final


# Axiom-instance soundness and solver/oracle agreement

from influence_logic.solver import (  # noqa: E402
    decide_preventive,
    decide_promotional,
    min_blocking_budget,
    min_promotion_budget,
    oracle_blocking,
    oracle_promotion,
)


def promo_axiom_failures(net, A, B, C, p, q):
    d = decide_promotional
    bad = []
    if not d(net, A, A & B, p):
        bad.append("reflexivity")
    if d(net, A, B, p) and not d(net, A | C, B | C, p):
        bad.append("augmentation")
    if d(net, A, B, p) and d(net, B, C, q) and not d(net, A, C, p + q):
        bad.append("transitivity")
    lo, hi = min(p, q), max(p, q)
    if d(net, A, B, lo) and not d(net, A, B, hi):
        bad.append("monotonicity")
    return bad


def prev_axiom_failures(net, A, B, C, p, q):
    d = decide_preventive
    bad = []
    if not d(net, A, A & B, p):
        bad.append("reflexivity")
    if d(net, A, B, p) and not d(net, A | C, B | C, p):
        bad.append("augmentation")
    if d(net, A, B, p) and d(net, B, C, p) and not d(net, A, C, p):
        bad.append("transitivity")
    lo, hi = min(p, q), max(p, q)
    if d(net, A, B, hi) and not d(net, A, B, lo):
        bad.append("monotonicity")
    return bad


def promotion_agrees(net, A, B):
    fast, slow = min_promotion_budget(net, A, B), oracle_promotion(net, A, B)
    return fast.feasible == slow.feasible and fast.min_budget == slow.min_budget


def blocking_agrees(net, A, B):
    fast, slow = min_blocking_budget(net, A, B), oracle_blocking(net, A, B)
    return (fast.blockable, fast.infimum, fast.attained) == (slow.blockable, slow.infimum, slow.attained)


# Proof corpus helpers

from influence_logic.files import derivation_from_json  # noqa: E402
from influence_logic.formula import Implies, Not  # noqa: E402
from influence_logic.logic import Derivation, Line  # noqa: E402

PROOFS = ["mono_lemma", "union_lemma", "big_union", "preventive_union_lemma", "rhd_set"]


def load_proof(name):
    data = load(f"proofs/{name}.json")
    hyps_file = DATA / "proofs" / f"{name}_hyps.json"
    X = hypotheses_from_json(json.loads(hyps_file.read_text())) if hyps_file.exists() else None
    return derivation_from_json(data), X


def _count_atoms(f):
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Not):
        return _count_atoms(f.body)
    return _count_atoms(f.antecedent) + _count_atoms(f.consequent)


def _rewrite(f, k, change):
    """Apply ``change`` to the k-th atom occurrence (left-to-right) of f."""
    if isinstance(f, Atom):
        return (change(f) if k == 0 else f), k - 1
    if isinstance(f, Not):
        body, k = _rewrite(f.body, k, change)
        return Not(body), k
    left, k = _rewrite(f.antecedent, k, change)
    right, k = _rewrite(f.consequent, k, change)
    return Implies(left, right), k


def _bump_budget(a):
    return Atom(a.left, a.budget + 1, a.right)


def _widen_right(a):
    return Atom(a.left, a.budget, a.right | {"zz"})


def mutations(d):
    """Every single-atom perturbation: one budget raised by 1, or one right set widened."""
    for n, line in enumerate(d.lines):
        for k in range(_count_atoms(line.formula)):
            for change in (_bump_budget, _widen_right):
                new_formula, _ = _rewrite(line.formula, k, change)
                lines = list(d.lines)
                lines[n] = Line(new_formula, line.rule, line.refs, line.hyp)
                yield f"line {n + 1} atom {k + 1} {change.__name__}", Derivation(d.system, lines)


# Completeness cross-checks on canonical networks

from influence_logic.canonical import build_preventive_canonical, build_promotional_canonical  # noqa: E402
from influence_logic.formula import SemanticsMode  # noqa: E402
from influence_logic.logic import decide_derivable  # noqa: E402


def promo_completeness_mismatches(X):
    net = build_promotional_canonical(X).network
    grid = sums_and_midpoints([h.budget for h in X.hypotheses])
    bad = []
    for A in subsets(X.universe):
        for B in subsets(X.universe):
            for p in grid:
                sem = decide_promotional(net, A, B, p)
                syn = decide_derivable(SemanticsMode.PROMOTIONAL, X, A, B, p)
                if sem != syn:
                    bad.append((A, B, p, sem, syn))
    return bad


def prev_completeness_mismatches(X, extra_budgets=()):
    built = build_preventive_canonical(X, list(extra_budgets) or [Fraction(1)])
    bad = []
    for A in subsets(X.universe):
        for B in subsets(X.universe):
            for q in built.budgets:
                sem = decide_preventive(built.network, A, B, q)
                syn = decide_derivable(SemanticsMode.PREVENTIVE, X, A, B, q)
                if sem != syn:
                    bad.append((A, B, q, sem, syn))
    return bad
