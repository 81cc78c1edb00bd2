"""Canonical networks built from finite sets of atomic hypotheses.

On the promotional canonical network an atom over the base agents holds
semantically exactly when it is derivable from the hypotheses; the
preventive canonical network does the same for the preventive system at
every budget of the chosen budget set.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .logic import HypothesisSet, prev_closure
from .network import SocialNetwork
from .numbers import format_fraction, to_fraction

__all__ = [
    "PromoCanonical",
    "PrevCanonical",
    "build_promotional_canonical",
    "build_preventive_canonical",
    "choose_epsilon",
    "label_name",
]


def _fresh(base, taken):
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


@dataclass(frozen=True)
class PromoCanonical:
    network: SocialNetwork
    alpha: dict
    beta: dict
    base: frozenset

    def name_map(self):
        return {
            str(i): {"alpha": self.alpha[i], "beta": self.beta[i]}
            for i in sorted(self.alpha)
        }


def build_promotional_canonical(X: HypothesisSet) -> PromoCanonical:
    """Two fresh agents per hypothesis ``A_i |>p_i B_i``.

    alpha_i answers only to marketing (propensity 1, threshold p_i);
    beta_i needs every agent of A_i plus alpha_i (threshold |A_i| + 1) and
    then pushes each agent of B_i over its threshold of 1.
    """
    base = frozenset(X.universe)
    taken = set(base)
    alpha, beta = {}, {}
    for i in range(1, len(X.hypotheses) + 1):
        alpha[i] = _fresh(f"alpha_{i}", taken)
        beta[i] = _fresh(f"beta_{i}", taken)

    agents = sorted(base) + [x for i in alpha for x in (alpha[i], beta[i])]
    weights = {}
    propensity = {a: 0 for a in agents}
    threshold = {a: 1 for a in base}
    for i, h in enumerate(X.hypotheses, 1):
        a_i, b_i = alpha[i], beta[i]
        propensity[a_i] = 1
        threshold[a_i] = h.budget
        threshold[b_i] = len(h.left) + 1
        for src in h.left | {a_i}:
            weights[(src, b_i)] = 1
        for dst in h.right:
            weights[(b_i, dst)] = 1
    net = SocialNetwork(agents, weights, propensity, threshold)
    return PromoCanonical(net, alpha, beta, base)


def choose_epsilon(budgets):
    """Half the smallest gap between distinct budgets, capped at 1."""
    values = sorted({to_fraction(p, "budget") for p in budgets})
    gaps = [b - a for a, b in zip(values, values[1:])]
    if not gaps:
        return Fraction(1)
    return min(Fraction(1), min(gaps) / 2)


def label_name(label):
    closure, p = label
    return "{" + ",".join(sorted(closure)) + "}@" + format_fraction(p)


@dataclass(frozen=True)
class PrevCanonical:
    network: SocialNetwork
    labels: tuple
    alpha: dict
    beta: dict
    epsilon: Fraction
    budgets: tuple
    base: frozenset

    def name_map(self):
        return {
            label_name(l): {"alpha": self.alpha[l], "beta": self.beta[l]} for l in self.labels
        }


def build_preventive_canonical(X: HypothesisSet, budgets) -> PrevCanonical:
    """One alpha/beta pair per labelled closure ``(closure of A at p, p)``.

    Hypothesis budgets are always added to ``budgets``. alpha(l) has
    propensity -1 and threshold epsilon - p, so a spend of at least p keeps it
    out; beta(l) fires as soon as alpha(l) or any base agent outside the
    closure is active, and pushes every base agent outside the closure.
    A base agent needs every beta pointing at it.
    """
    base = frozenset(X.universe)
    P = sorted({to_fraction(p, "budget") for p in budgets} | {h.budget for h in X.hypotheses})
    if any(p < 0 for p in P):
        raise ValueError("budgets must be non-negative")
    eps = choose_epsilon(P)

    ordered_base = sorted(base)
    labels = set()
    for p in P:
        for k in range(len(ordered_base) + 1):
            for A in itertools.combinations(ordered_base, k):
                labels.add((prev_closure(X, A, p), p))
    labels = tuple(sorted(labels, key=lambda l: (l[1], len(l[0]), sorted(l[0]))))

    taken = set(base)
    alpha, beta = {}, {}
    for n, label in enumerate(labels, 1):
        alpha[label] = _fresh(f"alpha_{n}", taken)
        beta[label] = _fresh(f"beta_{n}", taken)

    agents = ordered_base + [x for l in labels for x in (alpha[l], beta[l])]
    weights = {}
    propensity = {a: 0 for a in agents}
    threshold = {a: 0 for a in base}
    for label in labels:
        closure, p = label
        a_l, b_l = alpha[label], beta[label]
        propensity[a_l] = -1
        threshold[a_l] = eps - p
        threshold[b_l] = 1
        weights[(a_l, b_l)] = 1
        for a in base - closure:
            weights[(a, b_l)] = 1
            weights[(b_l, a)] = 1
            threshold[a] += 1
    net = SocialNetwork(agents, weights, propensity, threshold)
    return PrevCanonical(net, labels, alpha, beta, eps, tuple(P), base)
