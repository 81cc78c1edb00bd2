"""Exact decision procedures for promotional and preventive influence atoms.

Promotion asks for the cheapest spend that makes ``B`` active from seed ``A``.
Blocking asks for the cheapest spend that keeps at least one agent of ``B``
inactive; because activation uses ``>=``, blocking an over-pressured agent
needs strictly more than its breakpoint, so the answer is an infimum that may
not be attained.

Both production algorithms come with brute-force oracles used by the tests.
"""

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .network import (
    InputError,
    SpendingFunction,
    _fixpoint,
    diffuse_fixpoint,
)

__all__ = [
    "PromotionResult",
    "BlockingResult",
    "min_promotion_budget",
    "decide_promotional",
    "min_blocking_budget",
    "decide_preventive",
    "oracle_promotion",
    "oracle_blocking",
    "promotion_infeasible",
]

ZERO = Fraction(0)
ORACLE_PROMOTION_MAX_AGENTS = 10
ORACLE_BLOCKING_MAX_NEGATIVE = 12


@dataclass(frozen=True)
class PromotionResult:
    feasible: bool
    min_budget: Optional[Fraction] = None
    witness: Optional[SpendingFunction] = None


@dataclass(frozen=True)
class BlockingResult:
    blockable: bool
    infimum: Optional[Fraction] = None
    attained: Optional[bool] = None
    witness_set: Optional[frozenset] = None


def _check(net, A, B):
    return net.check_agents(A, "source set"), net.check_agents(B, "target set")


_NO_SPEND = SpendingFunction()


def promotion_infeasible(net, A, B):
    """True when B stays out of reach even with unbounded spend on every responsive agent."""
    A, B = _check(net, A, B)
    boosted = A | {a for a in net.agents if net.propensity[a] > 0}
    return not B <= _fixpoint(net, boosted, _NO_SPEND)


def _sort_key(net, agents):
    order = _agent_order(net)
    return tuple(sorted(order[a] for a in agents))


def _agent_order(net):
    # Lexicographic on identifiers, matching how sets are rendered.
    return {a: i for i, a in enumerate(sorted(net.agents))}


def min_promotion_budget(net, A, B):
    """Uniform-cost search over closed active sets.

    From a state S (closed under free diffusion), buying an inactive agent b
    with positive propensity costs (threshold - pressure_S(b)) / propensity(b);
    the bought agent is added and the state is closed again. The first state
    popped that covers B carries the minimum budget.
    """
    A, B = _check(net, A, B)
    if B <= A:
        return PromotionResult(True, ZERO, SpendingFunction())
    if promotion_infeasible(net, A, B):
        return PromotionResult(False)

    order = _agent_order(net)

    def key(state):
        return tuple(sorted(order[a] for a in state))

    buyable = [b for b in sorted(net.agents) if net.propensity[b] > 0]
    start = _fixpoint(net, A, _NO_SPEND)
    heap = [(ZERO, key(start), start, ())]
    settled = set()
    while heap:
        cost, _, state, purchases = heapq.heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        if B <= state:
            return PromotionResult(True, cost, SpendingFunction(dict(purchases)))
        for b in buyable:
            if b in state:
                continue
            price = (net.threshold[b] - net.pressure(state, b)) / net.propensity[b]
            nxt = _fixpoint(net, state | {b}, _NO_SPEND)
            if nxt in settled:
                continue
            heapq.heappush(heap, (cost + price, key(nxt), nxt, purchases + ((b, price),)))
    raise AssertionError("feasible promotion search exhausted without reaching the target")


def decide_promotional(net, A, B, p):
    result = min_promotion_budget(net, A, B)
    return result.feasible and result.min_budget <= p


def _blocking_cost(net, agent, pressure):
    """Cheapest spend keeping ``agent`` inactive under ``pressure``; None if impossible.

    Returns (breakpoint, strict): the agent stays inactive for every spend
    above the breakpoint, and also at the breakpoint itself unless strict.
    """
    lam = net.propensity[agent]
    theta = net.threshold[agent]
    if pressure < theta:
        return ZERO, False
    if lam < 0:
        return (pressure - theta) / -lam, True
    return None


def _min_stable_set(net, A, target):
    """Cheapest set U containing ``target`` that can be kept inactive.

    Each member u of U faces pressure only from agents outside U; the cost of
    U is the sum of blocking breakpoints of its members. Branch-and-bound
    decides in-neighbours of U one at a time (in or out). The bound only
    grows: moving an agent out raises pressure on members, moving one in adds
    a non-negative term. Returns (cost, U, outside) or None.
    """
    order = _agent_order(net)
    seeds = frozenset(A)

    def member_cost(u, outside):
        return _blocking_cost(net, u, net.pressure(outside, u))

    first = member_cost(target, seeds)
    if first is None:
        return None
    counter = itertools.count()
    root = (frozenset([target]), seeds)
    heap = [(first[0], 1, next(counter), root)]
    while heap:
        bound, _, _, (inside, outside) = heapq.heappop(heap)
        pending = None
        for u in inside:
            for src, _w in net.incoming(u):
                if src in inside or src in outside:
                    continue
                if pending is None or order[src] < order[pending]:
                    pending = src
        if pending is None:
            return bound, inside, outside

        # pending stays outside U
        new_out = outside | {pending}
        total = ZERO
        for u in inside:
            c = member_cost(u, new_out)
            if c is None:
                break
            total += c[0]
        else:
            heapq.heappush(heap, (total, len(inside), next(counter), (inside, new_out)))

        # pending joins U
        c = member_cost(pending, outside)
        if c is not None:
            new_in = inside | {pending}
            heapq.heappush(heap, (bound + c[0], len(new_in), next(counter), (new_in, outside)))
    return None


def min_blocking_budget(net, A, B):
    """Infimum spend that keeps some agent of B inactive, with attainment flag.

    Spending on agents with propensity >= 0 never shrinks the active set, so
    only negative-propensity agents are worth paying. Any set U that excludes
    the seeds and whose members can each be held below threshold (given
    pressure from everything outside U) stays inactive forever; conversely the
    complement of a blocked fixpoint is such a set. The infimum is therefore
    the cheapest such U containing one target agent. It is attained exactly
    when the zero-spend diffusion already misses B.
    """
    A, B = _check(net, A, B)
    if B <= A:
        return BlockingResult(False)
    best = None
    for target in sorted(B - A):
        found = _min_stable_set(net, A, target)
        if found is None:
            continue
        cost, inside, _ = found
        key = (cost, _sort_key(net, inside))
        if best is None or key < best[0]:
            best = (key, cost, inside)
    if best is None:
        return BlockingResult(False)
    _, cost, inside = best
    outside = net.agent_set - inside
    clamped = frozenset(
        u
        for u in inside
        if net.propensity[u] < 0 and net.pressure(outside, u) >= net.threshold[u]
    )
    attained = not B <= _fixpoint(net, A, _NO_SPEND)
    if attained and cost != 0:
        raise AssertionError("attained blocking must have zero infimum")
    return BlockingResult(True, cost, attained, clamped)


def decide_preventive(net, A, B, p):
    """True iff every spend of norm <= p leaves B inside the fixpoint of A."""
    result = min_blocking_budget(net, A, B)
    if not result.blockable:
        return True
    if p < result.infimum:
        return True
    return p == result.infimum and not result.attained


# Independent oracles


def _pressure_direct(net, active, agent):
    return sum((net.weight(a, agent) for a in active), ZERO)


def oracle_promotion(net, A, B):
    """Cheapest promotion by trying every purchase order of responsive agents.

    Each candidate spend is replayed through :func:`diffuse_fixpoint` before
    it is accepted.
    """
    if len(net.agents) > ORACLE_PROMOTION_MAX_AGENTS:
        raise ValueError(
            f"oracle_promotion handles at most {ORACLE_PROMOTION_MAX_AGENTS} agents"
        )
    A, B = _check(net, A, B)
    responsive = sorted(a for a in net.agents if net.propensity[a] > 0)
    best = None

    def consider(spend):
        nonlocal best
        s = SpendingFunction(spend)
        if not B <= diffuse_fixpoint(net, A, s).final:
            return
        if best is None or s.norm < best.norm:
            best = s

    consider({})
    for k in range(1, len(responsive) + 1):
        for ordering in itertools.permutations(responsive, k):
            active = diffuse_fixpoint(net, A).final
            spend = {}
            for b in ordering:
                if b in active:
                    continue
                price = (net.threshold[b] - _pressure_direct(net, active, b)) / net.propensity[b]
                spend[b] = max(price, ZERO)
                active = diffuse_fixpoint(net, active | {b}).final
            consider(spend)
    if best is None:
        return PromotionResult(False)
    return PromotionResult(True, best.norm, best)


def _clamped_fixpoint(net, A, clamped):
    active = frozenset(A)
    while True:
        grown = {
            b
            for b in net.agents
            if b not in active
            and b not in clamped
            and _pressure_direct(net, active, b) >= net.threshold[b]
        }
        if not grown:
            return active
        active |= grown


def oracle_blocking(net, A, B):
    """Blocking infimum by enumerating every clamp set of negative-propensity agents.

    For a clamp set D, diffusion runs with D forced inactive; each clamped
    agent's breakpoint is the spend that exactly cancels its final pressure
    above threshold. The breakpoint spend and a slightly larger one are both
    replayed to decide attainment and confirm that the larger one blocks.
    """
    A, B = _check(net, A, B)
    negative = sorted(a for a in net.agents if net.propensity[a] < 0 and a not in A)
    if len(negative) > ORACLE_BLOCKING_MAX_NEGATIVE:
        raise ValueError(
            f"oracle_blocking handles at most {ORACLE_BLOCKING_MAX_NEGATIVE} "
            "negative-propensity agents"
        )
    if B <= A:
        return BlockingResult(False)
    delta = Fraction(1, 10**9)
    best = None
    for k in range(len(negative) + 1):
        for combo in itertools.combinations(negative, k):
            clamp = frozenset(combo)
            final = _clamped_fixpoint(net, A, clamp)
            if B <= final:
                continue
            breakpoints = {
                d: max(ZERO, (_pressure_direct(net, final, d) - net.threshold[d]) / -net.propensity[d])
                for d in clamp
            }
            value = sum(breakpoints.values(), ZERO)
            padded = {d: v + delta for d, v in breakpoints.items()}
            if B <= diffuse_fixpoint(net, A, padded).final:
                raise AssertionError(f"clamp set {sorted(clamp)} fails to block above its breakpoints")
            exact = not B <= diffuse_fixpoint(net, A, breakpoints).final
            key = (value, not exact, len(clamp), sorted(clamp))
            if best is None or key < best[0]:
                best = (key, value, exact, clamp)
    if best is None:
        return BlockingResult(False)
    _, value, exact, clamp = best
    return BlockingResult(True, value, exact, clamp)
