"""Threshold diffusion with marketing spend.

Agent ``b`` joins the active set once

    propensity(b) * spend(b) + sum(weight(a, b) for active a) >= threshold(b)

The comparison is exact (Fractions throughout) and non-strict.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .numbers import to_fraction

__all__ = [
    "InputError",
    "SocialNetwork",
    "SpendingFunction",
    "DiffusionTrace",
    "diffuse_step",
    "diffuse_fixpoint",
    "spend_norm",
    "combine_oplus",
    "render_set",
]

ZERO = Fraction(0)


class InputError(ValueError):
    """Raised for unknown agents and malformed network data."""


def render_set(agents):
    return "{" + ", ".join(sorted(agents)) + "}"


class SocialNetwork:
    """Immutable network of agents with influence weights, propensity and thresholds.

    ``weights`` maps ``(source, target)`` pairs to non-negative rationals;
    missing pairs weigh zero. ``propensity`` and ``threshold`` must cover
    every agent. Self-loops are accepted; they never help their own agent
    activate because an agent only exerts pressure once it is active.
    """

    __slots__ = ("agents", "_weights", "_propensity", "_threshold", "_incoming", "_agent_set")

    def __init__(self, agents, weights, propensity, threshold):
        agents = tuple(agents)
        agent_set = frozenset(agents)
        if len(agent_set) != len(agents):
            raise InputError("duplicate agent identifiers")
        for a in agents:
            if not isinstance(a, str) or not a:
                raise InputError(f"agent identifiers must be non-empty strings, got {a!r}")

        clean_weights = {}
        for pair, w in dict(weights).items():
            src, dst = pair
            for agent in (src, dst):
                if agent not in agent_set:
                    raise InputError(f"unknown agent {agent!r} in weights")
            w = to_fraction(w, f"weight({src},{dst})")
            if w < 0:
                raise InputError(f"weight({src},{dst}) is negative: {w}")
            if w:
                clean_weights[(src, dst)] = w

        def total_map(raw, name):
            raw = dict(raw)
            for key in raw:
                if key not in agent_set:
                    raise InputError(f"unknown agent {key!r} in {name}")
            missing = [a for a in agents if a not in raw]
            if missing:
                raise InputError(f"{name} missing for agent {missing[0]!r}")
            return {a: to_fraction(raw[a], f"{name}({a})") for a in agents}

        self.agents = agents
        self._agent_set = agent_set
        self._weights = MappingProxyType(clean_weights)
        self._propensity = MappingProxyType(total_map(propensity, "propensity"))
        self._threshold = MappingProxyType(total_map(threshold, "threshold"))
        incoming = {a: [] for a in agents}
        for (src, dst), w in clean_weights.items():
            incoming[dst].append((src, w))
        self._incoming = MappingProxyType({a: tuple(v) for a, v in incoming.items()})

    @property
    def agent_set(self):
        return self._agent_set

    @property
    def weights(self):
        return self._weights

    @property
    def propensity(self):
        return self._propensity

    @property
    def threshold(self):
        return self._threshold

    def weight(self, src, dst):
        return self._weights.get((src, dst), ZERO)

    def incoming(self, agent):
        """(source, weight) pairs with a positive weight into ``agent``."""
        return self._incoming[agent]

    def pressure(self, active, agent):
        """Peer pressure on ``agent`` from the agents in ``active``."""
        return sum((w for src, w in self._incoming[agent] if src in active), ZERO)

    def check_agents(self, agents, what="agent set"):
        agents = frozenset(agents)
        unknown = agents - self._agent_set
        if unknown:
            raise InputError(f"unknown agent {sorted(unknown)[0]!r} in {what}")
        return agents

    def __eq__(self, other):
        if not isinstance(other, SocialNetwork):
            return NotImplemented
        return (
            self._agent_set == other._agent_set
            and dict(self._weights) == dict(other._weights)
            and dict(self._propensity) == dict(other._propensity)
            and dict(self._threshold) == dict(other._threshold)
        )

    __hash__ = None

    def __repr__(self):
        return f"SocialNetwork(agents={list(self.agents)!r}, edges={len(self._weights)})"


class SpendingFunction:
    """Non-negative marketing spend per agent; unlisted agents receive 0."""

    __slots__ = ("_spend",)

    def __init__(self, spend=None):
        clean = {}
        for agent, value in dict(spend or {}).items():
            value = to_fraction(value, f"spend({agent})")
            if value < 0:
                raise InputError(f"spend on {agent!r} is negative: {value}")
            if value:
                clean[agent] = value
        self._spend = MappingProxyType(clean)

    def __getitem__(self, agent):
        return self._spend.get(agent, ZERO)

    def support(self):
        return frozenset(self._spend)

    def items(self):
        return sorted(self._spend.items())

    def as_dict(self):
        return dict(self._spend)

    @property
    def norm(self):
        return sum(self._spend.values(), ZERO)

    def check_against(self, net):
        net.check_agents(self._spend, "spending function")
        return self

    def __eq__(self, other):
        if isinstance(other, SpendingFunction):
            return dict(self._spend) == dict(other._spend)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._spend.items()))

    def __repr__(self):
        return f"SpendingFunction({dict(self.items())!r})"


@dataclass(frozen=True)
class DiffusionTrace:
    """The chain of active sets from the seed up to (and repeating) the fixpoint."""

    steps: tuple
    spending: SpendingFunction = field(default_factory=SpendingFunction)

    @property
    def seed(self):
        return self.steps[0]

    @property
    def final(self):
        return self.steps[-1]

    @property
    def fixpoint_index(self):
        """Smallest n with A^n = A^*."""
        return len(self.steps) - 2


def _as_spending(s):
    if s is None:
        return SpendingFunction()
    if isinstance(s, SpendingFunction):
        return s
    return SpendingFunction(s)


def _step(net, active, s):
    added = []
    for b in net.agents:
        if b in active:
            continue
        push = net.propensity[b] * s[b] + net.pressure(active, b)
        if push >= net.threshold[b]:
            added.append(b)
    if not added:
        return active
    return active | frozenset(added)


def _fixpoint(net, seed, s):
    current = seed
    while True:
        nxt = _step(net, current, s)
        if nxt == current:
            return current
        current = nxt


def diffuse_step(net, active, s=None):
    """One diffusion step: ``active`` plus every agent whose pressure reaches its threshold."""
    active = net.check_agents(active, "active set")
    s = _as_spending(s).check_against(net)
    return _step(net, active, s)


def diffuse_fixpoint(net, seed, s=None):
    """Iterate :func:`diffuse_step` from ``seed`` until two consecutive sets agree."""
    seed = net.check_agents(seed, "seed")
    s = _as_spending(s).check_against(net)
    steps = [seed]
    while True:
        nxt = _step(net, steps[-1], s)
        steps.append(nxt)
        if nxt == steps[-2]:
            return DiffusionTrace(tuple(steps), s)


def spend_norm(s):
    return _as_spending(s).norm


def combine_oplus(s1, s2, net):
    """Sum two spends on agents with propensity >= 0; zero elsewhere."""
    s1 = _as_spending(s1).check_against(net)
    s2 = _as_spending(s2).check_against(net)
    return SpendingFunction(
        {a: s1[a] + s2[a] for a in net.agents if net.propensity[a] >= 0}
    )
