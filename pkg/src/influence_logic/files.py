"""JSON file formats. Numbers are written as strings ("3", "1/2", "0.25") so rationals survive."""

import json

from .formula import Atom, format_formula, parse_formula
from .logic import Derivation, HypothesisSet, Line
from .network import InputError, SocialNetwork, SpendingFunction
from .numbers import format_fraction

__all__ = [
    "network_from_json",
    "network_to_json",
    "spend_from_json",
    "spend_to_json",
    "hypotheses_from_json",
    "hypotheses_to_json",
    "derivation_from_json",
    "derivation_to_json",
    "load_json",
    "dump_json",
]


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None


def dump_json(data):
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _require(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{where}: missing field {key!r}")
    return data[key]


def network_from_json(data):
    agents = _require(data, "agents", "network")
    if not isinstance(agents, list):
        raise InputError("network: 'agents' must be a list")
    weights = {}
    for n, edge in enumerate(data.get("influence", []), 1):
        try:
            pair = (edge["from"], edge["to"])
            value = edge["weight"]
        except (KeyError, TypeError):
            raise InputError(f"network: influence entry {n} needs from/to/weight") from None
        if pair in weights:
            raise InputError(f"network: duplicate influence edge {pair[0]} -> {pair[1]}")
        weights[pair] = value
    propensity = _require(data, "propensity", "network")
    threshold = _require(data, "threshold", "network")
    return SocialNetwork(agents, weights, propensity, threshold)


def network_to_json(net):
    agents = sorted(net.agents)
    return {
        "agents": agents,
        "influence": [
            {"from": src, "to": dst, "weight": format_fraction(w)}
            for (src, dst), w in sorted(net.weights.items())
        ],
        "propensity": {a: format_fraction(net.propensity[a]) for a in agents},
        "threshold": {a: format_fraction(net.threshold[a]) for a in agents},
    }


def spend_from_json(data):
    if not isinstance(data, dict):
        raise InputError("spend file must be an object mapping agents to amounts")
    return SpendingFunction(data)


def spend_to_json(s):
    return {a: format_fraction(v) for a, v in s.items()}


def _atom_from_record(rec, n):
    try:
        return Atom(frozenset(rec["left"]), rec["budget"], frozenset(rec["right"]))
    except (KeyError, TypeError):
        raise InputError(f"hypothesis {n} needs left/budget/right") from None


def hypotheses_from_json(data):
    """Accepts ``{"universe": [...], "hypotheses": [...]}`` or a bare list of records."""
    if isinstance(data, list):
        records, universe = data, None
    else:
        records = _require(data, "hypotheses", "hypothesis file")
        universe = data.get("universe")
    atoms = [_atom_from_record(rec, n) for n, rec in enumerate(records, 1)]
    if universe is None:
        universe = set()
        for a in atoms:
            universe |= a.left | a.right
    return HypothesisSet(frozenset(universe), tuple(atoms))


def hypotheses_to_json(X):
    return {
        "universe": sorted(X.universe),
        "hypotheses": [
            {"left": sorted(h.left), "budget": format_fraction(h.budget), "right": sorted(h.right)}
            for h in X.hypotheses
        ],
    }


def derivation_from_json(data, system=None):
    """Accepts ``{"system": ..., "lines": [...]}`` or a bare list of line records."""
    if isinstance(data, list):
        records, declared = data, None
    else:
        records = _require(data, "lines", "proof file")
        declared = data.get("system")
    if declared is not None and system is not None and str(declared) != str(system):
        raise InputError(f"proof declares system {declared!r} but {system!r} was requested")
    chosen = system if system is not None else declared
    if chosen is None:
        raise InputError("proof file: system not given")
    lines = []
    for n, rec in enumerate(records, 1):
        try:
            formula = parse_formula(rec["formula"])
            rule = rec["rule"]
        except (KeyError, TypeError):
            raise InputError(f"proof line {n} needs formula and rule") from None
        try:
            lines.append(Line(formula, rule, tuple(rec.get("refs", ())), rec.get("hyp")))
        except ValueError as exc:
            raise InputError(f"proof line {n}: {exc}") from None
    return Derivation(chosen, tuple(lines))


def derivation_to_json(d):
    lines = []
    for line in d.lines:
        rec = {"formula": format_formula(line.formula), "rule": line.rule}
        if line.refs:
            rec["refs"] = list(line.refs)
        if line.hyp is not None:
            rec["hyp"] = line.hyp
        lines.append(rec)
    return {"system": d.system.value, "lines": lines}
