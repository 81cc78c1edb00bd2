"""Threshold-model diffusion with marketing budgets, plus the promotional and
preventive influence logics over it."""

__version__ = "0.1.0"

from .canonical import build_preventive_canonical, build_promotional_canonical
from .formula import Atom, Implies, Not, SemanticsMode, evaluate, format_formula, parse_formula
from .logic import (
    Derivation,
    HypothesisSet,
    Line,
    check_derivation,
    decide_derivable,
    prev_closure,
    promo_min_derivation_budget,
)
from .network import (
    DiffusionTrace,
    InputError,
    SocialNetwork,
    SpendingFunction,
    combine_oplus,
    diffuse_fixpoint,
    diffuse_step,
    spend_norm,
)
from .solver import (
    decide_preventive,
    decide_promotional,
    min_blocking_budget,
    min_promotion_budget,
)
