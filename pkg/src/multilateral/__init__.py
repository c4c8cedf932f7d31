"""k-lateral (multilateral) Nash equilibria of finite and continuous games.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .continuous import ContinuousGame, cournot_analysis, cournot_game, discretize
from .equilibrium import (
    Filtration,
    best_reply_set,
    check_fg_criterion,
    check_grouped_criterion,
    check_simultaneous_fixed_point,
    enumerate_k_lateral,
    filtration,
    is_k_lateral,
    marginal_values,
    modified_best_reply_contains,
)
from .errors import DegenerateParameters, InvalidArgument, ResourceLimit
from .family import GameFamily, ParameterPoint, fiber, fiberwise_fixed_point_check, scan
from .game import FiniteGame, PartialProfile, compose, payoff, restrict, validate
from .kneser import KneserCover, exact_cover, greedy_cover, lower_bound, xi
from .mixed import MixedProfile, TensorTriple, is_k_lateral_mixed, mixed_payoff, mixed_v_k
from .nikaido_isoda import psi_classical, psi_k, v_classical, v_k

__all__ = [
    "ContinuousGame",
    "DegenerateParameters",
    "Filtration",
    "FiniteGame",
    "GameFamily",
    "InvalidArgument",
    "KneserCover",
    "MixedProfile",
    "ParameterPoint",
    "PartialProfile",
    "ResourceLimit",
    "TensorTriple",
    "best_reply_set",
    "check_fg_criterion",
    "check_grouped_criterion",
    "check_simultaneous_fixed_point",
    "compose",
    "cournot_analysis",
    "cournot_game",
    "discretize",
    "enumerate_k_lateral",
    "exact_cover",
    "fiber",
    "fiberwise_fixed_point_check",
    "filtration",
    "greedy_cover",
    "is_k_lateral",
    "is_k_lateral_mixed",
    "lower_bound",
    "marginal_values",
    "mixed_payoff",
    "mixed_v_k",
    "modified_best_reply_contains",
    "payoff",
    "psi_classical",
    "psi_k",
    "restrict",
    "scan",
    "v_classical",
    "v_k",
    "validate",
    "xi",
]
