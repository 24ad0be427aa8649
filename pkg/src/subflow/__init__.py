"""Integral points of two crossing submodular flow systems, and the
connectivity flips, orientations and dijoin splits built on them."""

from .errors import (
    CapacityError,
    ConnectivityTooLow,
    DomainError,
    HypothesisViolated,
    InputError,
    InternalInvariantError,
    NotTU,
    ObjectiveNotRealizable,
    PreconditionViolated,
    ReductionInapplicable,
    SubflowError,
)
from .graph import Digraph, flip, is_k_arc_connected, is_k_dijoin, is_k_flip, vset
from .solvers import (
    TUInstance,
    TwoSystemInstance,
    decompose_flip_dijoin,
    dijoin_pair_decompose,
    find_k_flip,
    near_eulerian_flip,
    solve_tu_generalization,
    solve_two_systems,
    verify_hypothesis,
    weighted_decompose,
)
from .transshipment import TransshipmentInstance, solve_transshipment

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "ConnectivityTooLow", "DomainError", "HypothesisViolated", "InputError",
    "InternalInvariantError", "NotTU", "ObjectiveNotRealizable", "PreconditionViolated",
    "ReductionInapplicable", "SubflowError",
    "Digraph", "flip", "is_k_arc_connected", "is_k_dijoin", "is_k_flip", "vset",
    "TUInstance", "TwoSystemInstance", "decompose_flip_dijoin", "dijoin_pair_decompose",
    "find_k_flip", "near_eulerian_flip", "solve_tu_generalization", "solve_two_systems",
    "verify_hypothesis", "weighted_decompose",
    "TransshipmentInstance", "solve_transshipment",
]
