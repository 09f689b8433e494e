"""Competitive ratio of the k-objective time series search game under the arithmetic mean."""

from amccr._backend import BACKEND
from amccr.closedform import Regime, closed_form, z2, z3, z4
from amccr.core import (
    CapacityError,
    DomainError,
    PriceInterval,
    ProblemInstance,
    from_xi,
    in_S,
    in_T,
    objective_G,
    objective_H,
    phi,
    to_xi,
)
from amccr.game import adversary_sequence, certify, play, threshold_player
from amccr.hardness import PartitionInstance, alg_p, dp_oracle, exhaustive, reduce_to_amccr
from amccr.solver import MaximizerConfig, RatioResult, enumerate_configs, grid_oracle, solve_amccr

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError",
    "DomainError",
    "MaximizerConfig",
    "PartitionInstance",
    "PriceInterval",
    "ProblemInstance",
    "RatioResult",
    "Regime",
    "adversary_sequence",
    "alg_p",
    "certify",
    "closed_form",
    "dp_oracle",
    "enumerate_configs",
    "exhaustive",
    "from_xi",
    "grid_oracle",
    "in_S",
    "in_T",
    "objective_G",
    "objective_H",
    "phi",
    "play",
    "reduce_to_amccr",
    "solve_amccr",
    "threshold_player",
    "to_xi",
    "z2",
    "z3",
    "z4",
]
