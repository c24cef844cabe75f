"""Influence maximization on dynamic networks with conjugate learning automata."""

from ._backend import BACKEND
from .automaton import AutomatonState
from .baselines import celf, naive_greedy, top_k_degree
from .cla import ClaConfig, ClaState, ExperimentRecord, cla_run, dycla_step, run_temporal
from .diffusion import (InteractionCounter, SimStream, SpreadEstimate, estimate_spread,
                        exact_spread, simulate_cascade)
from .graph import (GraphSnapshot, NetworkError, TemporalNetwork, generate_synthetic,
                    load_temporal_network, save_temporal_network)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AutomatonState", "ClaConfig", "ClaState", "ExperimentRecord",
    "GraphSnapshot", "InteractionCounter", "NetworkError", "SimStream", "SpreadEstimate",
    "TemporalNetwork", "celf", "cla_run", "dycla_step", "estimate_spread", "exact_spread",
    "generate_synthetic", "load_temporal_network", "naive_greedy", "run_temporal",
    "save_temporal_network", "simulate_cascade", "top_k_degree",
]
