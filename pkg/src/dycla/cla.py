"""Conjugate learning automata for influence maximization.

``cla_run`` trains K cooperating automata on one snapshot, round-robin under
a rising temporary threshold. ``dycla_step`` carries a trained state to the
next snapshot, rewinding each automaton in proportion to how much the old
seeds' spread changed. ``run_temporal`` chains the two over a network.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import automaton as la
from .diffusion import InteractionCounter, SimStream, estimate_spread, simulate_cascade
from .graph import GraphSnapshot, TemporalNetwork

log = logging.getLogger(__name__)

REPORT_SIMS = 10_000
DELTA_SIGMA_TOL = 1e-9

TraceHook = Callable[[int, int, np.ndarray], None]


@dataclass(frozen=True)
class ClaConfig:
    k_seeds: int
    delta0: Optional[float] = None       # default min(1/K, threshold)
    delta_inc: Optional[float] = None    # default 1/(2K)
    threshold: float = 0.999
    resolution: Optional[int] = None     # default K
    phi: float = 1.0
    feedback_sims: int = 1
    delta_sigma_sims: int = 1000
    rng_seed: int = 0
    # safety cap on learning iterations per cla_run; None means unbounded
    max_iterations: Optional[int] = 5_000_000
    threads: int = 1

    def __post_init__(self):
        k = self.k_seeds
        if k < 1:
            raise ValueError(f"k_seeds must be at least 1, got {k}")
        if self.delta0 is None:
            object.__setattr__(self, "delta0", min(1.0 / k, self.threshold))
        if self.delta_inc is None:
            object.__setattr__(self, "delta_inc", 1.0 / (2 * k))
        if self.resolution is None:
            object.__setattr__(self, "resolution", k)
        if not 0.0 < self.delta0 <= self.threshold <= 1.0:
            raise ValueError("need 0 < delta0 <= threshold <= 1")
        if self.delta_inc <= 0:
            raise ValueError("delta_inc must be positive")
        if self.resolution < 1:
            raise ValueError("resolution must be at least 1")
        if self.phi < 0:
            raise ValueError("phi must be non-negative")
        if self.feedback_sims < 1 or self.delta_sigma_sims < 1:
            raise ValueError("simulation counts must be at least 1")


@dataclass
class ClaState:
    automata: list[la.AutomatonState]
    rng: np.random.Generator
    sims: SimStream
    interactions: InteractionCounter = field(default_factory=InteractionCounter)
    delta: float = 0.0
    iteration: int = 0
    last_seeds: Optional[frozenset[int]] = None
    last_spread: Optional[float] = None
    last_delta_sigma: Optional[float] = None
    # set when the last cla_run hit max_iterations before converging
    stalled: bool = False


def init_cla_state(n_vertices: int, config: ClaConfig) -> ClaState:
    if config.k_seeds > n_vertices:
        raise ValueError(f"k_seeds={config.k_seeds} exceeds vertex count {n_vertices}")
    return ClaState(
        automata=[la.init_automaton(n_vertices, config.resolution)
                  for _ in range(config.k_seeds)],
        rng=np.random.default_rng([config.rng_seed, 0]),
        sims=SimStream([config.rng_seed, 1]),
        delta=config.delta0,
    )


def seeds_of(state: ClaState) -> frozenset[int]:
    """Most probable action of every automaton (lowest index on ties)."""
    return frozenset(int(np.argmax(a.p)) for a in state.automata)


def _feedback(snapshot: GraphSnapshot, seeds: frozenset[int], config: ClaConfig,
              state: ClaState) -> float:
    if config.feedback_sims == 1:
        return float(simulate_cascade(snapshot, seeds, state.sims, state.interactions))
    return estimate_spread(snapshot, seeds, config.feedback_sims, state.sims,
                           state.interactions, config.threads).mean


def cla_run(snapshot: GraphSnapshot, config: ClaConfig, state: ClaState,
            trace: Optional[TraceHook] = None) -> tuple[frozenset[int], ClaState]:
    """Train the automata in ``state`` on ``snapshot`` and return the seeds.

    ``state`` is updated in place and also returned.
    """
    k_seeds = len(state.automata)
    if k_seeds != config.k_seeds:
        raise ValueError("state holds a different number of automata than config.k_seeds")
    if config.k_seeds > snapshot.n_vertices:
        raise ValueError(f"k_seeds={config.k_seeds} exceeds vertex count {snapshot.n_vertices}")
    if any(a.n_actions != snapshot.n_vertices for a in state.automata):
        raise ValueError("automata were initialized for a different vertex count")

    stop_at = None if config.max_iterations is None else state.iteration + config.max_iterations
    state.delta = config.delta0
    state.stalled = False
    while not state.stalled:
        for k in range(k_seeds):
            while True:
                actions = [la.select_action(a, state.rng) for a in state.automata]
                beta = _feedback(snapshot, frozenset(actions), config, state)
                state.automata[k] = la.edgpa_update(state.automata[k], actions[k], beta)
                state.iteration += 1
                if trace is not None:
                    trace(state.iteration, k, state.automata[k].p)
                if la.converged(state.automata[k], state.delta):
                    break
                if stop_at is not None and state.iteration >= stop_at:
                    # all-tied estimates (e.g. every action scores the prior) never move p
                    log.warning("automaton %d below threshold %.4g after %d iterations; "
                                "returning current argmax", k, state.delta,
                                config.max_iterations)
                    state.stalled = True
                    break
            if state.stalled:
                break
        else:
            if state.delta < config.threshold:
                state.delta = min(state.delta + config.delta_inc, config.threshold)
            else:
                break

    state.last_seeds = seeds_of(state)
    return state.last_seeds, state


def measure_spread(snapshot: GraphSnapshot, config: ClaConfig, state: ClaState) -> float:
    """Spread of the current seeds on ``snapshot``, stored as ``last_spread``."""
    if state.last_seeds is None:
        raise ValueError("no seeds learned yet")
    est = estimate_spread(snapshot, state.last_seeds, config.delta_sigma_sims,
                          state.sims, state.interactions, config.threads)
    state.last_spread = est.mean
    return est.mean


def rewind(state: ClaState, delta_sigma: float, sigma_old: float, sigma_new: float,
           phi: float) -> None:
    """Smooth and perturb every automaton; a (near) zero change is a no-op."""
    if delta_sigma <= DELTA_SIGMA_TOL:
        return
    for k, a in enumerate(state.automata):
        a = la.smooth(a, delta_sigma, sigma_old, sigma_new, phi)
        state.automata[k] = la.perturb_estimates(a, delta_sigma, state.rng)


def dycla_step(new_snapshot: GraphSnapshot, config: ClaConfig, state: ClaState,
               trace: Optional[TraceHook] = None) -> tuple[frozenset[int], ClaState]:
    """Adapt a trained state to ``new_snapshot`` and re-learn the seeds."""
    if state.last_seeds is None or state.last_spread is None:
        raise ValueError("dycla_step needs a state trained on the previous snapshot "
                         "(last_seeds and last_spread set)")
    sigma_old = state.last_spread
    sigma_new = estimate_spread(new_snapshot, state.last_seeds, config.delta_sigma_sims,
                                state.sims, state.interactions, config.threads).mean
    delta_sigma = abs(sigma_new - sigma_old)
    state.last_delta_sigma = delta_sigma
    log.debug("delta sigma %.4f (old %.4f, new %.4f)", delta_sigma, sigma_old, sigma_new)
    rewind(state, delta_sigma, sigma_old, sigma_new, config.phi)
    seeds, state = cla_run(new_snapshot, config, state, trace)
    measure_spread(new_snapshot, config, state)
    return seeds, state


@dataclass(frozen=True)
class ExperimentRecord:
    snapshot_t: int
    algorithm: str
    seeds: frozenset[int]
    spread_mean: float
    spread_stderr: float
    interactions: int
    wall_ms: int = 0


def report_spread(snapshot: GraphSnapshot, seeds, rng_seed: int, t: int,
                  n_sims: int = REPORT_SIMS, threads: int = 1):
    """Evaluation-only spread estimate; uses its own stream and no counter."""
    return estimate_spread(snapshot, seeds, n_sims, SimStream([rng_seed, 2, t]),
                           None, threads)


def run_temporal(network: TemporalNetwork, config: ClaConfig,
                 trace: Optional[TraceHook] = None,
                 report_sims: int = REPORT_SIMS) -> list[ExperimentRecord]:
    """DyCLA over every snapshot: a cold run on snapshot 0, then one
    ``dycla_step`` per later snapshot."""
    state = init_cla_state(network.n_vertices, config)
    records = []
    for t, snapshot in enumerate(network):
        before = state.interactions.count
        tic = time.perf_counter()
        if t == 0:
            seeds, state = cla_run(snapshot, config, state, trace)
            measure_spread(snapshot, config, state)
        else:
            seeds, state = dycla_step(snapshot, config, state, trace)
        wall_ms = int(round((time.perf_counter() - tic) * 1000))
        est = report_spread(snapshot, seeds, config.rng_seed, t, report_sims, config.threads)
        records.append(ExperimentRecord(t, "dycla", seeds, est.mean, est.std_error,
                                        state.interactions.count - before, wall_ms))
    return records


def run_cold(network: TemporalNetwork, config: ClaConfig,
             trace: Optional[TraceHook] = None,
             report_sims: int = REPORT_SIMS) -> list[ExperimentRecord]:
    """Static CLA restarted from scratch on every snapshot."""
    records = []
    for t, snapshot in enumerate(network):
        state = init_cla_state(network.n_vertices, config)
        state.sims = SimStream([config.rng_seed, 1, t])
        state.rng = np.random.default_rng([config.rng_seed, 0, t])
        tic = time.perf_counter()
        seeds, state = cla_run(snapshot, config, state, trace)
        wall_ms = int(round((time.perf_counter() - tic) * 1000))
        est = report_spread(snapshot, seeds, config.rng_seed, t, report_sims, config.threads)
        records.append(ExperimentRecord(t, "cla-cold", seeds, est.mean, est.std_error,
                                        state.interactions.count, wall_ms))
    return records
