"""Per-snapshot reference seed selectors: naive greedy, CELF and top-K degree.

The greedy methods accept an optional deterministic ``oracle`` (for example
:func:`~dycla.diffusion.exact_spread` bound to a snapshot). With an oracle
the counter is charged one unit per oracle call; without one, each
evaluation is a Monte-Carlo estimate charged ``n_sims`` cascades.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .diffusion import InteractionCounter, SimStream, estimate_spread
from .graph import GraphSnapshot

SpreadOracle = Callable[[frozenset], float]


def _check_k(snapshot: GraphSnapshot, k: int) -> None:
    if not 1 <= k <= snapshot.n_vertices:
        raise ValueError(f"K must lie in [1, {snapshot.n_vertices}], got {k}")


def _evaluator(snapshot, n_sims, rng, counter, oracle, threads):
    if counter is None:
        counter = InteractionCounter()
    if oracle is not None:
        def evaluate(seeds):
            counter.add(1)
            return float(oracle(frozenset(seeds)))
    else:
        if rng is None:
            raise ValueError("a SimStream is required without an oracle")

        def evaluate(seeds):
            return estimate_spread(snapshot, seeds, n_sims, rng, counter, threads).mean
    return evaluate


def naive_greedy(snapshot: GraphSnapshot, k: int, n_sims: int = 10_000,
                 rng: Optional[SimStream] = None,
                 counter: Optional[InteractionCounter] = None,
                 oracle: Optional[SpreadOracle] = None,
                 threads: int = 1) -> frozenset[int]:
    _check_k(snapshot, k)
    evaluate = _evaluator(snapshot, n_sims, rng, counter, oracle, threads)
    chosen: set[int] = set()
    for _ in range(k):
        best, best_value = -1, -np.inf
        for v in range(snapshot.n_vertices):
            if v in chosen:
                continue
            value = evaluate(chosen | {v})
            if value > best_value:
                best, best_value = v, value
        chosen.add(best)
    return frozenset(chosen)


@dataclass(order=True)
class CelfQueueEntry:
    neg_gain: float
    vertex: int
    last_evaluated_round: int = field(compare=False)
    spread: float = field(compare=False, default=0.0)

    @property
    def marginal_gain(self) -> float:
        return -self.neg_gain


def celf(snapshot: GraphSnapshot, k: int, n_sims: int = 10_000,
         rng: Optional[SimStream] = None,
         counter: Optional[InteractionCounter] = None,
         oracle: Optional[SpreadOracle] = None,
         threads: int = 1) -> frozenset[int]:
    """Lazy-forward greedy.

    Stale marginal gains are upper bounds under submodularity, so a vertex
    whose freshly computed gain still tops the queue is the greedy choice.
    Queue order is gain descending, then vertex ascending, which reproduces
    the naive greedy tie-break.
    """
    _check_k(snapshot, k)
    evaluate = _evaluator(snapshot, n_sims, rng, counter, oracle, threads)
    queue = []
    for v in range(snapshot.n_vertices):
        value = evaluate({v})
        queue.append(CelfQueueEntry(-value, v, 0, value))
    heapq.heapify(queue)

    chosen: set[int] = set()
    base = 0.0
    for rnd in range(k):
        while True:
            top = heapq.heappop(queue)
            if top.last_evaluated_round == rnd:
                chosen.add(top.vertex)
                base = top.spread
                break
            total = evaluate(chosen | {top.vertex})
            heapq.heappush(queue, CelfQueueEntry(-(total - base), top.vertex, rnd, total))
    return frozenset(chosen)


def top_k_degree(snapshot: GraphSnapshot, k: int) -> frozenset[int]:
    """K vertices of highest out-degree (degree when undirected), lowest index on ties."""
    _check_k(snapshot, k)
    order = np.lexsort((np.arange(snapshot.n_vertices), -snapshot.out_degree))
    return frozenset(int(v) for v in order[:k])
