"""Weighted-cascade diffusion: single realizations, Monte-Carlo spread
estimates and an exhaustive live-edge oracle for small graphs."""

from __future__ import annotations

import itertools
import math
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._backend import kernels
from .graph import GraphSnapshot

EXACT_EDGE_LIMIT = 20
# below this many simulations a thread pool costs more than it saves
_PARALLEL_MIN_SIMS = 2048


class SimStream:
    """Counter-based source of cascade randomness.

    Every cascade draws from its own substream keyed by (key, index), so a
    batch can be split across workers in any way and still reproduce the
    same realizations.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self.key = int(np.random.SeedSequence(seed).generate_state(1, dtype=np.uint64)[0])
        self.position = 0

    def reserve(self, count: int) -> int:
        start = self.position
        self.position += count
        return start


class InteractionCounter:
    """Counts single-cascade evaluations of the spread function."""

    def __init__(self, count: int = 0):
        self.count = count
        self._lock = threading.Lock()

    def add(self, n: int = 1) -> None:
        with self._lock:
            self.count += n

    def __repr__(self):
        return f"InteractionCounter({self.count})"


@dataclass(frozen=True)
class SpreadEstimate:
    mean: float
    std_error: float
    n_sims: int


def _seed_array(snapshot: GraphSnapshot, seeds: Iterable[int]) -> np.ndarray:
    arr = np.array(sorted({int(s) for s in seeds}), dtype=np.int64)
    if arr.size == 0:
        raise ValueError("seed set must be non-empty")
    if arr[0] < 0 or arr[-1] >= snapshot.n_vertices:
        raise ValueError(f"seed outside [0, {snapshot.n_vertices})")
    return arr


def activation_probability(snapshot: GraphSnapshot, edge: tuple[int, int]) -> float:
    """1 / in-degree(v) for edge (u, v); in-degree is the degree when undirected."""
    u, v = edge
    if (u, v) not in snapshot.edges:
        raise ValueError(f"edge {edge} not in snapshot")
    return 1.0 / float(snapshot.in_degree[v])


def simulate_cascade(snapshot: GraphSnapshot, seeds: Iterable[int], rng: SimStream,
                     counter: InteractionCounter | None = None) -> int:
    """Number of vertices activated in one cascade realization."""
    seed_arr = _seed_array(snapshot, seeds)
    index = rng.reserve(1)
    size = kernels.cascade_size(snapshot.indptr, snapshot.indices, snapshot.probs,
                                seed_arr, snapshot.n_vertices, rng.key, index)
    if counter is not None:
        counter.add(1)
    return int(size)


def _chunks(start: int, count: int, parts: int) -> list[tuple[int, int]]:
    base, extra = divmod(count, parts)
    out, pos = [], start
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        if size:
            out.append((pos, size))
            pos += size
    return out


def estimate_spread(snapshot: GraphSnapshot, seeds: Iterable[int], n_sims: int,
                    rng: SimStream, counter: InteractionCounter | None = None,
                    threads: int = 1) -> SpreadEstimate:
    """Monte-Carlo mean of ``n_sims`` independent cascades.

    Sums are accumulated as exact integers, so the result is independent of
    ``threads``.
    """
    if n_sims < 1:
        raise ValueError(f"n_sims must be at least 1, got {n_sims}")
    seed_arr = _seed_array(snapshot, seeds)
    start = rng.reserve(n_sims)
    args = (snapshot.indptr, snapshot.indices, snapshot.probs, seed_arr,
            snapshot.n_vertices, rng.key)

    if threads > 1 and n_sims >= _PARALLEL_MIN_SIMS:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: kernels.cascade_batch(*args, c[0], c[1]),
                                  _chunks(start, n_sims, threads)))
    else:
        parts = [kernels.cascade_batch(*args, start, n_sims)]
    total = sum(int(p[0]) for p in parts)
    total_sq = sum(int(p[1]) for p in parts)

    if counter is not None:
        counter.add(n_sims)
    mean = total / n_sims
    if n_sims > 1:
        var = max(total_sq - total * total / n_sims, 0.0) / (n_sims - 1)
        stderr = math.sqrt(var / n_sims)
    else:
        stderr = 0.0
    return SpreadEstimate(mean, stderr, n_sims)


def exact_spread(snapshot: GraphSnapshot, seeds: Iterable[int]) -> float:
    """Expected spread by enumerating all 2^|E| live-edge subgraphs.

    Deliberately independent of the cascade kernels; only for tiny graphs.
    Every edge probability is 1/d, so each configuration's weight is an
    integer over the common denominator prod(d). Summing in integers makes
    the result correctly rounded: equal spreads compare equal bit for bit,
    which greedy tie-breaking relies on.
    """
    seed_set = {int(s) for s in seeds}
    if not seed_set:
        raise ValueError("seed set must be non-empty")
    edges = sorted(snapshot.edges)
    if len(edges) > EXACT_EDGE_LIMIT:
        raise ValueError(f"exact_spread supports at most {EXACT_EDGE_LIMIT} edges, "
                         f"got {len(edges)}")
    degrees = [int(snapshot.in_degree[v]) for _, v in edges]
    denominator = math.prod(degrees)

    total = 0
    for live in itertools.product((False, True), repeat=len(edges)):
        weight = 1
        adj: dict[int, list[int]] = {}
        for (u, v), d, on in zip(edges, degrees, live):
            if on:
                adj.setdefault(u, []).append(v)
            else:
                weight *= d - 1
        if weight == 0:
            continue
        reached = set(seed_set)
        queue = deque(seed_set)
        while queue:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in reached:
                    reached.add(v)
                    queue.append(v)
        total += weight * len(reached)
    return total / denominator
