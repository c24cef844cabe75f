import itertools

import numpy as np
import pytest

from dycla import _kernels_py
from dycla._backend import BACKEND, kernels
from dycla.diffusion import (InteractionCounter, SimStream, activation_probability,
                             estimate_spread, exact_spread, simulate_cascade)
from dycla.graph import GraphSnapshot, generate_synthetic

from conftest import random_small_graph

try:
    from dycla import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def brute_force_spread(snapshot, seeds):
    """Exact spread by simulating the cascade process over every coin outcome.

    Enumerates the activation attempts generation by generation instead of
    live-edge subgraphs, so it shares nothing with ``exact_spread``.
    """
    def expand(active, frontier):
        attempts = [(u, v) for u in sorted(frontier) for v in sorted(
            v for (a, v) in snapshot.edges if a == u)]
        if not attempts:
            return len(active)
        total = 0.0
        for outcome in itertools.product((False, True), repeat=len(attempts)):
            prob = 1.0
            new_active = set(active)
            for (u, v), hit in zip(attempts, outcome):
                p = 1.0 / snapshot.in_degree[v]
                if v in active:
                    # already active targets are not attempted; factor out
                    if hit:
                        prob = 0.0
                        break
                    continue
                prob *= p if hit else 1.0 - p
                if hit:
                    new_active.add(v)
            if prob == 0.0:
                continue
            nxt = new_active - active
            total += prob * (expand(new_active, nxt) if nxt else len(new_active))
        return total
    return expand(set(seeds), set(seeds))


class TestActivationProbability:
    def test_directed_in_degree_four(self):
        snap = GraphSnapshot(5, [(0, 4), (1, 4), (2, 4), (3, 4)])
        assert activation_probability(snap, (2, 4)) == 0.25

    def test_single_predecessor(self):
        snap = GraphSnapshot(3, [(0, 1), (1, 2)])
        assert activation_probability(snap, (0, 1)) == 1.0

    def test_undirected_degree_two(self):
        snap = GraphSnapshot(3, [(0, 1), (1, 2)], directed=False)
        assert activation_probability(snap, (0, 1)) == 0.5

    def test_missing_edge(self):
        with pytest.raises(ValueError):
            activation_probability(GraphSnapshot(3, [(0, 1)]), (1, 0))


class TestSimulateCascade:
    def test_all_seeded(self):
        snap = generate_synthetic(20, 1, 0.2, rng_seed=1)[0]
        assert simulate_cascade(snap, range(20), SimStream(0)) == 20

    def test_edgeless(self):
        assert simulate_cascade(GraphSnapshot(5), [3], SimStream(0)) == 1

    def test_deterministic_star(self, star):
        rng = SimStream(7)
        assert {simulate_cascade(star, [0], rng) for _ in range(50)} == {4}

    def test_counter_increments_by_one(self, star):
        counter = InteractionCounter()
        simulate_cascade(star, [1], SimStream(0), counter)
        assert counter.count == 1

    def test_empty_seeds(self, star):
        with pytest.raises(ValueError):
            simulate_cascade(star, [], SimStream(0))

    def test_reproducible(self):
        snap = generate_synthetic(100, 1, 0.05, rng_seed=3)[0]
        a, b = SimStream(11), SimStream(11)
        assert ([simulate_cascade(snap, [0, 1], a) for _ in range(200)]
                == [simulate_cascade(snap, [0, 1], b) for _ in range(200)])

    def test_bounds(self):
        snap = generate_synthetic(60, 1, 0.05, rng_seed=4)[0]
        rng = SimStream(1)
        for _ in range(100):
            assert 3 <= simulate_cascade(snap, [5, 6, 7], rng) <= 60


class TestEstimateSpread:
    def test_deterministic_star(self, star):
        est = estimate_spread(star, [0], 500, SimStream(0))
        assert est.mean == 4.0 and est.std_error == 0.0 and est.n_sims == 500

    def test_half_graph_matches_hand_value(self, half_graph):
        est = estimate_spread(half_graph, [0], 10_000, SimStream(3))
        assert abs(est.mean - 1.5) <= 3 * est.std_error

    def test_counter_contract(self):
        snap = generate_synthetic(50, 1, 0.05, rng_seed=2)[0]
        counter = InteractionCounter(5)
        estimate_spread(snap, [0], 10_000, SimStream(0), counter)
        assert counter.count == 10_005

    def test_zero_sims(self, star):
        with pytest.raises(ValueError):
            estimate_spread(star, [0], 0, SimStream(0))

    def test_thread_count_does_not_change_result(self):
        snap = generate_synthetic(150, 1, 0.03, rng_seed=8)[0]
        results = {estimate_spread(snap, [1, 2, 3], 5000, SimStream(4), threads=t)
                   for t in (1, 2, 3, 4)}
        assert len(results) == 1

    def test_batch_equals_sequential_cascades(self):
        snap = generate_synthetic(80, 1, 0.05, rng_seed=6)[0]
        sizes = [simulate_cascade(snap, [0, 9], s) for s in [SimStream(2)] for _ in range(300)]
        est = estimate_spread(snap, [0, 9], 300, SimStream(2))
        assert est.mean == sum(sizes) / 300

    def test_mean_within_bounds(self):
        snap = generate_synthetic(40, 1, 0.1, rng_seed=5)[0]
        est = estimate_spread(snap, [0, 1], 200, SimStream(0))
        assert 2 <= est.mean <= 40


class TestExactSpread:
    def test_edgeless(self):
        assert exact_spread(GraphSnapshot(4), [2]) == 1.0

    def test_half_graph(self, half_graph):
        assert exact_spread(half_graph, [0]) == pytest.approx(1.5, abs=1e-12)

    def test_all_seeded(self):
        snap = random_small_graph(np.random.default_rng(0))
        assert exact_spread(snap, range(snap.n_vertices)) == pytest.approx(snap.n_vertices)

    def test_edge_limit(self):
        edges = [(u, v) for u in range(6) for v in range(6) if u != v][:21]
        with pytest.raises(ValueError):
            exact_spread(GraphSnapshot(6, edges), [0])

    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_process_enumeration(self, seed):
        rng = np.random.default_rng(100 + seed)
        snap = random_small_graph(rng, n_max=5, max_edges=8, directed=bool(seed % 3))
        seeds = [int(rng.integers(snap.n_vertices))]
        assert exact_spread(snap, seeds) == pytest.approx(brute_force_spread(snap, seeds),
                                                          abs=1e-12)


def _subsets(n):
    for r in range(1, n + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(n), r))


@pytest.mark.parametrize("seed", range(12))
def test_monotone_and_submodular(seed):
    snap = random_small_graph(np.random.default_rng(200 + seed), max_edges=10,
                              directed=seed % 4 != 0)
    n = snap.n_vertices
    value = {s: exact_spread(snap, s) for s in _subsets(n)}
    for a in value:
        for b in value:
            if a <= b:
                assert value[a] <= value[b] + 1e-12
                for v in range(n):
                    if v in b:
                        continue
                    gain_a = value[a | {v}] - value[a]
                    gain_b = value[b | {v}] - value[b]
                    assert gain_a >= gain_b - 1e-12


@pytest.mark.parametrize("seed", range(8))
def test_monte_carlo_consistent_with_exact(seed):
    rng = np.random.default_rng(300 + seed)
    snap = random_small_graph(rng, max_edges=12)
    seeds = [int(rng.integers(snap.n_vertices))]
    est = estimate_spread(snap, seeds, 10_000, SimStream(seed))
    assert abs(est.mean - exact_spread(snap, seeds)) <= 4 * est.std_error + 1e-12


class TestBackends:
    def test_selected_backend(self):
        assert BACKEND == kernels.NAME

    @pytest.mark.skipif(_kernels_cy is None, reason="compiled extension not built")
    @pytest.mark.parametrize("seed", range(5))
    def test_compiled_matches_python(self, seed):
        snap = generate_synthetic(120, 1, 0.04, rng_seed=seed)[0]
        seeds = np.array([0, 7, 19], dtype=np.int64)
        args = (snap.indptr, snap.indices, snap.probs, seeds, snap.n_vertices, 987654321 + seed)
        assert _kernels_cy.cascade_batch(*args, 10, 400) == _kernels_py.cascade_batch(*args, 10, 400)
        for i in range(20):
            assert _kernels_cy.cascade_size(*args, i) == _kernels_py.cascade_size(*args, i)

    def test_mix_reference_values(self):
        # splitmix64 finalizer of 0 + golden ratio increment
        assert _kernels_py.mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
        assert 0.0 <= _kernels_py.edge_uniform(12345, 0) < 1.0
