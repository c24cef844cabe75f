import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dycla.graph import (EdgeError, EmptyNetworkError, GraphSnapshot, ParseError,
                         TemporalNetwork, VertexRangeError, format_temporal_network,
                         generate_synthetic, load_temporal_network,
                         parse_temporal_network, save_temporal_network)


def test_load_minimal_file(tmp_path):
    path = tmp_path / "net.tel"
    path.write_text("N 3\nD 1\nT 0\nE 0 1\nE 1 2\n")
    net = load_temporal_network(path)
    assert len(net) == 1
    assert net.n_vertices == 3 and net.directed
    assert net[0].edges == {(0, 1), (1, 2)}


def test_comments_are_ignored():
    net = parse_temporal_network("# header\nN 2\n# x\nD 0\nT 0\n# y\nE 0 1\nT 1\n")
    assert len(net) == 2
    assert net[0].edges == {(0, 1), (1, 0)}
    assert net[1].n_edges == 0


@pytest.mark.parametrize("text, error, lineno", [
    ("N 3\nD 1\nT 0\nE 0 3\n", VertexRangeError, 4),
    ("N 3\nD 1\nT 0\nE -1 2\n", VertexRangeError, 4),
    ("N 3\nD 1\nT 0\nE 1 1\n", EdgeError, 4),
    ("N 3\nD 1\nT 0\nE 0 1\nE 0 1\n", EdgeError, 5),
    ("N 3\nD 0\nT 0\nE 0 1\nE 1 0\n", EdgeError, 5),
    ("N 3\nD 1\nT 0\nE 0  1\n", ParseError, 4),
    ("N 3\nD 1\nT 0\nE 0 x\n", ParseError, 4),
    ("N 3\nD 1\nT 1\n", ParseError, 3),
    ("N 3\nD 1\nT 0\nT 2\n", ParseError, 4),
    ("N 3\nD 2\nT 0\n", ParseError, 2),
    ("D 1\nN 3\n", ParseError, 1),
    ("N 3\nD 1\nE 0 1\n", ParseError, 3),
    ("N 3\nD 1\nT 0\n\n", ParseError, 4),
    ("N 3\nD 1\nT 0\nX 1\n", ParseError, 4),
])
def test_parse_errors_carry_line_numbers(text, error, lineno):
    with pytest.raises(error) as info:
        parse_temporal_network(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_missing_trailing_newline():
    with pytest.raises(ParseError):
        parse_temporal_network("N 3\nD 1\nT 0")


def test_zero_snapshots():
    with pytest.raises(EmptyNetworkError):
        parse_temporal_network("N 3\nD 1\n")
    with pytest.raises(EmptyNetworkError):
        TemporalNetwork(())


def test_save_empty_snapshot(tmp_path):
    net = TemporalNetwork((GraphSnapshot(2, [], directed=False),))
    path = tmp_path / "e.tel"
    save_temporal_network(net, path)
    assert path.read_text() == "N 2\nD 0\nT 0\n"


def test_saves_are_byte_identical(tmp_path):
    net = generate_synthetic(30, 3, 0.1, 0.2, rng_seed=5)
    a, b = tmp_path / "a.tel", tmp_path / "b.tel"
    save_temporal_network(net, a)
    save_temporal_network(net, b)
    assert a.read_bytes() == b.read_bytes()


def test_edges_written_sorted():
    snap = GraphSnapshot(4, [(3, 0), (0, 2), (0, 1), (2, 1)])
    text = format_temporal_network(TemporalNetwork((snap,)))
    assert text.splitlines()[3:] == ["E 0 1", "E 0 2", "E 2 1", "E 3 0"]


@pytest.mark.parametrize("seed", range(100))
def test_round_trip_generated(tmp_path, seed):
    rng = np.random.default_rng(seed)
    net = generate_synthetic(int(rng.integers(2, 25)), int(rng.integers(1, 5)),
                             float(rng.uniform(0, 0.4)), float(rng.uniform(0, 0.5)),
                             drastic_steps=[2], drastic_rewire_frac=0.8,
                             rng_seed=seed, directed=bool(seed % 2))
    path = tmp_path / "net.tel"
    save_temporal_network(net, path)
    back = load_temporal_network(path)
    assert back == net
    # load . save . load is a fixed point
    assert format_temporal_network(back) == path.read_text()


def test_snapshot_validation():
    with pytest.raises(EdgeError):
        GraphSnapshot(3, [(0, 0)])
    with pytest.raises(EdgeError):
        GraphSnapshot(3, [(0, 1), (0, 1)])
    with pytest.raises(VertexRangeError):
        GraphSnapshot(3, [(0, 3)])


def test_snapshot_is_immutable():
    snap = GraphSnapshot(3, [(0, 1)])
    with pytest.raises(AttributeError):
        snap.n_vertices = 4
    with pytest.raises(ValueError):
        snap.in_degree[1] = 7


def test_undirected_stored_symmetric():
    snap = GraphSnapshot(3, [(0, 1), (1, 2)], directed=False)
    assert snap.edges == {(0, 1), (1, 0), (1, 2), (2, 1)}
    assert list(snap.in_degree) == [1, 2, 1]
    assert list(snap.out_degree) == [1, 2, 1]
    assert snap.file_edges() == [(0, 1), (1, 2)]


def test_mixed_snapshots_rejected():
    with pytest.raises(ValueError):
        TemporalNetwork((GraphSnapshot(3), GraphSnapshot(4)))
    with pytest.raises(ValueError):
        TemporalNetwork((GraphSnapshot(3), GraphSnapshot(3, directed=False)))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 12), data=st.data())
def test_degree_sums_match_edge_count(n, data):
    pairs = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                              .filter(lambda e: e[0] != e[1]), max_size=30))
    snap = GraphSnapshot(n, pairs)
    assert snap.in_degree.sum() == snap.out_degree.sum() == snap.n_edges
    assert list(snap.out_degree) == [sum(1 for u, _ in pairs if u == x) for x in range(n)]
    assert list(snap.in_degree) == [sum(1 for _, v in pairs if v == x) for x in range(n)]
    # CSR agrees with the edge set
    csr = {(u, int(v)) for u in range(n) for v in snap.successors(u)}
    assert csr == snap.edges


class TestGenerator:
    def test_zero_rewiring_keeps_snapshots_identical(self):
        net = generate_synthetic(50, 4, 0.1, docile_rewire_frac=0.0, rng_seed=1)
        assert all(s == net[0] for s in net)

    def test_deterministic(self):
        a = generate_synthetic(60, 3, 0.05, 0.1, drastic_steps=[2], rng_seed=9)
        b = generate_synthetic(60, 3, 0.05, 0.1, drastic_steps=[2], rng_seed=9)
        assert a == b
        assert generate_synthetic(60, 3, 0.05, 0.1, rng_seed=10) != a

    def test_shape_preserved(self):
        net = generate_synthetic(40, 5, 0.1, 0.3, rng_seed=2, directed=False)
        assert len(net) == 5
        assert all(s.n_vertices == 40 and not s.directed for s in net)

    def test_drastic_step_difference(self):
        frac = 0.5
        net = generate_synthetic(800, 6, 0.01, 0.02, drastic_steps={5},
                                 drastic_rewire_frac=frac, rng_seed=42)
        before, after = net[4].edges, net[5].edges
        assert len(before ^ after) >= frac * len(before) * 0.9
        # docile steps change little
        assert len(net[3].edges ^ net[4].edges) <= 2 * 0.02 * len(net[3].edges) + 2

    @pytest.mark.parametrize("kwargs", [
        dict(n=1, t_count=2),
        dict(n=5, t_count=0),
        dict(n=5, t_count=2, base_edge_prob=1.5),
        dict(n=5, t_count=2, docile_rewire_frac=-0.1),
        dict(n=5, t_count=2, drastic_rewire_frac=2.0),
    ])
    def test_parameter_errors(self, kwargs):
        with pytest.raises(ValueError):
            generate_synthetic(**kwargs)
