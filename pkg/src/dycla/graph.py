"""Graph snapshots, temporal networks, the temporal edge-list format and a
synthetic dynamic-network generator.

Undirected graphs are stored as symmetric directed edge pairs, so
``in_degree`` of an undirected snapshot equals the plain degree.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class NetworkError(ValueError):
    """Base class for invalid networks and network files."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ParseError(NetworkError):
    pass


class VertexRangeError(NetworkError):
    pass


class EdgeError(NetworkError):
    """Self-loop or duplicate edge."""


class EmptyNetworkError(NetworkError):
    pass


class GraphSnapshot:
    """Immutable directed (or symmetric-undirected) graph on vertices 0..N-1.

    ``edges`` given for an undirected snapshot are unordered pairs, each
    listed once; the stored edge set holds both orientations.
    """

    __slots__ = ("n_vertices", "directed", "edges", "in_degree", "out_degree",
                 "indptr", "indices", "probs")

    def __init__(self, n_vertices: int, edges: Iterable[tuple[int, int]] = (),
                 directed: bool = True):
        n = int(n_vertices)
        if n < 1:
            raise NetworkError(f"n_vertices must be positive, got {n}")
        stored: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise EdgeError(f"self-loop on vertex {u}")
            if (u, v) in stored or (not directed and (v, u) in stored):
                raise EdgeError(f"duplicate edge ({u}, {v})")
            stored.add((u, v))
            if not directed:
                stored.add((v, u))

        ordered = sorted(stored)
        src = np.fromiter((e[0] for e in ordered), dtype=np.int64, count=len(ordered))
        dst = np.fromiter((e[1] for e in ordered), dtype=np.int64, count=len(ordered))
        out_deg = np.bincount(src, minlength=n).astype(np.int64)
        in_deg = np.bincount(dst, minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(out_deg, out=indptr[1:])
        # weighted cascade: edge (u, v) fires with probability 1 / in-degree(v)
        probs = 1.0 / in_deg[dst] if len(ordered) else np.zeros(0)

        set_ = object.__setattr__
        set_(self, "n_vertices", n)
        set_(self, "directed", bool(directed))
        set_(self, "edges", frozenset(stored))
        set_(self, "in_degree", _frozen(in_deg))
        set_(self, "out_degree", _frozen(out_deg))
        set_(self, "indptr", _frozen(indptr))
        set_(self, "indices", _frozen(dst.astype(np.int32)))
        set_(self, "probs", _frozen(np.asarray(probs, dtype=np.float64)))

    def __setattr__(self, name, value):
        raise AttributeError("GraphSnapshot is immutable")

    def __eq__(self, other):
        if not isinstance(other, GraphSnapshot):
            return NotImplemented
        return (self.n_vertices == other.n_vertices
                and self.directed == other.directed
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n_vertices, self.directed, self.edges))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"GraphSnapshot(n={self.n_vertices}, {kind}, edges={self.n_edges})"

    @property
    def n_edges(self) -> int:
        """Number of stored (directed) edges."""
        return len(self.edges)

    def successors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def file_edges(self) -> list[tuple[int, int]]:
        """Edges as written to file: sorted, undirected pairs once with u < v."""
        if self.directed:
            return sorted(self.edges)
        return sorted((u, v) for u, v in self.edges if u < v)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TemporalNetwork:
    snapshots: tuple[GraphSnapshot, ...]

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if not snaps:
            raise EmptyNetworkError("temporal network has no snapshots")
        n, directed = snaps[0].n_vertices, snaps[0].directed
        for t, s in enumerate(snaps):
            if s.n_vertices != n or s.directed != directed:
                raise NetworkError(f"snapshot {t} disagrees on vertex count or directedness")
        object.__setattr__(self, "snapshots", snaps)

    @property
    def n_vertices(self) -> int:
        return self.snapshots[0].n_vertices

    @property
    def directed(self) -> bool:
        return self.snapshots[0].directed

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, t):
        return self.snapshots[t]

    def __iter__(self):
        return iter(self.snapshots)


def parse_temporal_network(text: str) -> TemporalNetwork:
    if text and not text.endswith("\n"):
        raise ParseError("missing trailing newline")
    n = directed = None
    blocks: list[list[tuple[int, int]]] = []
    block_lines: list[int] = []
    seen: set[tuple[int, int]] = set()

    for lineno, line in enumerate(text.split("\n")[:-1], start=1):
        if line.startswith("#"):
            continue
        tokens = line.split(" ")
        tag, args = tokens[0], tokens[1:]
        try:
            values = [int(a) for a in args]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if any(a == "" or a != str(int(a)) for a in args):
            raise ParseError(f"malformed tokens in {line!r}", lineno)

        if n is None:
            if tag != "N" or len(values) != 1:
                raise ParseError("expected 'N <n_vertices>'", lineno)
            n = values[0]
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
        elif directed is None:
            if tag != "D" or len(values) != 1 or values[0] not in (0, 1):
                raise ParseError("expected 'D <0|1>'", lineno)
            directed = values[0] == 1
        elif tag == "T" and len(values) == 1:
            if values[0] != len(blocks):
                raise ParseError(f"expected 'T {len(blocks)}', got 'T {values[0]}'", lineno)
            blocks.append([])
            block_lines.append(lineno)
            seen = set()
        elif tag == "E" and len(values) == 2:
            if not blocks:
                raise ParseError("edge before first 'T' line", lineno)
            u, v = values
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside [0, {n})", lineno)
            if u == v:
                raise EdgeError(f"self-loop on vertex {u}", lineno)
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in seen:
                raise EdgeError(f"duplicate edge ({u}, {v})", lineno)
            seen.add(key)
            blocks[-1].append((u, v))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)

    if n is None or directed is None:
        raise ParseError("missing 'N' or 'D' header")
    if not blocks:
        raise EmptyNetworkError("file contains no snapshots")
    return TemporalNetwork(tuple(GraphSnapshot(n, b, directed) for b in blocks))


def load_temporal_network(path: str | os.PathLike) -> TemporalNetwork:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_temporal_network(fh.read())


def format_temporal_network(net: TemporalNetwork) -> str:
    lines = [f"N {net.n_vertices}", f"D {1 if net.directed else 0}"]
    for t, snap in enumerate(net.snapshots):
        lines.append(f"T {t}")
        lines.extend(f"E {u} {v}" for u, v in snap.file_edges())
    return "\n".join(lines) + "\n"


def save_temporal_network(net: TemporalNetwork, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_temporal_network(net))


def _rewire(edges: set[tuple[int, int]], n: int, frac: float, directed: bool,
            rng: np.random.Generator) -> set[tuple[int, int]]:
    """Replace round(frac * |E|) uniformly chosen edges by uniformly chosen non-edges."""
    count = int(round(frac * len(edges)))
    if count == 0:
        return set(edges)
    ordered = sorted(edges)
    max_edges = n * (n - 1) if directed else n * (n - 1) // 2
    count = min(count, len(ordered), max_edges - len(ordered))
    drop = rng.choice(len(ordered), size=count, replace=False)
    removed = {ordered[i] for i in drop}
    kept = set(edges) - removed
    added = 0
    while added < count:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v:
            continue
        if not directed:
            u, v = min(u, v), max(u, v)
        if (u, v) in kept or (u, v) in removed:
            continue
        kept.add((u, v))
        added += 1
    return kept


def generate_synthetic(n: int, t_count: int, base_edge_prob: float = 0.01,
                       docile_rewire_frac: float = 0.02,
                       drastic_steps: Sequence[int] = (),
                       drastic_rewire_frac: float = 0.5,
                       rng_seed: int = 0, directed: bool = True) -> TemporalNetwork:
    """Random dynamic network: an Erdos-Renyi snapshot 0 followed by rewiring.

    Each later snapshot ``t`` rewires ``docile_rewire_frac`` of the previous
    snapshot's edges, or ``drastic_rewire_frac`` when ``t`` is in
    ``drastic_steps``. Removed edges are replaced by pairs that were
    non-edges before the step, so every rewired edge changes the edge set.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if t_count < 1:
        raise ValueError(f"t_count must be at least 1, got {t_count}")
    for name, value in (("base_edge_prob", base_edge_prob),
                        ("docile_rewire_frac", docile_rewire_frac),
                        ("drastic_rewire_frac", drastic_rewire_frac)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")
    drastic = set(int(t) for t in drastic_steps)

    rng = np.random.default_rng(rng_seed)
    mask = rng.random((n, n)) < base_edge_prob
    np.fill_diagonal(mask, False)
    if not directed:
        mask = np.triu(mask, k=1)
    src, dst = np.nonzero(mask)
    edges = set(zip(src.tolist(), dst.tolist()))

    snapshots = [GraphSnapshot(n, edges, directed)]
    for t in range(1, t_count):
        frac = drastic_rewire_frac if t in drastic else docile_rewire_frac
        edges = _rewire(edges, n, frac, directed, rng)
        snapshots.append(GraphSnapshot(n, edges, directed))
    return TemporalNetwork(tuple(snapshots))
