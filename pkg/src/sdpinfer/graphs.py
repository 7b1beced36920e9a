"""Undirected simple graphs: families, statistics, edge-list serialization.

Graphs are stored as a sorted edge list plus an adjacency index; dense
matrices are only materialized by the solver and certificate code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from sdpinfer.rng import STREAM_INIT, derive_seed

EXACT_CHEEGER_MAX_N = 22  # 2^22 subsets is the practical enumeration limit

CheegerFlag = Literal["exact", "lower_bound"]


class GraphConstructionError(RuntimeError):
    """Raised when a randomized generator exhausts its retry budget."""


@dataclass(frozen=True)
class Graph:
    """Connected undirected simple graph on nodes 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            if i > j:
                raise ValueError(f"edge ({i},{j}) not in canonical (min,max) order")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
            adj[i].append(j)
            adj[j].append(i)
        if list(self.edges) != sorted(self.edges):
            raise ValueError("edge list must be sorted lexicographically")
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(nbrs)) for nbrs in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adjacency[i]

    def degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self._adjacency], dtype=np.int64)

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for v in self._adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return bool(seen.all())

    def edge_array(self) -> np.ndarray:
        """Edges as an (m, 2) int array in sorted order."""
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a


@dataclass(frozen=True)
class GraphStats:
    """Degree and expansion statistics of a connected graph."""

    degrees: np.ndarray
    delta_max: int
    cheeger: float
    cheeger_flag: CheegerFlag


def _make_graph(n: int, edges) -> Graph:
    return Graph(n=n, edges=tuple(sorted((min(i, j), max(i, j)) for i, j in edges)))


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return _make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid_graph(rows: int, cols: int) -> Graph:
    """4-neighbor lattice on a rows x cols grid, row-major node numbering."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError(f"grid needs rows*cols >= 2, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return _make_graph(rows * cols, edges)


def random_regular_graph(n: int, d: int, seed: int, max_retries: int = 1000) -> Graph:
    """Connected d-regular graph, deterministic in seed.

    Uses the Steger-Wormald refinement of the pairing model (networkx);
    disconnected draws are rejected and redrawn from a perturbed sub-seed.
    """
    if d < 1 or d >= n or (n * d) % 2 != 0:
        raise ValueError(f"need 1 <= d < n and n*d even, got n={n} d={d}")
    import networkx as nx

    for attempt in range(max_retries):
        sub_seed = derive_seed(seed, STREAM_INIT, attempt) & 0x7FFFFFFF
        raw = nx.random_regular_graph(d, n, seed=sub_seed)
        g = _make_graph(n, raw.edges())
        if g.is_connected():
            return g
    raise GraphConstructionError(f"no connected {d}-regular graph on {n} nodes after {max_retries} attempts")


def _exact_cheeger(g: Graph) -> float:
    """Min over subsets S, 1 <= |S| <= n/2, of |boundary(S)| / |S|."""
    n = g.n
    masks = np.arange(1, 1 << n, dtype=np.uint32)
    # popcount via progressive pair summation
    sizes = masks - ((masks >> np.uint32(1)) & np.uint32(0x55555555))
    sizes = (sizes & np.uint32(0x33333333)) + ((sizes >> np.uint32(2)) & np.uint32(0x33333333))
    sizes = (((sizes + (sizes >> np.uint32(4))) & np.uint32(0x0F0F0F0F)) * np.uint32(0x01010101)) >> np.uint32(24)
    cut = np.zeros(masks.shape, dtype=np.uint32)
    one = np.uint32(1)
    for i, j in g.edges:
        cut += ((masks >> np.uint32(i)) ^ (masks >> np.uint32(j))) & one
    keep = sizes * 2 <= n
    ratios = cut[keep].astype(np.float64) / sizes[keep].astype(np.float64)
    return float(ratios.min())


def _spectral_cheeger_bound(g: Graph) -> float:
    """lambda_2(unsigned Laplacian) / 2, the easy side of Cheeger's inequality."""
    a = g.adjacency_matrix()
    lap = np.diag(a.sum(axis=1)) - a
    eigs = np.linalg.eigvalsh(lap)
    return float(max(eigs[1] / 2.0, 0.0))


def graph_stats(g: Graph, cheeger_mode: str = "spectral") -> GraphStats:
    if not g.is_connected():
        raise ValueError("graph statistics require a connected graph")
    degrees = g.degrees()
    if cheeger_mode == "exact":
        if g.n > EXACT_CHEEGER_MAX_N:
            raise ValueError(f"exact Cheeger enumeration capped at n={EXACT_CHEEGER_MAX_N}, got n={g.n}")
        cheeger, flag = _exact_cheeger(g), "exact"
    elif cheeger_mode == "spectral":
        cheeger, flag = _spectral_cheeger_bound(g), "lower_bound"
    else:
        raise ValueError(f"unknown cheeger_mode {cheeger_mode!r}")
    return GraphStats(degrees=degrees, delta_max=int(degrees.max()), cheeger=cheeger, cheeger_flag=flag)


def write_edge_list(g: Graph) -> str:
    """Plain-text format: first line 'n m', then one 'i j' line per edge."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge-list input")
    n, m = map(int, lines[0].split())
    if len(lines) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
    return _make_graph(n, edges)
