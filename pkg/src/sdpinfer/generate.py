"""Noisy observation model: ground-truth labels, edge signs A, node signs w.

Each edge draws a single sign flip keyed on (seed, min(i,j), max(i,j)) and
each node on (seed, i), so observations are reproducible independent of
iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sdpinfer.graphs import Graph
from sdpinfer.rng import STREAM_EDGE, STREAM_NODE, key_mix, uniform01


@dataclass(frozen=True)
class Observation:
    """One sample of the generative model: edge matrix A, node vector w."""

    a: np.ndarray
    w: np.ndarray
    p: float
    q: float
    seed: int

    @property
    def n(self) -> int:
        return self.a.shape[0]


def _check_noise(value: float, name: str) -> None:
    if not (0.0 <= value < 0.5):
        raise ValueError(f"{name} must lie in [0, 0.5), got {value}")


def sample_labels(n: int, mode: str = "all_plus", seed: int | None = None) -> np.ndarray:
    """Ground-truth label vector in {+1, -1}^n.

    Modes: 'all_plus'; 'balanced' (first ceil(n/2) entries +1, rest -1);
    'random' (uniform signs, requires a seed).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if mode == "all_plus":
        return np.ones(n, dtype=np.int64)
    if mode == "balanced":
        y = np.ones(n, dtype=np.int64)
        y[(n + 1) // 2:] = -1
        return y
    if mode == "random":
        if seed is None:
            raise ValueError("random label mode requires a seed")
        rng = np.random.default_rng(seed)
        return rng.choice(np.array([1, -1], dtype=np.int64), size=n)
    raise ValueError(f"unknown label mode {mode!r}")


def observe_edges(g: Graph, y: np.ndarray, p: float, seed: int) -> np.ndarray:
    """Symmetric sign matrix A with A_ij = z_ij * y_i * y_j on edges.

    z_ij = -1 with probability p, one draw per undirected edge.
    """
    _check_noise(p, "p")
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (g.n,):
        raise ValueError(f"label vector length {y.shape} does not match n={g.n}")
    a = np.zeros((g.n, g.n))
    if g.m == 0:
        return a
    e = g.edge_array()
    z = np.where(uniform01(key_mix(seed, STREAM_EDGE, e[:, 0], e[:, 1])) < p, -1.0, 1.0)
    vals = z * y[e[:, 0]] * y[e[:, 1]]
    a[e[:, 0], e[:, 1]] = vals
    a[e[:, 1], e[:, 0]] = vals
    return a


def observe_nodes(y: np.ndarray, q: float, seed: int) -> np.ndarray:
    """Node sign vector w with w_i = -y_i with probability q, else y_i."""
    _check_noise(q, "q")
    y = np.asarray(y, dtype=np.int64)
    idx = np.arange(len(y))
    z = np.where(uniform01(key_mix(seed, STREAM_NODE, idx)) < q, -1, 1)
    return (z * y).astype(np.int64)


def observe(g: Graph, y: np.ndarray, p: float, q: float, seed: int) -> Observation:
    """Draw a full Observation (edges and nodes) from one seed."""
    return Observation(
        a=observe_edges(g, y, p, seed),
        w=observe_nodes(y, q, seed),
        p=p,
        q=q,
        seed=seed,
    )


def write_observation(obs: Observation) -> str:
    """Text format: header 'n p q seed', signed edge lines 'i j s', then w."""
    n = obs.n
    lines = [f"{n} {obs.p!r} {obs.q!r} {obs.seed}"]
    for i in range(n):
        for j in range(i + 1, n):
            if obs.a[i, j] != 0:
                lines.append(f"{i} {j} {int(obs.a[i, j]):+d}")
    lines.extend(f"{int(wi):+d}" for wi in obs.w)
    return "\n".join(lines) + "\n"


def read_observation(text: str) -> Observation:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty observation input")
    head = lines[0].split()
    n, p, q, seed = int(head[0]), float(head[1]), float(head[2]), int(head[3])
    a = np.zeros((n, n))
    w = np.array([int(ln) for ln in lines[-n:]], dtype=np.int64)
    for ln in lines[1:-n]:
        i, j, s = ln.split()
        a[int(i), int(j)] = a[int(j), int(i)] = float(int(s))
    return Observation(a=a, w=w, p=p, q=q, seed=seed)
