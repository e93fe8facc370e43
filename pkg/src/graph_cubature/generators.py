"""Deterministic test graphs, including weakly coupled community graphs.

All randomness goes through ``numpy.random.Generator(PCG64(seed))`` so a
given seed regenerates the same graph on every platform.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from graph_cubature.graph import Graph, GraphError, connected_components
from graph_cubature.partition import Partition
from graph_cubature.spectral import graph_spectrum


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def gen_path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n, 1.0) for i in range(n)))


def gen_complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph(n, tuple((i, j, 1.0) for i in range(n) for j in range(i + 1, n)))


def gen_grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GraphError("grid needs rows, cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, 1.0))
            if r + 1 < rows:
                edges.append((v, v + cols, 1.0))
    return Graph(rows * cols, tuple(edges))


def _random_block(m, p, rng):
    """Edges of G(m, p), then a random spanning tree if the draw is disconnected."""
    edges = set()
    for i in range(m):
        for j in range(i + 1, m):
            if rng.random() < p:
                edges.add((i, j))
    if len(connected_components(Graph(m, tuple((i, j, 1.0) for i, j in edges)), range(m))) > 1:
        perm = rng.permutation(m)
        for k in range(1, m):
            a, b = int(perm[k]), int(perm[rng.integers(k)])
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def gen_random_connected(n: int, p: float, seed: int, weight_range=(0.5, 2.0)) -> Graph:
    """Connected G(n, p) draw with uniform random edge weights."""
    if n < 1:
        raise GraphError("need n >= 1")
    rng = _rng(seed)
    lo, hi = weight_range
    return Graph(n, tuple((i, j, float(rng.uniform(lo, hi))) for i, j in _random_block(n, p, rng)))


@dataclass(frozen=True)
class CommunitySpec:
    communities: int
    size: int
    p_intra: float = 1.0
    w_intra: float = 1.0
    w_inter: float = 0.01
    bridges: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.communities < 1:
            raise GraphError("need at least one community")
        if self.size < 2:
            raise GraphError("communities need at least two vertices")
        if not 0 <= self.p_intra <= 1:
            raise GraphError("p_intra must lie in [0, 1]")
        if self.w_intra <= 0 or self.w_inter < 0:
            raise GraphError("w_intra must be > 0 and w_inter >= 0")
        if not 0 <= self.bridges <= self.size * self.size:
            raise GraphError("bridges must lie in [0, size^2]")


def gen_community(spec: CommunitySpec) -> tuple[Graph, Partition]:
    """Communities of ``size`` vertices joined in a ring by weak bridges.

    Community ``k`` owns vertices ``k*size .. (k+1)*size - 1``. Each pair of
    circularly adjacent communities gets ``bridges`` distinct random vertex
    pairs of weight ``w_inter``; ``w_inter == 0`` leaves the communities
    disconnected.
    """
    rng = _rng(spec.seed)
    m, N = spec.size, spec.communities
    edges = []
    for k in range(N):
        off = k * m
        for i, j in _random_block(m, spec.p_intra, rng):
            edges.append((off + i, off + j, spec.w_intra))
    if spec.w_inter > 0 and N > 1:
        pairs = [(k, (k + 1) % N) for k in range(N if N > 2 else 1)]
        for a, b in pairs:
            picks = rng.choice(m * m, size=spec.bridges, replace=False)
            for pick in sorted(int(x) for x in picks):
                u, v = a * m + pick // m, b * m + pick % m
                edges.append((min(u, v), max(u, v), spec.w_inter))
    g = Graph(N * m, tuple(edges))
    partition = Partition(tuple(tuple(range(k * m, (k + 1) * m)) for k in range(N)))
    return g, partition


def count_low_eigenvalues(sd, rho: float) -> int:
    """Number of eigenvalues strictly below ``rho``."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return int(np.sum(sd.eigenvalues < rho))


def coupling_threshold(spec: CommunitySpec, rho: float, hi: float = 1.0, steps: int = 30):
    """Bisect for the largest bridge weight keeping ``communities`` eigenvalues below ``rho``.

    Returns ``(threshold, samples)`` where ``samples`` lists every probed
    ``(w_inter, count)`` pair in probing order.
    """
    def count(eps):
        g, _ = gen_community(replace(spec, w_inter=eps))
        return count_low_eigenvalues(graph_spectrum(g), rho)

    samples = []
    lo = 0.0
    c_hi = count(hi)
    samples.append((hi, c_hi))
    if c_hi >= spec.communities:
        return hi, samples
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        c = count(mid)
        samples.append((mid, c))
        if c >= spec.communities:
            lo = mid
        else:
            hi = mid
    return lo, samples
