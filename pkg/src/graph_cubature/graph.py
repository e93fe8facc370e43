"""Weighted undirected graphs, their Laplacian, and signal norms.

Signals are plain 1-D float arrays indexed by vertex id.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Malformed graph or signal."""


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with canonical edge storage.

    Each edge is ``(u, v, w)`` with ``u < v`` and ``w > 0``; edges are kept
    sorted so two graphs with the same edge set compare and hash equal.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = field(default=())

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {n!r}")
        canon = {}
        for edge in self.edges:
            if len(edge) != 3:
                raise GraphError(f"edge must be (u, v, w), got {edge!r}")
            u, v, w = edge
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside [0, {n})")
            if u == v:
                raise GraphError(f"self loop at vertex {u}")
            if not (math.isfinite(w) and w > 0):
                raise GraphError(f"edge ({u}, {v}) weight must be finite and > 0, got {w}")
            key = (min(u, v), max(u, v))
            if key in canon:
                raise GraphError(f"duplicate edge {key}")
            canon[key] = w
        object.__setattr__(self, "n", int(n))
        object.__setattr__(
            self, "edges", tuple((u, v, canon[(u, v)]) for u, v in sorted(canon))
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[float]]) -> Graph:
        return cls(n, tuple(tuple(e) for e in edges))

    @cached_property
    def weights(self) -> np.ndarray:
        """Dense symmetric weight matrix (read-only)."""
        w = np.zeros((self.n, self.n))
        for u, v, x in self.edges:
            w[u, v] = x
            w[v, u] = x
        w.setflags(write=False)
        return w

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        payload = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u, v, w] for u, v, w in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            return cls.from_edges(data["n"], data["edges"])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc

    def is_connected(self) -> bool:
        return len(connected_components(self, range(self.n))) == 1


def connected_components(g: Graph, vertices: Iterable[int]) -> list[list[int]]:
    """Components of the subgraph induced by ``vertices`` (breadth-first)."""
    members = set(vertices)
    seen = set()
    comps = []
    for start in sorted(members):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.adjacency[u]:
                    if v in members and v not in seen:
                        seen.add(v)
                        comp.append(v)
                        nxt.append(v)
            frontier = nxt
        comps.append(sorted(comp))
    return comps


def as_signal(g: Graph, f) -> np.ndarray:
    """Validate ``f`` as a finite real signal on ``g``."""
    arr = np.asarray(f, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != g.n:
        raise GraphError(f"signal length {arr.shape} does not match n={g.n}")
    if not np.all(np.isfinite(arr)):
        raise GraphError("signal has non-finite entries")
    return arr


def build_laplacian(g: Graph) -> np.ndarray:
    """Weighted Laplacian: weighted degree on the diagonal, ``-w(u, v)`` off it."""
    w = np.array(g.weights)
    lap = -w
    lap[np.diag_indices(g.n)] = w.sum(axis=1)
    return lap


def apply_laplacian(g: Graph, f) -> np.ndarray:
    """``(Lf)(v) = sum_u (f(v) - f(u)) w(v, u)``, accumulated edge by edge."""
    f = as_signal(g, f)
    out = np.zeros(g.n)
    if not g.edges:
        return out
    e = np.asarray(g.edges)
    u = e[:, 0].astype(int)
    v = e[:, 1].astype(int)
    flow = (f[u] - f[v]) * e[:, 2]
    np.add.at(out, u, flow)
    np.add.at(out, v, -flow)
    return out


def gradient_norm(g: Graph, f) -> float:
    """Square root of ``sum over edges of w * (f(u) - f(v))**2``."""
    f = as_signal(g, f)
    if not g.edges:
        return 0.0
    e = np.asarray(g.edges)
    diff = f[e[:, 0].astype(int)] - f[e[:, 1].astype(int)]
    return math.sqrt(float(np.sum(e[:, 2] * diff * diff)))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph on ``vertices`` keeping only internal edges.

    Returns the relabelled graph and the map from old to new ids; new ids
    follow the ascending order of the old ones.
    """
    verts = sorted(set(int(v) for v in vertices))
    if not verts:
        raise GraphError("induced subgraph needs at least one vertex")
    for v in verts:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} outside [0, {g.n})")
    index = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        (index[u], index[v], w) for u, v, w in g.edges if u in index and v in index
    )
    return Graph(len(verts), edges), index


def l1_norm(f) -> float:
    return float(np.sum(np.abs(np.asarray(f, dtype=float))))


def l2_norm(f) -> float:
    return float(np.linalg.norm(np.asarray(f, dtype=float)))


def sum_values(f) -> float:
    return float(np.sum(np.asarray(f, dtype=float)))
