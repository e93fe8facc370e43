"""Disjoint covers of a graph by connected clusters, and per-cluster spectra."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from graph_cubature import kernels
from graph_cubature.graph import Graph, build_laplacian, connected_components, induced_subgraph
from graph_cubature.spectral import SpectralDecomposition, eigendecompose


@dataclass(frozen=True)
class Violation:
    """One reason a raw cluster list is not a valid partition.

    ``kind`` is one of ``out_of_range``, ``overlap``, ``gap``, ``singleton``,
    ``disconnected`` or ``empty``.
    """

    kind: str
    cluster: int | None = None
    vertex: int | None = None
    detail: str = ""

    def __str__(self):
        where = []
        if self.cluster is not None:
            where.append(f"cluster {self.cluster}")
        if self.vertex is not None:
            where.append(f"vertex {self.vertex}")
        text = f"{self.kind} ({', '.join(where)})" if where else self.kind
        return f"{text}: {self.detail}" if self.detail else text


class PartitionError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Partition:
    clusters: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.clusters], dtype=float)

    def __len__(self):
        return len(self.clusters)

    def labels(self, n: int) -> np.ndarray:
        lab = np.empty(n, dtype=int)
        for j, c in enumerate(self.clusters):
            lab[list(c)] = j
        return lab

    def to_json(self) -> dict:
        return {"clusters": [list(c) for c in self.clusters]}


@dataclass(frozen=True)
class ClusterSpectral:
    lambda1: float
    phi0: np.ndarray
    decomposition: SpectralDecomposition
    vertices: tuple[int, ...]


def validate_partition(g: Graph, clusters) -> Partition:
    """Check that ``clusters`` is a disjoint cover of ``g`` by connected
    clusters of at least two vertices.

    Clusters are re-ordered by their smallest vertex. All violations are
    collected and raised together as a ``PartitionError``.
    """
    problems = []
    owner = {}
    raw = [list(c) for c in clusters]
    if not raw:
        problems.append(Violation("empty", detail="no clusters given"))
    for j, cluster in enumerate(raw):
        for v in cluster:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                problems.append(Violation("out_of_range", j, None, f"non-integer id {v!r}"))
                continue
            if not 0 <= v < g.n:
                problems.append(Violation("out_of_range", j, int(v), f"outside [0, {g.n})"))
                continue
            if v in owner:
                problems.append(
                    Violation("overlap", j, int(v), f"also in cluster {owner[v]}")
                )
            else:
                owner[int(v)] = j
    for v in range(g.n):
        if v not in owner:
            problems.append(Violation("gap", None, v, "not covered by any cluster"))
    for j, cluster in enumerate(raw):
        members = sorted(set(int(v) for v in cluster if isinstance(v, (int, np.integer)) and 0 <= v < g.n))
        if len(members) < 2:
            problems.append(Violation("singleton", j, None, "needs at least two vertices"))
            continue
        comps = connected_components(g, members)
        if len(comps) > 1:
            problems.append(
                Violation("disconnected", j, None, f"{len(comps)} induced components")
            )
    if problems:
        raise PartitionError(problems)
    ordered = sorted((tuple(sorted(int(v) for v in c)) for c in raw), key=lambda c: c[0])
    return Partition(tuple(ordered))


def _one_cluster(g: Graph, vertices) -> ClusterSpectral:
    sub, _ = induced_subgraph(g, vertices)
    sd = eigendecompose(build_laplacian(sub))
    phi0 = np.zeros(g.n)
    phi0[list(vertices)] = 1.0 / math.sqrt(len(vertices))
    phi0.setflags(write=False)
    return ClusterSpectral(float(sd.eigenvalues[1]), phi0, sd, tuple(vertices))


def cluster_spectral(g: Graph, p: Partition) -> list[ClusterSpectral]:
    """Decompose every induced cluster Laplacian; results follow cluster order."""
    workers = min(kernels.max_workers(), len(p.clusters))
    if workers <= 1 or len(p.clusters) < 4:
        return [_one_cluster(g, c) for c in p.clusters]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _one_cluster(g, c), p.clusters))
