"""Cluster weight functions, their normalized sampling functionals, and the
constants that control the sampling and cubature guarantees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from graph_cubature.partition import ClusterSpectral, Partition


class FunctionalError(ValueError):
    """Invalid cluster weight function."""


@dataclass(frozen=True)
class FunctionalFamily:
    """Nonnegative weight functions, one per cluster, as rows of ``psi``."""

    partition: Partition
    psi: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float)
        k = len(self.partition)
        if psi.ndim != 2 or psi.shape[0] != k:
            raise FunctionalError(f"expected {k} rows of cluster weights, got {psi.shape}")
        if not np.all(np.isfinite(psi)):
            raise FunctionalError("weights must be finite")
        for j, cluster in enumerate(self.partition.clusters):
            row = psi[j]
            outside = np.ones(row.shape[0], dtype=bool)
            outside[list(cluster)] = False
            if np.any(row[outside] != 0):
                v = int(np.flatnonzero(row * outside)[0])
                raise FunctionalError(f"psi_{j} leaks outside its cluster at vertex {v}")
            if np.any(row < 0):
                v = int(np.flatnonzero(row < 0)[0])
                raise FunctionalError(f"psi_{j} is negative at vertex {v}")
            if not np.any(row > 0):
                raise FunctionalError(f"psi_{j} is identically zero")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def n(self) -> int:
        return self.psi.shape[1]

    def scaled(self, factor: float) -> FunctionalFamily:
        return FunctionalFamily(self.partition, factor * self.psi, self.kind)


@dataclass(frozen=True)
class NormalizedFunctional:
    """Rows ``zeta_j = psi_j / sum_{S_j} psi_j`` so that ``<zeta_j, chi_j> = 1``."""

    partition: Partition
    zeta: np.ndarray

    @property
    def n(self) -> int:
        return self.zeta.shape[1]


@dataclass(frozen=True)
class ConstantsReport:
    theta_j: tuple[float, ...]
    theta_xi: float
    a_xi: float
    a: float
    c: float
    c_xi: float
    omega_frame: float

    def omega_cubature(self, gamma: float) -> float:
        """Largest bandwidth with guaranteed positive exact weights for this gamma."""
        return (gamma / self.c_xi) ** 2

    def to_json(self) -> dict:
        return {
            "theta_j": list(self.theta_j),
            "theta_xi": self.theta_xi,
            "a_xi": self.a_xi,
            "a": self.a,
            "c": self.c,
            "c_xi": self.c_xi,
            "omega_frame": self.omega_frame,
        }

    @classmethod
    def from_json(cls, data: dict) -> ConstantsReport:
        return cls(
            theta_j=tuple(float(x) for x in data["theta_j"]),
            theta_xi=float(data["theta_xi"]),
            a_xi=float(data["a_xi"]),
            a=float(data["a"]),
            c=float(data["c"]),
            c_xi=float(data["c_xi"]),
            omega_frame=float(data["omega_frame"]),
        )


def make_dirac(p: Partition, anchors, n: int) -> FunctionalFamily:
    """Point evaluation at one anchor vertex per cluster."""
    anchors = [int(v) for v in anchors]
    if len(anchors) != len(p):
        raise FunctionalError(f"need {len(p)} anchors, got {len(anchors)}")
    psi = np.zeros((len(p), n))
    for j, (v, cluster) in enumerate(zip(anchors, p.clusters)):
        if v not in cluster:
            raise FunctionalError(f"anchor {v} is not in cluster {j}")
        psi[j, v] = 1.0
    return FunctionalFamily(p, psi, "dirac")


def make_average(p: Partition, n: int) -> FunctionalFamily:
    """Indicator of each cluster; samples are cluster means."""
    psi = np.zeros((len(p), n))
    for j, cluster in enumerate(p.clusters):
        psi[j, list(cluster)] = 1.0
    return FunctionalFamily(p, psi, "average")


def load_custom(p: Partition, psi_values, n: int) -> FunctionalFamily:
    """Build a family from sparse per-cluster ``{vertex: value}`` maps.

    ``psi_values`` holds one mapping (or list of ``{"vertex", "value"}``
    records) per cluster.
    """
    if len(psi_values) != len(p):
        raise FunctionalError(f"need weights for {len(p)} clusters, got {len(psi_values)}")
    psi = np.zeros((len(p), n))
    for j, entries in enumerate(psi_values):
        if isinstance(entries, dict):
            items = entries.items()
        else:
            items = [(e["vertex"], e["value"]) for e in entries]
        for v, x in items:
            v = int(v)
            if not 0 <= v < n:
                raise FunctionalError(f"psi_{j} names vertex {v} outside [0, {n})")
            psi[j, v] = float(x)
    return FunctionalFamily(p, psi, "custom")


def cluster_mass(ff: FunctionalFamily) -> np.ndarray:
    """``<psi_j, chi_j>`` per cluster (sum of psi_j over S_j)."""
    return np.array([ff.psi[j, list(c)].sum() for j, c in enumerate(ff.partition.clusters)])


def normalize(ff: FunctionalFamily, cs=None) -> NormalizedFunctional:
    """Normalize each ``psi_j`` to unit mass on its cluster.

    The denominator ``sqrt(|S_j|) <psi_j, phi_{0,j}>`` equals the plain sum of
    ``psi_j`` over ``S_j``, so it is taken in closed form. ``cs`` is accepted
    for interface symmetry and only used to cross-check cluster sizes.
    """
    if cs is not None and len(cs) != len(ff.partition):
        raise ValueError("cluster spectra do not match the partition")
    mass = cluster_mass(ff)
    if np.any(mass <= 0):
        raise FunctionalError("a cluster weight has vanishing inner product with phi_0")
    zeta = ff.psi / mass[:, None]
    zeta.setflags(write=False)
    return NormalizedFunctional(ff.partition, zeta)


def compute_constants(
    ff: FunctionalFamily,
    nf: NormalizedFunctional,
    p: Partition,
    cs: list[ClusterSpectral],
) -> ConstantsReport:
    if len(cs) != len(p) or ff.partition != p or nf.partition != p:
        raise ValueError("family, partition and cluster spectra are inconsistent")
    sizes = p.sizes
    lam1 = np.array([c.lambda1 for c in cs])
    norm2 = np.sum(ff.psi**2, axis=1)
    # <psi_j, phi_{0,j}> in closed form
    inner = cluster_mass(ff) / np.sqrt(sizes)
    theta = norm2 / (lam1 * inner**2)
    theta_xi = float(theta.max())
    c_xi = math.sqrt(len(p) * float(np.max(sizes * theta)))
    return ConstantsReport(
        theta_j=tuple(float(x) for x in theta),
        theta_xi=theta_xi,
        a_xi=theta_xi,
        a=float(np.max(1.0 / inner**2)),
        c=float(norm2.max()),
        c_xi=c_xi,
        omega_frame=1.0 / theta_xi,
    )


def sample(nf: NormalizedFunctional, f) -> np.ndarray:
    """Samples ``<zeta_j, f>`` for every cluster."""
    f = np.asarray(f, dtype=float)
    if f.shape != (nf.n,):
        raise ValueError(f"signal length {f.shape} does not match n={nf.n}")
    return nf.zeta @ f
