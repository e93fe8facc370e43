"""Numerical checks of the Poincare-type, frame and l1 inequalities.

Each ``check_*`` function evaluates one inequality ``lhs <= rhs`` for one
input and returns a ``TrialResult``; ``summarize`` folds many trials into an
``InequalityReport``. A trial is violated when
``rhs - lhs < -max(rtol * max(|lhs|, |rhs|), atol)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from graph_cubature.functionals import ConstantsReport, NormalizedFunctional, sample
from graph_cubature.graph import Graph, as_signal, gradient_norm, induced_subgraph
from graph_cubature.partition import ClusterSpectral, Partition
from graph_cubature.spectral import (
    BandwidthError,
    SpectralDecomposition,
    in_X_tau,
    project_pw,
    pw_basis,
)

RTOL = 1e-9
ATOL = 1e-12


@dataclass(frozen=True)
class TrialResult:
    lhs: float
    rhs: float
    slack: float
    violated: bool


@dataclass
class InequalityReport:
    name: str
    trials: int
    worst_slack: float
    violated: bool
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "worst_slack": self.worst_slack,
            "violated": self.violated,
            "witness": self.witness,
        }

    @classmethod
    def from_json(cls, data: dict) -> InequalityReport:
        return cls(data["name"], int(data["trials"]), float(data["worst_slack"]),
                   bool(data["violated"]), dict(data.get("witness", {})))


@dataclass
class FrameReport:
    omega: float
    empirical_lower: float
    empirical_upper: float
    bound_lower: float
    bound_upper: float
    tau: float
    mu: float
    raw_bound_lower: float
    raw_bound_upper: float
    trials: int
    worst_lower_slack: float
    worst_upper_slack: float
    violated: bool

    def to_json(self) -> dict:
        return {k: (v if not isinstance(v, float) or math.isfinite(v) else None)
                for k, v in self.__dict__.items()}


def compare(lhs: float, rhs: float, rtol: float = RTOL, atol: float = ATOL) -> TrialResult:
    lhs, rhs = float(lhs), float(rhs)
    scale = max(abs(lhs), abs(rhs))
    diff = rhs - lhs
    slack = diff / max(scale, atol / rtol)
    return TrialResult(lhs, rhs, slack, diff < -max(rtol * scale, atol))


def summarize(name: str, results, witnesses=None) -> InequalityReport:
    """Merge trial results by minimum slack; the witness is the worst trial."""
    results = list(results)
    if not results:
        return InequalityReport(name, 0, float("inf"), False, {})
    worst = min(range(len(results)), key=lambda i: results[i].slack)
    r = results[worst]
    witness = {"trial": worst, "lhs": r.lhs, "rhs": r.rhs}
    if witnesses is not None:
        witness.update(witnesses[worst])
    return InequalityReport(
        name, len(results), r.slack, any(x.violated for x in results), witness
    )


def _lambda1(sd: SpectralDecomposition) -> float:
    if sd.n < 2:
        raise ValueError("need a graph with at least two vertices")
    if sd.zero_multiplicity != 1:
        raise ValueError("graph must be connected")
    return float(sd.eigenvalues[1])


def _psi_phi0(psi, n):
    psi = np.asarray(psi, dtype=float)
    inner = psi.sum() / math.sqrt(n)
    if abs(inner) <= 1e-12 * max(np.linalg.norm(psi), 1e-300):
        raise ValueError("<psi, phi_0> vanishes")
    return psi, inner


def poincare_constant(psi) -> float:
    """``||psi||^2 / <psi, phi_0>^2`` on the full vertex set."""
    psi, inner = _psi_phi0(psi, len(psi))
    return float(psi @ psi) / inner**2


def check_global_poincare(g: Graph, sd: SpectralDecomposition, psi, f) -> TrialResult:
    """``||f||^2 <= (theta / lambda_1) ||grad f||^2`` for ``f`` orthogonal to ``psi``.

    ``f`` is first projected onto the orthogonal complement of ``psi``.
    """
    f = as_signal(g, f)
    psi, _ = _psi_phi0(as_signal(g, psi), g.n)
    f = f - (psi @ f) / (psi @ psi) * psi
    theta = poincare_constant(psi)
    return compare(f @ f, theta / _lambda1(sd) * gradient_norm(g, f) ** 2)


def check_sample_poincare(g: Graph, sd: SpectralDecomposition, psi, f) -> TrialResult:
    f = as_signal(g, f)
    psi, inner = _psi_phi0(as_signal(g, psi), g.n)
    phi0 = np.full(g.n, 1.0 / math.sqrt(g.n))
    r = f - (psi @ f) / inner * phi0
    rhs = (psi @ psi) / (_lambda1(sd) * inner**2) * gradient_norm(g, f) ** 2
    return compare(r @ r, rhs)


def check_poincare_with_sample(g: Graph, sd: SpectralDecomposition, psi, f, eps: float) -> TrialResult:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    f = as_signal(g, f)
    psi, inner = _psi_phi0(as_signal(g, psi), g.n)
    grad2 = gradient_norm(g, f) ** 2
    rhs = (1 + eps) * (psi @ psi) / (_lambda1(sd) * inner**2) * grad2
    rhs += (1 + eps) / eps / inner**2 * (psi @ f) ** 2
    return compare(f @ f, rhs)


def cluster_residual(p: Partition, nf: NormalizedFunctional, f) -> np.ndarray:
    """``f(v) - <zeta_j, f>`` for ``v`` in ``S_j``, as a signal."""
    return f - sample(nf, f)[p.labels(len(f))]


def _theta_from_zeta(p, nf, cs):
    # theta_j is scale invariant, so it can be read off the normalized family
    sizes = p.sizes
    lam1 = np.array([c.lambda1 for c in cs])
    return np.sum(nf.zeta**2, axis=1) * sizes / lam1


def check_cluster_poincare(
    g: Graph, p: Partition, cs: list[ClusterSpectral], nf: NormalizedFunctional, f
) -> TrialResult:
    f = as_signal(g, f)
    r = cluster_residual(p, nf, f)
    theta_xi = float(np.max(_theta_from_zeta(p, nf, cs)))
    return compare(r @ r, theta_xi * gradient_norm(g, f) ** 2)


def local_gradient_energy(g: Graph, p: Partition, f) -> float:
    """``sum_j ||grad_j f_j||^2`` over the induced cluster subgraphs."""
    total = 0.0
    for cluster in p.clusters:
        sub, index = induced_subgraph(g, cluster)
        local = np.empty(len(cluster))
        for v, i in index.items():
            local[i] = f[v]
        total += gradient_norm(sub, local) ** 2
    return total


def optimal_tau(omega: float, a_xi: float) -> tuple[float, float]:
    """Maximize ``(1 - omega (1 + tau) A) tau / (1 + tau)`` over admissible tau.

    The maximizer is ``tau* = 1 / sqrt(omega A) - 1`` with value
    ``(1 - sqrt(omega A))^2``; at ``omega = 0`` the supremum 1 is approached
    as ``tau -> inf``.
    """
    x = omega * a_xi
    if not 0 <= x < 1:
        raise BandwidthError(f"omega={omega} outside [0, 1/A_Xi)")
    if x == 0:
        return math.inf, 1.0
    return 1.0 / math.sqrt(x) - 1.0, (1.0 - math.sqrt(x)) ** 2


def frame_lower_factor(omega: float, a_xi: float, tau: float) -> float:
    """``(1 - mu) tau / (1 + tau)`` with ``mu = omega (1 + tau) A_Xi``; -inf if mu >= 1."""
    mu = omega * (1 + tau) * a_xi
    if mu >= 1:
        return -math.inf
    return (1 - mu) * tau / (1 + tau)


def check_plancherel_polya(
    g: Graph,
    sd: SpectralDecomposition,
    p: Partition,
    nf: NormalizedFunctional,
    constants: ConstantsReport,
    omega: float,
    trials: int = 1000,
    seed: int = 0,
) -> FrameReport:
    """Frame bounds of the samples ``<zeta_j, f>`` on E_omega.

    The bound constants ``a`` and ``c`` are evaluated on the normalized
    functions ``zeta_j``, the family the samples are actually taken with:
    ``a = max_j |S_j|`` and ``c = max_j ||zeta_j||^2``. The same constants
    evaluated on the raw ``psi_j`` are reported as ``raw_bound_*``; they are
    not scale invariant and do not bound the ``zeta`` samples in general.
    """
    omega = float(omega)
    if not 0 <= omega < constants.omega_frame:
        raise BandwidthError(f"omega={omega} outside [0, 1/A_Xi={constants.omega_frame})")
    tau, factor = optimal_tau(omega, constants.a_xi)
    mu = omega * (1 + tau) * constants.a_xi if math.isfinite(tau) else 0.0
    a_frame = float(np.max(p.sizes))
    c_frame = float(np.max(np.sum(nf.zeta**2, axis=1)))
    lower = factor / a_frame
    upper = c_frame

    pw = pw_basis(sd, omega)
    M = nf.zeta @ pw.basis
    sv = np.linalg.svd(M, compute_uv=False)
    emp_upper = float(sv[0] ** 2)
    emp_lower = float(sv[-1] ** 2) if pw.dim <= M.shape[0] else 0.0

    results = [compare(lower, emp_lower), compare(emp_upper, upper)]
    lower_slack = [results[0].slack]
    upper_slack = [results[1].slack]
    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        f = pw.basis @ rng.standard_normal(pw.dim)
        norm2 = float(f @ f)
        if norm2 < 1e-16:
            continue
        s = sample(nf, f)
        energy = float(s @ s)
        lo_r = compare(lower * norm2, energy)
        up_r = compare(energy, upper * norm2)
        results += [lo_r, up_r]
        lower_slack.append(lo_r.slack)
        upper_slack.append(up_r.slack)
        done += 1

    return FrameReport(
        omega=omega,
        empirical_lower=emp_lower,
        empirical_upper=emp_upper,
        bound_lower=lower,
        bound_upper=upper,
        tau=tau,
        mu=mu,
        raw_bound_lower=factor / constants.a,
        raw_bound_upper=constants.c,
        trials=trials,
        worst_lower_slack=min(lower_slack),
        worst_upper_slack=min(upper_slack),
        violated=any(r.violated for r in results),
    )


def check_l1_inequality(
    g: Graph,
    p: Partition,
    cs: list[ClusterSpectral],
    nf: NormalizedFunctional,
    constants: ConstantsReport,
    omega: float,
    f,
) -> TrialResult:
    """l1 cluster deviation ``<= sqrt(omega) C_Xi ||f||_1`` for ``f`` in X_omega."""
    f = as_signal(g, f)
    if not in_X_tau(g, f, omega):
        raise BandwidthError(f"signal is not in X_omega for omega={omega}")
    lhs = float(np.sum(np.abs(cluster_residual(p, nf, f))))
    return compare(lhs, math.sqrt(omega) * constants.c_xi * float(np.sum(np.abs(f))))


def check_double_l1(
    g: Graph,
    p: Partition,
    nf: NormalizedFunctional,
    constants: ConstantsReport,
    omega: float,
    f,
    sd: SpectralDecomposition | None = None,
) -> TrialResult:
    """``(1-g)||f||_1 <= sum_j |<zeta_j, f>| |S_j| <= (1+g)||f||_1`` with ``g = sqrt(omega) C_Xi``.

    Returns the worse of the two sides. When ``sd`` is given, membership of
    ``f`` in E_omega is verified first.
    """
    f = as_signal(g, f)
    gamma = math.sqrt(omega) * constants.c_xi
    if not 0 < gamma < 0.5:
        raise BandwidthError(f"gamma={gamma} outside (0, 1/2)")
    if sd is not None:
        if np.linalg.norm(f - project_pw(sd, omega, f)) > 1e-8 * max(np.linalg.norm(f), 1.0):
            raise BandwidthError("signal is not in E_omega")
    middle = float(np.abs(sample(nf, f)) @ p.sizes)
    l1 = float(np.sum(np.abs(f)))
    low = compare((1 - gamma) * l1, middle)
    high = compare(middle, (1 + gamma) * l1)
    return low if low.slack <= high.slack else high


def check_operator_poincare(t_values, vectors, psi, f) -> TrialResult:
    """``lambda_1(T)^2 <psi, phi_0>^2 / ||psi||^2 ||f||^2 <= ||T f||^2`` for ``f`` orthogonal to ``psi``.

    ``T`` is given spectrally by ascending eigenvalues ``t_values`` (with
    ``t_values[0] == 0``) and orthonormal eigenvector columns ``vectors``.
    ``f`` is projected onto the orthogonal complement of ``psi`` first.
    """
    t = np.asarray(t_values, dtype=float)
    phi = np.asarray(vectors, dtype=float)
    psi = np.asarray(psi, dtype=float)
    f = np.asarray(f, dtype=float)
    if t.size < 2 or phi.shape != (t.size, t.size):
        raise ValueError("need at least two eigenpairs and a square eigenvector matrix")
    if np.any(np.diff(t) < 0) or t[0] != 0 or t[1] <= 0:
        raise ValueError("eigenvalues must ascend from 0 with a positive gap")
    inner = float(psi @ phi[:, 0])
    if abs(inner) <= 1e-12 * max(np.linalg.norm(psi), 1e-300):
        raise ValueError("<psi, phi_0> vanishes")
    f = f - (psi @ f) / (psi @ psi) * psi
    tf = phi @ (t * (phi.T @ f))
    lhs = t[1] ** 2 * inner**2 / float(psi @ psi) * float(f @ f)
    return compare(lhs, float(tf @ tf))
