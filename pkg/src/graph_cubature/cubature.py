"""Sampling operator, reconstruction from samples, and positive cubature weights.

The weights are ``w_j = (beta + sigma_j) |S_j|`` with
``beta = (1 - 2 gamma) / (1 - gamma)`` and ``0 <= sigma_j <= 2 / (1 - gamma)``.
They are found as a bounded linear-feasibility problem: the exactness
conditions on a basis of E_omega are linear in ``sigma``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from graph_cubature.functionals import ConstantsReport, NormalizedFunctional
from graph_cubature.graph import Graph
from graph_cubature.partition import Partition
from graph_cubature.simplex import solve_bounded_lp
from graph_cubature.spectral import PW_SLACK, BandwidthError, PaleyWienerBasis, SpectralDecomposition, pw_basis

CONSTRAINT_SLACK = 1e-10
BASIS_RTOL = 1e-9
RANDOM_RTOL = 1e-8


class InfeasibleError(RuntimeError):
    """The weight system has no solution inside the prescribed box."""

    def __init__(self, message, certificate=None, infeasibility=float("nan")):
        super().__init__(message)
        self.certificate = certificate
        self.infeasibility = infeasibility


@dataclass(frozen=True)
class SamplingMatrix:
    """``matrix[j, k] = <zeta_j, phi_k>`` over the E_omega basis."""

    matrix: np.ndarray
    omega: float

    @property
    def singular_values(self) -> np.ndarray:
        if self.matrix.size == 0:
            return np.zeros(0)
        return np.linalg.svd(self.matrix, compute_uv=False)


@dataclass(frozen=True)
class CubatureWeights:
    gamma: float
    omega: float
    weights: np.ndarray
    sigma: np.ndarray
    residual_max: float
    dim_E_omega: int

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "omega": self.omega,
            "weights": self.weights.tolist(),
            "sigma": self.sigma.tolist(),
            "residual_max": self.residual_max,
            "dim_E_omega": self.dim_E_omega,
        }

    @classmethod
    def from_json(cls, data: dict) -> CubatureWeights:
        return cls(
            gamma=float(data["gamma"]),
            omega=float(data["omega"]),
            weights=np.asarray(data["weights"], dtype=float),
            sigma=np.asarray(data.get("sigma", []), dtype=float),
            residual_max=float(data.get("residual_max", float("nan"))),
            dim_E_omega=int(data.get("dim_E_omega", -1)),
        )

    def __eq__(self, other):
        if not isinstance(other, CubatureWeights):
            return NotImplemented
        return self.to_json() == other.to_json()


@dataclass(frozen=True)
class ReconstructionResult:
    signal: np.ndarray
    coefficients: np.ndarray
    residual: float
    rank_deficient: bool
    smallest_singular_value: float


@dataclass
class WeightsReport:
    positive: bool
    within_bounds: bool
    basis_residual_max: float
    random_residual_max: float
    basis_tolerance: float
    random_tolerance: float
    dim_E_omega: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "positive": self.positive,
            "within_bounds": self.within_bounds,
            "basis_residual_max": self.basis_residual_max,
            "random_residual_max": self.random_residual_max,
            "basis_tolerance": self.basis_tolerance,
            "random_tolerance": self.random_tolerance,
            "dim_E_omega": self.dim_E_omega,
            "failures": list(self.failures),
        }


def weight_bounds(gamma: float, sizes) -> tuple[np.ndarray, np.ndarray]:
    sizes = np.asarray(sizes, dtype=float)
    return (1 - 2 * gamma) / (1 - gamma) * sizes, (3 - 2 * gamma) / (1 - gamma) * sizes


def default_omega(sd: SpectralDecomposition, constants: ConstantsReport, gamma: float) -> float:
    """Smallest bandwidth giving the same E_omega as the cutoff ``(gamma / C_Xi)^2``."""
    cutoff = constants.omega_cubature(gamma)
    below = sd.eigenvalues[sd.eigenvalues < cutoff]
    if below.size == 0:
        return cutoff
    return max(0.0, min(cutoff, float(below[-1]) + PW_SLACK))


def build_sampling_matrix(nf: NormalizedFunctional, pw: PaleyWienerBasis) -> SamplingMatrix:
    if pw.basis.shape[0] != nf.n:
        raise ValueError("basis and functionals live on different vertex sets")
    m = nf.zeta @ pw.basis
    m.setflags(write=False)
    return SamplingMatrix(m, pw.omega)


def reconstruct(M: SamplingMatrix, pw: PaleyWienerBasis, samples) -> ReconstructionResult:
    """Least-squares recovery of ``f`` in E_omega from its samples.

    Rank deficiency is reported in the result rather than raised; the
    minimum-norm least-squares solution is returned in that case.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (M.matrix.shape[0],):
        raise ValueError(f"expected {M.matrix.shape[0]} samples, got {samples.shape}")
    sv = M.singular_values
    smin = float(sv[-1]) if sv.size else 0.0
    tol = max(M.matrix.shape) * np.finfo(float).eps * (float(sv[0]) if sv.size else 0.0)
    deficient = sv.size < M.matrix.shape[1] or smin <= tol
    coef, *_ = np.linalg.lstsq(M.matrix, samples, rcond=None)
    residual = float(np.linalg.norm(M.matrix @ coef - samples))
    return ReconstructionResult(pw.basis @ coef, coef, residual, bool(deficient), smin)


def _polish(sigma, A, b, upper):
    """Remove the constraint slack by a least-squares step on the free variables.

    The step is kept only if it stays inside the box and lowers the residual.
    """
    free = (sigma > 1e-12 * upper) & (sigma < upper * (1 - 1e-12))
    r = b - A @ sigma
    if not free.any():
        return sigma
    step, *_ = np.linalg.lstsq(A[:, free], r, rcond=None)
    trial = sigma.copy()
    trial[free] += step
    if np.all(trial >= 0) and np.all(trial <= upper):
        if np.max(np.abs(b - A @ trial)) < np.max(np.abs(r)):
            return trial
    return sigma


def solve_weights(
    M: SamplingMatrix,
    pw: PaleyWienerBasis,
    p: Partition,
    nf: NormalizedFunctional,
    constants: ConstantsReport,
    gamma: float,
) -> CubatureWeights:
    """Positive weights exact on E_omega, via bounded-variable simplex.

    Among feasible ``sigma`` the one with the smallest sum is returned, which
    makes the output reproducible.

    Raises:
        BandwidthError: ``gamma`` outside (0, 1/2) or ``omega`` above the cutoff.
        ValueError: some sampling function is negative.
        InfeasibleError: no ``sigma`` in the box satisfies the system.
    """
    gamma = float(gamma)
    if not 0 < gamma < 0.5:
        raise BandwidthError(f"gamma must lie in (0, 1/2), got {gamma}")
    cutoff = constants.omega_cubature(gamma)
    if pw.omega > cutoff * (1 + 1e-12):
        raise BandwidthError(f"omega={pw.omega} exceeds the cutoff {cutoff}")
    if np.any(nf.zeta < 0):
        raise ValueError("sampling functions must be nonnegative")
    if nf.partition != p:
        raise ValueError("functionals were built for a different partition")

    sizes = p.sizes
    beta = (1 - 2 * gamma) / (1 - gamma)
    upper = 2 / (1 - gamma)
    J = len(p)
    A = (M.matrix * sizes[:, None]).T
    totals = pw.basis.sum(axis=0)
    b = totals - beta * A.sum(axis=1)
    d = A.shape[0]
    slack = CONSTRAINT_SLACK * np.maximum(np.linalg.norm(A, axis=1), 1e-300)

    res = solve_bounded_lp(
        c=np.concatenate([np.ones(J), np.zeros(d)]),
        A=np.hstack([A, np.eye(d)]),
        b=b,
        lo=np.concatenate([np.zeros(J), -slack]),
        hi=np.concatenate([np.full(J, upper), slack]),
    )
    if res.status != "optimal":
        raise InfeasibleError(
            f"no weights in the box for gamma={gamma}, omega={pw.omega} "
            f"(phase-one infeasibility {res.infeasibility:.3e})",
            certificate=res.certificate,
            infeasibility=res.infeasibility,
        )
    sigma = _polish(res.x[:J], A, b, upper)
    weights = (beta + sigma) * sizes
    residual = totals - weights @ M.matrix
    return CubatureWeights(
        gamma=gamma,
        omega=float(pw.omega),
        weights=weights,
        sigma=sigma,
        residual_max=float(np.max(np.abs(residual), initial=0.0)),
        dim_E_omega=pw.dim,
    )


def verify_weights(
    g: Graph,
    sd: SpectralDecomposition,
    nf: NormalizedFunctional,
    cw: CubatureWeights,
    trials: int = 100,
    seed: int = 0,
    rtol: float = BASIS_RTOL,
) -> WeightsReport:
    """Re-check positivity, the weight interval and exactness on E_omega.

    Exactness is checked on every basis vector (tolerance ``rtol * n``) and on
    ``trials`` random unit-norm signals in E_omega (tolerance ``1e-8 * n``).
    """
    if sd.n != g.n or nf.n != g.n:
        raise ValueError("inputs live on different vertex sets")
    w = np.asarray(cw.weights, dtype=float)
    sizes = nf.partition.sizes
    failures = []
    if w.shape != sizes.shape:
        raise ValueError(f"expected {sizes.size} weights, got {w.shape}")

    positive = bool(np.all(w > 0))
    if not positive:
        failures.append(f"non-positive weight at clusters {np.flatnonzero(w <= 0).tolist()}")
    lo, hi = weight_bounds(cw.gamma, sizes)
    eps = 1e-12 * np.maximum(hi, 1.0)
    within = bool(np.all(w >= lo - eps) and np.all(w <= hi + eps))
    if not within:
        failures.append("weight outside [(1-2g)/(1-g)|S_j|, (3-2g)/(1-g)|S_j|]")

    pw = pw_basis(sd, cw.omega)
    basis_res = pw.basis.sum(axis=0) - w @ (nf.zeta @ pw.basis)
    basis_max = float(np.max(np.abs(basis_res), initial=0.0))
    basis_tol = rtol * g.n
    if basis_max > basis_tol:
        failures.append(f"exactness residual {basis_max:.3e} on the E_omega basis")

    rng = np.random.default_rng(seed)
    random_max = 0.0
    for _ in range(trials):
        f = pw.basis @ rng.standard_normal(pw.dim)
        norm = np.linalg.norm(f)
        if norm < 1e-8:
            continue
        f /= norm
        random_max = max(random_max, abs(float(f.sum() - w @ (nf.zeta @ f))))
    random_tol = RANDOM_RTOL * g.n
    if random_max > random_tol:
        failures.append(f"exactness residual {random_max:.3e} on random signals")

    return WeightsReport(
        positive=positive,
        within_bounds=within,
        basis_residual_max=basis_max,
        random_residual_max=random_max,
        basis_tolerance=basis_tol,
        random_tolerance=random_tol,
        dim_E_omega=pw.dim,
        failures=failures,
    )
