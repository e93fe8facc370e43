"""Symmetric eigendecomposition and bandlimited (Paley-Wiener) subspaces."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from graph_cubature import kernels
from graph_cubature.graph import Graph, as_signal, build_laplacian, gradient_norm, l2_norm

MAX_SWEEPS = 30
OFF_DIAGONAL_RTOL = 1e-12
DEGENERATE_RTOL = 1e-9
ZERO_RTOL = 1e-8
PW_SLACK = 1e-12


class EigenConvergenceError(RuntimeError):
    """The Jacobi iteration did not meet its tolerance within budget."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class BandwidthError(ValueError):
    """Bandwidth out of range, or a signal outside the requested E_omega."""


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: str
    residual: float
    orthogonality: float
    sweeps: int
    scale: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def zero_multiplicity(self) -> int:
        """Eigenvalues below ``1e-8 * ||L||_max``; equals the component count."""
        return int(np.sum(self.eigenvalues <= ZERO_RTOL * self.scale))

    def report(self, include_vectors=False) -> dict:
        out = {
            "eigenvalues": self.eigenvalues.tolist(),
            "zero_multiplicity": self.zero_multiplicity,
            "residual": self.residual,
        }
        if include_vectors:
            out["eigenvectors"] = self.eigenvectors.tolist()
        return out


@dataclass(frozen=True)
class PaleyWienerBasis:
    omega: float
    indices: tuple[int, ...]
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)


def _freeze(a):
    a.setflags(write=False)
    return a


def _normalize_signs(vecs):
    # Positive sum, or positive largest entry when the sum is ~0.
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        total = col.sum()
        if abs(total) > 1e-10:
            flip = total < 0
        else:
            flip = col[np.argmax(np.abs(col))] < 0
        if flip:
            vecs[:, k] = -col


def eigendecompose(lap, max_sweeps=MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Eigenvalues are returned in ascending order. Columns inside a numerically
    degenerate group are re-orthonormalized by QR, and every column is
    sign-normalized, so the output is a deterministic function of the input.

    Raises:
        ValueError: the matrix is not square or not symmetric.
        EigenConvergenceError: the sweep budget ran out, or the result fails
            the residual/orthogonality invariants.
    """
    lap = np.asarray(lap, dtype=float)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lap.shape}")
    n = lap.shape[0]
    scale = float(np.max(np.abs(lap))) if n else 0.0
    if np.max(np.abs(lap - lap.T), initial=0.0) > 1e-12 * max(scale, 1e-300):
        raise ValueError("matrix is not symmetric")

    a = np.ascontiguousarray(0.5 * (lap + lap.T))
    v = np.eye(n)
    fro = float(np.linalg.norm(a))
    sweeps, off = kernels.jacobi_diagonalize(a, v, OFF_DIAGONAL_RTOL * fro, max_sweeps)
    if off > OFF_DIAGONAL_RTOL * fro:
        raise EigenConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})",
            off,
        )

    diag = np.diag(a).copy()
    order = np.argsort(diag, kind="stable")
    vals = diag[order]
    vecs = np.ascontiguousarray(v[:, order])

    gap = DEGENERATE_RTOL * max(scale, 1e-300)
    start = 0
    for k in range(1, n + 1):
        if k == n or vals[k] - vals[k - 1] >= gap:
            if k - start > 1:
                q, _ = np.linalg.qr(vecs[:, start:k])
                vecs[:, start:k] = q
            start = k
    _normalize_signs(vecs)

    residual = float(np.max(np.abs(lap @ vecs - vecs * vals), initial=0.0))
    ortho = float(np.max(np.abs(vecs.T @ vecs - np.eye(n)), initial=0.0))
    if ortho > 1e-8 or residual > 1e-8 * max(scale, 1e-300):
        raise EigenConvergenceError(
            f"decomposition failed invariants (residual {residual:.3e}, "
            f"orthogonality {ortho:.3e})",
            residual,
        )
    source = hashlib.sha256(np.ascontiguousarray(lap).tobytes()).hexdigest()
    return SpectralDecomposition(
        eigenvalues=_freeze(vals),
        eigenvectors=_freeze(vecs),
        source=source,
        residual=residual,
        orthogonality=ortho,
        sweeps=int(sweeps),
        scale=scale,
    )


def graph_spectrum(g: Graph) -> SpectralDecomposition:
    return eigendecompose(build_laplacian(g))


def pw_basis(sd: SpectralDecomposition, omega: float) -> PaleyWienerBasis:
    """Eigenvectors with eigenvalue at most ``omega`` (absolute slack 1e-12)."""
    omega = float(omega)
    if not omega >= 0 or not math.isfinite(omega):
        raise BandwidthError(f"omega must be finite and >= 0, got {omega}")
    count = int(np.searchsorted(sd.eigenvalues, omega + PW_SLACK, side="right"))
    basis = _freeze(np.ascontiguousarray(sd.eigenvectors[:, :count]))
    return PaleyWienerBasis(omega, tuple(range(count)), basis)


def project_pw(sd: SpectralDecomposition, omega: float, f) -> np.ndarray:
    """Orthogonal projection of ``f`` onto E_omega."""
    f = np.asarray(f, dtype=float)
    if f.shape != (sd.n,):
        raise ValueError(f"signal length {f.shape} does not match n={sd.n}")
    b = pw_basis(sd, omega).basis
    return b @ (b.T @ f)


def laplacian_power(sd: SpectralDecomposition, f, t: float) -> np.ndarray:
    """``L**t f`` through the spectral calculus; eigenvalues at round-off level count as 0."""
    lam = np.where(sd.eigenvalues <= ZERO_RTOL * sd.scale, 0.0, sd.eigenvalues)
    lam = np.maximum(lam, 0.0)
    phi = sd.eigenvectors
    return phi @ (lam**t * (phi.T @ f))


def bernstein_check(g: Graph, sd: SpectralDecomposition, omega, f, t) -> tuple[bool, float]:
    """Check ``||L^t f|| <= omega^t ||f||`` for ``f`` in E_omega.

    Returns ``(holds, margin)`` with ``margin = omega^t ||f|| - ||L^t f||``.
    """
    f = as_signal(g, f)
    if sd.n != g.n:
        raise ValueError("decomposition does not match the graph")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if not omega >= 0:
        raise BandwidthError(f"omega must be >= 0, got {omega}")
    norm = l2_norm(f)
    if l2_norm(f - project_pw(sd, omega, f)) > 1e-8 * max(norm, 1.0):
        raise BandwidthError(f"signal is not bandlimited to omega={omega}")
    lhs = l2_norm(laplacian_power(sd, f, t))
    rhs = float(omega) ** t * norm
    margin = rhs - lhs
    return margin >= -1e-9 * max(rhs, lhs, 1e-3), margin


def in_X_tau(g: Graph, f, tau: float, rtol: float = 1e-10) -> bool:
    """``||grad f|| <= sqrt(tau) ||f||``, with a relative round-off allowance.

    The allowance has a floor of ``rtol * sqrt(d_max) ||f||`` (``d_max`` the
    largest weighted degree), so constants pass at ``tau = 0``.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    f = as_signal(g, f)
    lhs = gradient_norm(g, f)
    norm = l2_norm(f)
    d_max = float(np.max(g.weights.sum(axis=1)))
    return lhs <= math.sqrt(tau) * norm * (1.0 + rtol) + rtol * math.sqrt(d_max) * norm + 1e-300
