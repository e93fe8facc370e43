"""Two-phase bounded-variable primal simplex with Bland's pivoting rule.

Solves ``min c.x  s.t.  A x = b,  lo <= x <= hi`` for small dense problems.
Every variable must have finite bounds; nonbasic variables sit at one of
their bounds. Bland's rule (smallest eligible index enters, smallest basic
index leaves among ratio ties) makes the pivot sequence deterministic and
rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-11
COST_TOL = 1e-12


@dataclass
class LPResult:
    status: str  # "optimal" or "infeasible"
    x: np.ndarray
    objective: float
    iterations: int
    infeasibility: float = 0.0
    certificate: np.ndarray = field(default_factory=lambda: np.zeros(0))


class _Tableau:
    """Dense tableau ``T = B^{-1} [A | I_art]`` with bounded nonbasics."""

    def __init__(self, A, b, lo, hi):
        m, n = A.shape
        self.m, self.n = m, n
        self.lo = np.concatenate([lo, np.zeros(m)])
        self.hi = np.concatenate([hi, np.full(m, np.inf)])
        x = np.concatenate([lo, np.zeros(m)])
        r = b - A @ lo
        sign = np.where(r >= 0, 1.0, -1.0)
        self.A_full = np.hstack([A, np.diag(sign)])
        self.b = b
        self.x = x
        self.x[n:] = np.abs(r)
        self.basis = list(range(n, n + m))
        self.T = np.hstack([A * sign[:, None], np.eye(m)])
        self.iterations = 0

    def _reduced_costs(self, cost):
        cb = cost[self.basis]
        return cost - cb @ self.T

    def run(self, cost, max_iter):
        nvar = self.T.shape[1]
        while self.iterations < max_iter:
            d = self._reduced_costs(cost)
            basic = set(self.basis)
            enter = None
            for j in range(nvar):
                if j in basic or self.hi[j] - self.lo[j] <= 0:
                    continue
                at_upper = self.x[j] >= self.hi[j]
                if (not at_upper and d[j] < -COST_TOL) or (at_upper and d[j] > COST_TOL):
                    enter = j
                    break
            if enter is None:
                return "optimal"
            direction = -1.0 if self.x[enter] >= self.hi[enter] else 1.0
            col = self.T[:, enter] * direction
            step = self.hi[enter] - self.lo[enter]
            leave_row = None
            leave_to_upper = False
            for i in range(self.m):
                alpha = col[i]
                bi = self.basis[i]
                if alpha > PIVOT_TOL:
                    limit = (self.x[bi] - self.lo[bi]) / alpha
                    to_upper = False
                elif alpha < -PIVOT_TOL and np.isfinite(self.hi[bi]):
                    limit = (self.hi[bi] - self.x[bi]) / -alpha
                    to_upper = True
                else:
                    continue
                limit = max(limit, 0.0)
                if limit < step or (
                    limit == step and leave_row is not None and bi < self.basis[leave_row]
                ):
                    step = limit
                    leave_row = i
                    leave_to_upper = to_upper
            if not np.isfinite(step):
                return "unbounded"
            self.x[enter] += direction * step
            for i in range(self.m):
                self.x[self.basis[i]] -= col[i] * step
            self.iterations += 1
            if leave_row is None:
                # bound flip: entering variable moved across its box
                self.x[enter] = self.hi[enter] if direction > 0 else self.lo[enter]
                continue
            leaving = self.basis[leave_row]
            self.x[leaving] = self.hi[leaving] if leave_to_upper else self.lo[leaving]
            piv = self.T[leave_row, enter]
            self.T[leave_row] /= piv
            for i in range(self.m):
                if i != leave_row and self.T[i, enter] != 0.0:
                    self.T[i] -= self.T[i, enter] * self.T[leave_row]
            self.basis[leave_row] = enter
        return "iteration_limit"

    def refresh_basic_values(self):
        """Recompute basic values from the nonbasic ones to shed drift."""
        nonbasic = np.ones(self.T.shape[1], dtype=bool)
        nonbasic[self.basis] = False
        rhs = self.b - self.A_full[:, nonbasic] @ self.x[nonbasic]
        B = self.A_full[:, self.basis]
        self.x[self.basis] = np.linalg.solve(B, rhs)

    def duals(self, cost):
        B = self.A_full[:, self.basis]
        return np.linalg.solve(B.T, cost[self.basis])


def solve_bounded_lp(c, A, b, lo, hi, max_iter=10_000, feas_tol=1e-9) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b`` and ``lo <= x <= hi``.

    Phase one minimizes the sum of artificial variables. If that sum stays
    above ``feas_tol`` (scaled by ``1 + |b|_inf``) the problem is reported
    infeasible together with the phase-one dual vector ``y``, a Farkas-type
    certificate: ``y.b`` exceeds what ``y.A x`` can reach on the box.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    lo = np.asarray(lo, dtype=float).ravel()
    hi = np.asarray(hi, dtype=float).ravel()
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,) or lo.shape != (n,) or hi.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("all variable bounds must be finite")
    if np.any(lo > hi):
        raise ValueError("lower bound exceeds upper bound")

    tab = _Tableau(A, b, lo, hi)
    phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    status = tab.run(phase1, max_iter)
    if status != "optimal":
        raise RuntimeError(f"phase one stopped: {status}")
    tab.refresh_basic_values()
    art = float(np.sum(np.abs(tab.x[n:])))
    if art > feas_tol * (1.0 + float(np.max(np.abs(b), initial=0.0))):
        return LPResult(
            "infeasible", tab.x[:n].copy(), float("nan"), tab.iterations,
            infeasibility=art, certificate=tab.duals(phase1),
        )

    # Pin artificials at zero; a fixed variable never re-enters.
    tab.hi[n:] = 0.0
    tab.x[n:] = np.clip(tab.x[n:], 0.0, 0.0)
    phase2 = np.concatenate([c, np.zeros(m)])
    status = tab.run(phase2, max_iter)
    if status != "optimal":
        raise RuntimeError(f"phase two stopped: {status}")
    tab.refresh_basic_values()
    x = np.clip(tab.x[:n], lo, hi)
    return LPResult("optimal", x, float(c @ x), tab.iterations)
