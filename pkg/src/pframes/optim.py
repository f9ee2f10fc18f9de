"""Exact small-scale solvers: equality-form LP and linear assignment.

``solve_lp`` is a dense two-phase primal simplex with Bland's anti-cycling
rule.  It decides feasibility of ``K a = t, a >= 0`` and, with an objective,
optimizes over that set.  Infeasible systems come back with a Farkas
certificate ``y`` satisfying ``y^T K >= 0`` and ``y^T t < 0`` (up to the
stated tolerances); the certificate is re-validated before it is returned,
never emitted unchecked.  Determinism and exactness are preferred over speed:
the intended scale is couplings up to roughly 50 x 50.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NumericError
from .linalg import as_matrix

Array = np.ndarray

FEASIBILITY_TOL = 1e-8
PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class LinearProgram:
    """``constraint_matrix @ a == rhs`` with ``a >= 0``; objective optional."""

    constraint_matrix: Array
    rhs: Array
    objective: Array | None = None


@dataclass(frozen=True)
class LpOutcome:
    """Exactly one of ``solution`` (status feasible) or ``dual_certificate``
    (status infeasible) is set."""

    status: str
    solution: Array | None = None
    dual_certificate: Array | None = None


def _pivot(tableau: Array, basis: list[int], row: int, col: int) -> None:
    tableau[row] = tableau[row] / tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    basis[row] = col


def _iterate(tableau: Array, basis: list[int], n_allowed: int, max_iter: int) -> str:
    """Run simplex pivots (Bland's rule) until optimal or unbounded.

    The last tableau row holds reduced costs and, in its final entry, the
    negated objective value.  Only columns below ``n_allowed`` may enter.
    """
    m = tableau.shape[0] - 1
    for _ in range(max_iter):
        reduced = tableau[m, :n_allowed]
        entering = -1
        for j in range(n_allowed):
            if reduced[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tableau[:m, entering]
        rows = np.where(col > PIVOT_TOL)[0]
        if rows.size == 0:
            return "unbounded"
        ratios = tableau[rows, -1] / col[rows]
        best = ratios.min()
        # Bland tie-break: smallest basis index among minimal ratios.
        ties = rows[ratios <= best + PIVOT_TOL * (1.0 + abs(best))]
        leaving = min(ties, key=lambda i: basis[i])
        _pivot(tableau, basis, leaving, entering)
    raise NumericError("simplex iteration cap exceeded")


def solve_lp(lp: LinearProgram) -> LpOutcome:
    """Decide ``K a = t, a >= 0`` and optimize ``objective @ a`` when given.

    Returns one of the two Farkas alternatives with a verifying witness:
    either a nonnegative solution with residual below the feasibility
    tolerance, or a certificate vector proving no such solution exists.
    """
    kmat = as_matrix(lp.constraint_matrix, "constraint matrix")
    rhs = np.asarray(lp.rhs, dtype=float)
    m, n = kmat.shape
    if rhs.shape != (m,):
        raise ValueError(f"rhs must have length {m}, got shape {rhs.shape}")
    if not np.all(np.isfinite(rhs)):
        raise ValueError("rhs contains non-finite entries")
    cost = None
    if lp.objective is not None:
        cost = np.asarray(lp.objective, dtype=float)
        if cost.shape != (n,):
            raise ValueError(f"objective must have length {n}, got shape {cost.shape}")
        if not np.all(np.isfinite(cost)):
            raise ValueError("objective contains non-finite entries")

    max_iter = max(5000, 60 * (m + n))
    rhs_scale = 1.0 + float(np.abs(rhs).max())

    # Phase 1: flip rows so the right-hand side is nonnegative, add one
    # artificial per row, minimize their sum.
    flip = np.where(rhs < 0.0, -1.0, 1.0)
    a1 = kmat * flip[:, None]
    b1 = rhs * flip
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a1
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b1
    tableau[m, :n] = -a1.sum(axis=0)
    tableau[m, -1] = -b1.sum()
    basis = list(range(n, n + m))

    if _iterate(tableau, basis, n_allowed=n, max_iter=max_iter) != "optimal":
        raise NumericError("phase-1 objective unbounded (numerical breakdown)")
    phase1_value = -tableau[m, -1]

    if phase1_value > FEASIBILITY_TOL * rhs_scale:
        # Phase-1 simplex multipliers: reduced cost of artificial i is
        # 1 - y_i, so y = 1 - (reduced costs of artificial columns).
        y_flipped = 1.0 - tableau[m, n : n + m]
        cert = -(flip * y_flipped)
        peak = float(np.abs(cert).max())
        if peak <= 0.0:
            raise NumericError("degenerate Farkas certificate")
        cert = cert / peak
        if float((cert @ kmat).min()) < -FEASIBILITY_TOL or float(cert @ rhs) > -FEASIBILITY_TOL:
            raise NumericError("Farkas certificate failed re-validation")
        return LpOutcome(status="infeasible", dual_certificate=cert)

    # Drive any artificial still basic (at value ~0) out of the basis; rows
    # that cannot be pivoted are redundant and get dropped.
    redundant = []
    for i in range(m):
        if basis[i] >= n:
            pivot_col = -1
            for j in range(n):
                if abs(tableau[i, j]) > PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, i, pivot_col)
            else:
                redundant.append(i)
    if redundant:
        keep = [i for i in range(m) if i not in redundant]
        tableau = tableau[keep + [m]]
        basis = [basis[i] for i in keep]

    if cost is not None:
        rows = tableau.shape[0] - 1
        cb = cost[basis]
        tableau[rows, :n] = cost - cb @ tableau[:rows, :n]
        tableau[rows, n:] = 0.0
        tableau[rows, -1] = -(cb @ tableau[:rows, -1])
        status = _iterate(tableau, basis, n_allowed=n, max_iter=max_iter)
        if status == "unbounded":
            raise NumericError("objective is unbounded below on the feasible set")

    solution = np.zeros(n)
    for i, b in enumerate(basis):
        if b < n:
            solution[b] = tableau[i, -1]
    solution[(solution < 0.0) & (solution > -1e-10)] = 0.0
    if solution.min() < -1e-10:
        raise NumericError("simplex produced a negative basic variable")
    residual = float(np.abs(kmat @ solution - rhs).max())
    if residual > FEASIBILITY_TOL * rhs_scale:
        raise NumericError(f"simplex solution residual too large: {residual:.3e}")
    return LpOutcome(status="feasible", solution=solution)


def hungarian(cost) -> Array:
    """Minimum-cost assignment for a square cost matrix.

    Returns the permutation ``sigma`` (as an index array, ``i -> sigma[i]``)
    minimizing ``sum_i cost[i, sigma[i]]``; among all optimal assignments the
    lexicographically smallest one is returned, so ties resolve
    deterministically.
    """
    c = as_matrix(cost, "cost")
    if c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    n = c.shape[0]
    rows, cols = linear_sum_assignment(c)
    best = float(c[rows, cols].sum())
    tol = 1e-9 * (1.0 + abs(best))

    perm = np.empty(n, dtype=int)
    available = list(range(n))
    fixed_cost = 0.0
    for i in range(n):
        tail = np.arange(i + 1, n)
        for j in available:
            rest = [col for col in available if col != j]
            if tail.size:
                sub = c[np.ix_(tail, rest)]
                rr, cc = linear_sum_assignment(sub)
                completion = float(sub[rr, cc].sum())
            else:
                completion = 0.0
            if fixed_cost + c[i, j] + completion <= best + tol:
                perm[i] = j
                fixed_cost += float(c[i, j])
                available.remove(j)
                break
        else:  # pragma: no cover - optimum always extendable
            raise NumericError("assignment refinement failed to extend a partial optimum")
    return perm
