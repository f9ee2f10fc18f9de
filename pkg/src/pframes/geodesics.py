"""Wasserstein geodesics between frames and frame certification along them.

Interpolating an optimal plan through ``(x, y) -> (1-t) x + t y`` produces
the constant-speed geodesic ``mu_t`` between two measures.  Every ``mu_t``
keeps a finite second moment; whether it stays a probabilistic frame depends
on the endpoints, and this module certifies it along a parameter grid.  Two
sufficient conditions are implemented for uniform equal-cardinality frames
(the segment-rank eigenvalue test and the coherence bound forcing the
identity pairing), plus the closed-form Gaussian case where the optimal
coupling is a linear PSD map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .duality import TransportPlan
from .errors import NotAFrameError, NumericError
from .measures import DiscreteMeasure, FrameReport, GaussianMeasure, frame_report
from .transport import optimal_permutation, wasserstein2

Array = np.ndarray

# Plan entries at or below this are treated as exact zeros when collecting
# the interpolated support (the LP returns zeros only up to tolerance).
MASS_EPS = 1e-12
DEFAULT_GRID = 101
GEODESIC_IDENTITY_TOL = 1e-6


@dataclass(frozen=True)
class GeodesicProfile:
    """Frame bounds and second moments sampled along a geodesic."""

    ts: Array
    lower_bounds: Array
    upper_bounds: Array
    second_moments: Array
    all_frames: bool


@dataclass(frozen=True)
class GaussianPath:
    """Geodesic of zero-mean Gaussians: covariances conjugated by the
    interpolated optimal linear map."""

    sigma0: Array
    sigma1: Array
    optimal_map: Array
    ts: Array
    lower_bounds: Array
    upper_bounds: Array
    second_moments: Array


def _merge_atoms(atoms: Array, weights: Array) -> DiscreteMeasure:
    # Exact-duplicate merge, first-occurrence order, so endpoints reproduce
    # the original measures canonically.
    _, first, inverse = np.unique(atoms, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    merged = np.zeros(first.shape[0])
    np.add.at(merged, relabel[inverse], weights)
    return DiscreteMeasure(atoms=atoms[np.sort(first)], weights=merged)


def geodesic_measure(
    mu0: DiscreteMeasure, mu1: DiscreteMeasure, plan: TransportPlan, t: float
) -> DiscreteMeasure:
    """The measure at parameter ``t`` of the interpolation of ``plan``.

    Atoms are ``(1-t) x_i + t y_j`` over the support of the coupling; the
    caller certifies that the plan is W2-optimal (this is not re-verified).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if not (
        np.array_equal(plan.row_measure.atoms, mu0.atoms)
        and np.array_equal(plan.row_measure.weights, mu0.weights)
        and np.array_equal(plan.col_measure.atoms, mu1.atoms)
        and np.array_equal(plan.col_measure.weights, mu1.weights)
    ):
        raise ValueError("plan does not couple the given measures")
    rows, cols = np.nonzero(plan.coupling > MASS_EPS)
    atoms = (1.0 - t) * mu0.atoms[rows] + t * mu1.atoms[cols]
    weights = plan.coupling[rows, cols]
    return _merge_atoms(atoms, weights)


def geodesic_profile(
    mu0: DiscreteMeasure, mu1: DiscreteMeasure, grid_size: int = DEFAULT_GRID
) -> GeodesicProfile:
    """Frame bounds along the geodesic between two discrete frames.

    The optimal plan is computed once; each grid point then gets a frame
    report.  The constant-speed identity ``W(mu0, mu_t) + W(mu_t, mu1) =
    W(mu0, mu1)`` is verified at up to three interior grid points as a guard
    against a non-optimal plan.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    if not frame_report(mu0).is_frame:
        raise NotAFrameError("left endpoint is not a frame")
    if not frame_report(mu1).is_frame:
        raise NotAFrameError("right endpoint is not a frame")

    solution = wasserstein2(mu0, mu1)
    ts = np.linspace(0.0, 1.0, grid_size)
    reports: list[FrameReport] = []
    interpolants: list[DiscreteMeasure] = []
    for t in ts:
        mu_t = geodesic_measure(mu0, mu1, solution.plan, float(t))
        interpolants.append(mu_t)
        reports.append(frame_report(mu_t))

    base = float(np.sqrt(solution.distance_squared))
    if grid_size >= 3:
        interior = np.arange(1, grid_size - 1)
        checks = sorted({int(interior[np.argmin(np.abs(ts[interior] - tau))]) for tau in (0.25, 0.5, 0.75)})
        for idx in checks:
            left = float(np.sqrt(wasserstein2(mu0, interpolants[idx]).distance_squared))
            right = float(np.sqrt(wasserstein2(interpolants[idx], mu1).distance_squared))
            if abs(left + right - base) > GEODESIC_IDENTITY_TOL:
                raise NumericError(
                    f"geodesic additivity violated at t={ts[idx]:.4f}: "
                    f"{left} + {right} != {base}"
                )

    return GeodesicProfile(
        ts=ts,
        lower_bounds=np.array([r.lower_bound for r in reports]),
        upper_bounds=np.array([r.upper_bound for r in reports]),
        second_moments=np.array([r.second_moment for r in reports]),
        all_frames=bool(all(r.is_frame for r in reports)),
    )


def szulc_condition(phi: Array, psi_sigma: Array) -> bool:
    """Eigenvalue test certifying full rank of ``(1-t) Phi + t Psi_sigma``.

    Both analysis matrices (N x d) must have rank d.  The condition holds
    when ``pinv(Psi_sigma) @ Phi`` has no eigenvalue on the negative real
    axis; in that case the segment keeps rank d for every t in [0, 1], which
    is spot-verified on an 11-point grid.
    """
    phi = linalg.as_matrix(phi, "phi")
    psi_sigma = linalg.as_matrix(psi_sigma, "psi_sigma")
    if phi.shape != psi_sigma.shape:
        raise ValueError(f"shape mismatch: {phi.shape} vs {psi_sigma.shape}")
    d = phi.shape[1]
    if linalg.numeric_rank(phi) != d or linalg.numeric_rank(psi_sigma) != d:
        raise ValueError("both analysis matrices must have full column rank")
    ok = not linalg.has_negative_real_eigenvalue(linalg.pinv(psi_sigma) @ phi)
    if ok:
        for t in np.linspace(0.0, 1.0, 11):
            if linalg.numeric_rank((1.0 - t) * phi + t * psi_sigma) != d:
                raise NumericError(f"segment rank dropped at t={t} despite eigenvalue test")
    return ok


def coherence_identity_test(phi: Array, psi: Array) -> bool:
    """Coherence-style sufficient condition for identity optimal pairing.

    ``phi`` must be a unit-norm frame and ``psi`` a dual of it
    (``Psi^T Phi = I``).  With ``z_i = psi_i - S^{-1} phi_i`` and ``a`` the
    minimal separation ``min_{i != j} <phi_i, S^{-1}(phi_i - phi_j)>``, the
    condition is ``max_j ||z_j|| <= a / N``.  When it holds, the identity is
    an optimal pairing for squared cost, which is cross-checked by the
    assignment solver.  The test is conservative: a False answer does not
    preclude identity optimality.
    """
    phi = linalg.as_matrix(phi, "phi")
    psi = linalg.as_matrix(psi, "psi")
    if phi.shape != psi.shape:
        raise ValueError(f"shape mismatch: {phi.shape} vs {psi.shape}")
    n, d = phi.shape
    norms = np.linalg.norm(phi, axis=1)
    if float(np.abs(norms - 1.0).max()) > 1e-10:
        raise ValueError("phi atoms must be unit norm")
    if float(np.abs(psi.T @ phi - np.eye(d)).max()) > 1e-8:
        raise ValueError("psi is not a dual of phi (Psi^T Phi != I)")
    s = phi.T @ phi
    sinv_phi = linalg.solve_linear(s, phi.T).T
    z = psi - sinv_phi
    gram = phi @ sinv_phi.T  # gram[i, j] = <phi_i, S^{-1} phi_j>
    separations = gram.diagonal()[:, None] - gram
    a = float(separations[~np.eye(n, dtype=bool)].min())
    holds = bool(float(np.linalg.norm(z, axis=1).max()) <= a / n)
    if holds:
        sigma = optimal_permutation(phi, psi)
        if not np.array_equal(sigma, np.arange(n)):
            raise NumericError("coherence condition held but identity was not optimal")
    return holds


def _require_zero_mean(g: GaussianMeasure, name: str) -> None:
    if float(np.abs(g.mean).max()) > 1e-12:
        raise ValueError(f"{name} must have zero mean")


def _require_nonsingular(g: GaussianMeasure, name: str) -> None:
    w = np.linalg.eigvalsh(g.covariance)
    if w[0] <= 1e-12 * max(1.0, float(w[-1])):
        raise ValueError(f"{name} covariance is singular")


def gaussian_w2(g0: GaussianMeasure, g1: GaussianMeasure) -> float:
    """Squared 2-Wasserstein distance between zero-mean Gaussians.

    Computed in the symmetrized form ``Tr[S0 + S1 - 2 (S0^{1/2} S1
    S0^{1/2})^{1/2}]``, which agrees with the product form ``(S0 S1)^{1/2}``
    whenever the covariances commute.  Nonnegative, and zero iff the
    covariances coincide.
    """
    _require_zero_mean(g0, "g0")
    _require_zero_mean(g1, "g1")
    if g0.dim != g1.dim:
        raise ValueError(f"dimension mismatch: {g0.dim} vs {g1.dim}")
    root0 = linalg.sqrt_psd(g0.covariance)
    middle = linalg.sqrt_psd(root0 @ g1.covariance @ root0)
    value = float(np.trace(g0.covariance) + np.trace(g1.covariance) - 2.0 * np.trace(middle))
    return max(value, 0.0)


def gaussian_optimal_map(g0: GaussianMeasure, g1: GaussianMeasure) -> Array:
    """The symmetric PSD linear map pushing ``g0`` optimally onto ``g1``:
    ``A = S0^{-1/2} (S0^{1/2} S1 S0^{1/2})^{1/2} S0^{-1/2}``."""
    _require_zero_mean(g0, "g0")
    _require_zero_mean(g1, "g1")
    if g0.dim != g1.dim:
        raise ValueError(f"dimension mismatch: {g0.dim} vs {g1.dim}")
    _require_nonsingular(g0, "g0")
    _require_nonsingular(g1, "g1")
    root0 = linalg.sqrt_psd(g0.covariance)
    w, q = np.linalg.eigh(root0)
    inv_root0 = q @ np.diag(1.0 / w) @ q.T
    middle = linalg.sqrt_psd(root0 @ g1.covariance @ root0)
    amap = inv_root0 @ middle @ inv_root0
    return 0.5 * (amap + amap.T)


def gaussian_path(
    g0: GaussianMeasure, g1: GaussianMeasure, grid_size: int = DEFAULT_GRID
) -> GaussianPath:
    """Geodesic between zero-mean nonsingular Gaussians.

    The covariance at parameter ``t`` is ``M_t S0 M_t^T`` with
    ``M_t = (1-t) I + t A`` and ``A`` the optimal map; since ``A`` is
    symmetric PSD and nonsingular, every interpolated covariance stays
    positive definite, which is verified on the grid.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    amap = gaussian_optimal_map(g0, g1)
    d = g0.dim
    ts = np.linspace(0.0, 1.0, grid_size)
    lows, highs, moments = [], [], []
    for t in ts:
        mt = (1.0 - t) * np.eye(d) + t * amap
        sigma_t = mt @ g0.covariance @ mt.T
        sigma_t = 0.5 * (sigma_t + sigma_t.T)
        w = np.linalg.eigvalsh(sigma_t)
        if w[0] <= 0.0:
            raise NumericError(f"interpolated covariance lost definiteness at t={t}")
        lows.append(float(w[0]))
        highs.append(float(w[-1]))
        moments.append(float(np.trace(sigma_t)))
    return GaussianPath(
        sigma0=g0.covariance,
        sigma1=g1.covariance,
        optimal_map=amap,
        ts=ts,
        lower_bounds=np.array(lows),
        upper_bounds=np.array(highs),
        second_moments=np.array(moments),
    )


# --- CSV export -------------------------------------------------------------
# Columns: t, lambda_min, lambda_max, m2 (header row required).


def profile_csv_text(profile: GeodesicProfile | GaussianPath) -> str:
    lines = ["t,lambda_min,lambda_max,m2"]
    for t, lo, hi, m2 in zip(
        profile.ts, profile.lower_bounds, profile.upper_bounds, profile.second_moments
    ):
        lines.append(
            ",".join(format(float(v), ".17g") for v in (t, lo, hi, m2))
        )
    return "\n".join(lines) + "\n"
