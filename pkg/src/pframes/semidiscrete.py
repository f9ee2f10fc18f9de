"""Semi-discrete couplings through power (weighted Voronoi) diagrams.

An absolutely continuous reference measure is coupled to a discrete target
by partitioning space into power cells ``Vor_P^w(p) = {x : ||x-p||^2 - w(p)
<= ||x-q||^2 - w(q) for all q}`` and transporting each cell to its site.
Weights are *adapted* when every cell carries exactly its site's target
mass; they are found by ascending the concave semi-discrete dual

    F(w) = sum_p lambda_p w(p) + E[min_p(||X - p||^2 - w(p))],

whose p-th gradient component is ``lambda_p - mass_p(w)``.  Cell masses are
Monte Carlo estimates on one fixed sample set (common random numbers), so a
run is deterministic given its seed.  The resulting couplings realize
probabilistic analysis and synthesis: coefficient functions are sampled over
the reference and synthesized back by cell-indexed frame tables.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import NumericError

Array = np.ndarray

DEFAULT_SAMPLES = 200_000
ADAPT_TOL = 1e-3
MAX_ITER = 10_000
# Step schedule scale*damp/(damp + k): harmonic decay from a travel-scale
# first step; the dual is concave, so no line search is needed at this scale.
STEP_DAMP = 50.0


@dataclass(frozen=True)
class GaussianReference:
    """Standard Gaussian reference measure on R^d (d <= 3)."""

    dim: int

    def __post_init__(self):
        if not 1 <= self.dim <= 3:
            raise ValueError(f"reference dimension must be 1..3, got {self.dim}")

    def sample(self, rng: np.random.Generator, count: int) -> Array:
        return rng.standard_normal((count, self.dim))


@dataclass(frozen=True)
class BoxReference:
    """Uniform reference on an axis-aligned box (d <= 3).

    Support-restricted: unlike the Gaussian it does not cover all of R^d, so
    it is offered for analytic oracles on bounded geometry.
    """

    lower: Array
    upper: Array

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.ndim != 1 or lo.shape != hi.shape or not 1 <= lo.shape[0] <= 3:
            raise ValueError("box bounds must be matching vectors of dimension 1..3")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(hi > lo)):
            raise ValueError("box must satisfy lower < upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def sample(self, rng: np.random.Generator, count: int) -> Array:
        return rng.uniform(self.lower, self.upper, size=(count, self.dim))


Reference = GaussianReference | BoxReference


@dataclass(frozen=True)
class PowerDiagram:
    """Sites with weights over a reference measure; cells by minimal
    ``||x - p||^2 - w(p)``, ties to the lowest site index."""

    sites: Array
    weights: Array
    reference: Reference

    def __post_init__(self):
        sites = np.asarray(self.sites, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if sites.ndim != 2 or sites.shape[0] < 1:
            raise ValueError(f"sites must be a nonempty (n, d) array, got {sites.shape}")
        if weights.shape != (sites.shape[0],):
            raise ValueError("weights must have one entry per site")
        if not (np.all(np.isfinite(sites)) and np.all(np.isfinite(weights))):
            raise ValueError("sites/weights contain non-finite entries")
        if self.reference.dim != sites.shape[1]:
            raise ValueError("reference dimension does not match sites")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "weights", weights)


def assign_cells(sites: Array, weights: Array, points: Array) -> Array:
    """Cell index per point; argmin takes the lowest index on ties."""
    scores = ((points[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2) - weights[None, :]
    return np.argmin(scores, axis=1)


def voronoi_map(diagram: PowerDiagram, x) -> int:
    """Site index of the power cell containing ``x``."""
    point = np.asarray(x, dtype=float).reshape(1, -1)
    if point.shape[1] != diagram.sites.shape[1]:
        raise ValueError("point dimension does not match diagram")
    return int(assign_cells(diagram.sites, diagram.weights, point)[0])


@dataclass(frozen=True)
class SemiDiscreteCoupling:
    """Adapted power diagram plus the sample set realizing its masses.

    ``site_map`` is an index-aligned table (site i -> vector i) used by
    analysis/synthesis; it defaults to the sites themselves.
    """

    diagram: PowerDiagram
    target_weights: Array
    sample_count: int
    achieved_masses: Array
    samples: Array
    sample_cells: Array
    seed: int
    site_map: Array


@dataclass(frozen=True)
class FunctionSamples:
    """A scalar coefficient function sampled over a reference sample set."""

    values: Array
    samples: Array


def dual_objective(sites: Array, weights: Array, targets: Array, points: Array) -> float:
    """Monte Carlo estimate of the semi-discrete dual ``F(w)`` on ``points``."""
    scores = ((points[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2) - weights[None, :]
    return float(targets @ weights + scores.min(axis=1).mean())


def _validate_adapt_inputs(sites, target_weights, reference):
    sites = np.asarray(sites, dtype=float)
    targets = np.asarray(target_weights, dtype=float)
    if sites.ndim != 2 or sites.shape[0] < 1:
        raise ValueError(f"sites must be a nonempty (n, d) array, got {sites.shape}")
    if not np.all(np.isfinite(sites)):
        raise ValueError("sites contain non-finite entries")
    if np.unique(sites, axis=0).shape[0] != sites.shape[0]:
        raise ValueError("sites must be pairwise distinct")
    if targets.shape != (sites.shape[0],):
        raise ValueError("target weights must have one entry per site")
    if np.any(targets <= 0.0) or not np.all(np.isfinite(targets)):
        raise ValueError("target weights must be positive")
    total = float(targets.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"target weights must sum to 1 (got {total})")
    if reference.dim != sites.shape[1]:
        raise ValueError("reference dimension does not match sites")
    return sites, targets / total


def adapt_weights(
    sites,
    target_weights,
    reference: Reference,
    sample_count: int = DEFAULT_SAMPLES,
    *,
    seed: int = 0,
    adapt_tol: float = ADAPT_TOL,
    max_iter: int = MAX_ITER,
) -> SemiDiscreteCoupling:
    """Find power weights whose cell masses match the target weights.

    Averaged gradient ascent on the dual with a ``scale/(1 + k/damp)`` step
    schedule; one sample set is drawn up front and reused across iterations,
    and the gauge ``w[0] = 0`` is maintained (the dual is invariant under
    adding a constant to all weights).  Terminates when the max cell-mass
    error drops to ``adapt_tol``; on non-convergence a ``NumericError`` is
    raised carrying the best weights seen (``best_weights``/``best_masses``
    attributes).
    """
    sites, targets = _validate_adapt_inputs(sites, target_weights, reference)
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    n = sites.shape[0]
    rng = np.random.default_rng(seed)
    samples = reference.sample(rng, sample_count)
    sqdists = ((samples[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2)

    pairwise = ((sites[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2)
    scale = max(float(pairwise.max()), 1.0)

    def masses_at(w: Array) -> tuple[Array, Array]:
        cells = np.argmin(sqdists - w[None, :], axis=1)
        return cells, np.bincount(cells, minlength=n) / sample_count

    def finish(w: Array, cells: Array, masses: Array) -> SemiDiscreteCoupling:
        diagram = PowerDiagram(sites=sites, weights=w, reference=reference)
        return SemiDiscreteCoupling(
            diagram=diagram,
            target_weights=targets,
            sample_count=sample_count,
            achieved_masses=masses,
            samples=samples,
            sample_cells=cells,
            seed=seed,
            site_map=sites,
        )

    w = np.zeros(n)
    running_sum = np.zeros(n)
    best_err, best_w = np.inf, w.copy()
    for k in range(max_iter):
        cells, masses = masses_at(w)
        gradient = targets - masses
        err = float(np.abs(gradient).max())
        if err < best_err:
            best_err, best_w = err, w.copy()
        if err <= adapt_tol:
            return finish(w, cells, masses)
        running_sum += w
        if (k + 1) % 25 == 0:
            averaged = running_sum / (k + 1)
            averaged -= averaged[0]
            cells_a, masses_a = masses_at(averaged)
            if float(np.abs(targets - masses_a).max()) <= adapt_tol:
                return finish(averaged, cells_a, masses_a)
        w = w + (scale * STEP_DAMP / (STEP_DAMP + k)) * gradient
        w -= w[0]

    cells_b, masses_b = masses_at(best_w)
    error = NumericError(
        f"weight adaptation did not reach tolerance {adapt_tol} in {max_iter} "
        f"iterations (best max error {best_err:.3e})"
    )
    error.best_weights = best_w
    error.best_masses = masses_b
    raise error


def with_site_map(coupling: SemiDiscreteCoupling, table) -> SemiDiscreteCoupling:
    """Attach a site-indexed frame table (site i -> vector i)."""
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or table.shape[0] != coupling.diagram.sites.shape[0]:
        raise ValueError("site map must provide one vector per site")
    if not np.all(np.isfinite(table)):
        raise ValueError("site map contains non-finite entries")
    return dataclasses.replace(coupling, site_map=table)


def resample(coupling: SemiDiscreteCoupling, sample_count: int, seed: int) -> SemiDiscreteCoupling:
    """Same adapted diagram, fresh reference samples (for error studies)."""
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    samples = coupling.diagram.reference.sample(rng, sample_count)
    cells = assign_cells(coupling.diagram.sites, coupling.diagram.weights, samples)
    masses = np.bincount(cells, minlength=coupling.diagram.sites.shape[0]) / sample_count
    return dataclasses.replace(
        coupling,
        sample_count=sample_count,
        achieved_masses=masses,
        samples=samples,
        sample_cells=cells,
        seed=seed,
    )


def _require_same_samples(f: FunctionSamples, coupling: SemiDiscreteCoupling) -> None:
    if f.samples is coupling.samples:
        return
    if f.samples.shape != coupling.samples.shape or not np.array_equal(
        f.samples, coupling.samples
    ):
        raise ValueError("function samples were taken on a different sample set")


def analysis(x, coupling: SemiDiscreteCoupling) -> FunctionSamples:
    """Sampled coefficient function ``w -> <x, table[cell(w)]>``."""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (coupling.site_map.shape[1],):
        raise ValueError(f"x must be a vector of dimension {coupling.site_map.shape[1]}")
    values = coupling.site_map[coupling.sample_cells] @ vec
    return FunctionSamples(values=values, samples=coupling.samples)


def synthesis(f: FunctionSamples, coupling: SemiDiscreteCoupling) -> Array:
    """Monte Carlo synthesis ``E[f(w) * table[cell(w)]]`` over the samples."""
    if f.values.shape != (coupling.sample_count,):
        raise ValueError("function samples do not match the coupling's sample count")
    _require_same_samples(f, coupling)
    return (f.values[:, None] * coupling.site_map[coupling.sample_cells]).mean(axis=0)


def reconstruct(
    x, analysis_coupling: SemiDiscreteCoupling, synthesis_coupling: SemiDiscreteCoupling
) -> Array:
    """Synthesis applied to the analysis coefficients of ``x``."""
    return synthesis(analysis(x, analysis_coupling), synthesis_coupling)


def cell_barycenters(coupling: SemiDiscreteCoupling) -> Array:
    """Per-cell mass-weighted sample means ``(1/S) sum_{s in cell} x_s``."""
    n = coupling.diagram.sites.shape[0]
    out = np.zeros((n, coupling.samples.shape[1]))
    np.add.at(out, coupling.sample_cells, coupling.samples)
    return out / coupling.sample_count


def cross_moment(coupling: SemiDiscreteCoupling, points: Array | None = None) -> Array:
    """Monte Carlo ``E[x table[cell(x)]^T]`` for the cell-map coupling.

    With ``points`` given, evaluates on that fresh sample set instead of the
    coupling's own samples.
    """
    if points is None:
        pts, cells = coupling.samples, coupling.sample_cells
    else:
        pts = np.asarray(points, dtype=float)
        cells = assign_cells(coupling.diagram.sites, coupling.diagram.weights, pts)
    return pts.T @ coupling.site_map[cells] / pts.shape[0]


def coupling_to_payload(coupling: SemiDiscreteCoupling) -> dict:
    return {
        "sites": coupling.diagram.sites.tolist(),
        "weights": coupling.diagram.weights.tolist(),
        "targets": coupling.target_weights.tolist(),
        "achieved": coupling.achieved_masses.tolist(),
        "seed": coupling.seed,
        "samples": coupling.sample_count,
    }
