"""Quantum discord and minimum measured conditional entropies.

The discord of A given B is the gap between the measured and unmeasured
conditional entropies, minimized over projective measurements on the qubit B:

    D(A|B) = min_k S(A|B_k) - [S(rho_AB) - S(rho_B)]

It vanishes exactly on states that are invariant under measurement in some
basis and reduces to the entanglement entropy on pure states.

The generic minimization runs an exhaustive direction grid followed by local
simplex refinement.  For the quadratic entropy the minimum has a closed form:
the purity gain is a ratio of quadratic forms in k, maximized by the top
eigenvector of the pencil ``corr^T corr k = lam (I - r_b r_b^T) k``, which is
solved here through the whitened tensor ``C_N = corr (I - r_b r_b^T)^(-1/2)``
and its largest singular value.  The same singular structure defines the
correlation ellipsoid traced by the post-measurement Bloch vectors of A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._pairstate import PairContext
from ._sphere import dominant_direction, refine_on_sphere, sphere_grid
from .entropy import FAMILY_VON_NEUMANN, VON_NEUMANN, EntropyFunctional, entropy
from .measurement import MeasurementDirection
from .statekit import BipartiteLayout, DensityMatrix, bloch_decompose, partial_trace

CLOSED_FORM = "closed_form"
GRID_REFINE = "grid_refine"

#: Marginal purity threshold: below it the B marginal is effectively pure,
#: correlations vanish and every direction is optimal.
DEGENERATE_MARGINAL_TOL = 1e-9
#: Eigenvalue window treated as an exact tie when selecting the optimizer.
TIE_TOL = 1e-10
#: Singular values of the marginal metric dropped by the pseudo-inverse root.
PINV_CUTOFF = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    """Grid resolution and refinement controls for the sphere search."""

    grid_theta: int = 60
    grid_phi: int = 120
    refine_tol: float = 1e-10
    refine_max_iter: int = 200

    def __post_init__(self):
        if self.grid_theta < 8 or self.grid_phi < 8:
            raise ValueError("grids must have at least 8 points per angle")
        if self.refine_tol <= 0.0 or self.refine_max_iter <= 0:
            raise ValueError("refinement tolerance and iteration budget must be positive")


DEFAULT_SEARCH = SearchConfig()


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of a measurement optimization.

    ``residual`` is a stationarity diagnostic: for grid-refined von Neumann
    objectives it is the commutator residual of the optimality condition, for
    the closed form it is the generalized-eigenproblem defect.  It is None
    when no diagnostic is defined for the family.
    """

    value: float
    k_star: MeasurementDirection
    theta: float
    phi: float
    method: str
    residual: float | None = None
    degenerate_marginal: bool = False


@dataclass(frozen=True)
class CorrelationEllipsoid:
    """Principal structure of the post-measurement Bloch-vector ellipsoid.

    ``semi_axes`` are the singular values of the whitened correlation tensor
    in descending order.  ``axis_dirs_b`` are the corresponding orthonormal
    directions in the whitened measurement space of B, ``axis_dirs_a`` the
    orthonormal image directions in the Bloch space of A, and ``center`` the
    unmeasured Bloch vector of A.
    """

    semi_axes: np.ndarray
    axis_dirs_b: np.ndarray  # (3, 3), rows
    axis_dirs_a: np.ndarray  # (3, d_a^2 - 1), rows
    center: np.ndarray
    degenerate_marginal: bool = False


def _result(value, k_vec, method, residual=None, degenerate=False) -> OptimizationResult:
    kd = MeasurementDirection(k_vec)
    return OptimizationResult(
        value=float(value),
        k_star=kd,
        theta=kd.theta,
        phi=kd.phi,
        method=method,
        residual=residual,
        degenerate_marginal=degenerate,
    )


def _grid_refine(batch_objective, scalar_objective, cfg: SearchConfig):
    """Exhaustive hemisphere grid followed by local refinement."""
    grid = sphere_grid(cfg.grid_theta, cfg.grid_phi)
    values = batch_objective(grid)
    best = int(np.argmin(values))
    step = max(0.5 * np.pi / cfg.grid_theta, 2.0 * np.pi / cfg.grid_phi)
    k, val = refine_on_sphere(
        scalar_objective, grid[best], step, cfg.refine_tol, cfg.refine_max_iter
    )
    if values[best] < val:
        k, val = grid[best], float(values[best])
    return k, val


def conditional_entropy_min(
    rho: DensityMatrix,
    layout: BipartiteLayout,
    functional: EntropyFunctional,
    cfg: SearchConfig | None = None,
) -> OptimizationResult:
    """Minimize the measured conditional entropy over projective directions.

    For the quadratic family this agrees with :func:`quadratic_closed_form`
    up to the refinement tolerance, which is exercised by the test suite.
    """
    cfg = cfg or DEFAULT_SEARCH
    ctx = PairContext(rho, layout)
    k, val = _grid_refine(
        lambda dirs: ctx.conditional_entropy(dirs, functional),
        lambda kk: ctx.conditional_entropy_at(kk, functional),
        cfg,
    )
    residual = None
    if functional.family == FAMILY_VON_NEUMANN:
        from .deficit import stationarity_residual

        residual = stationarity_residual(rho, layout, k, functional, mode="discord")
    return _result(val, k, GRID_REFINE, residual)


def discord(
    rho: DensityMatrix,
    layout: BipartiteLayout,
    cfg: SearchConfig | None = None,
) -> OptimizationResult:
    """Quantum discord D(A|B) over projective measurements on B.

    Nonnegative by concavity; tiny negative values from floating-point noise
    (within 1e-9) are clipped to zero.
    """
    cond = conditional_entropy_min(rho, layout, VON_NEUMANN, cfg)
    rho_b = partial_trace(rho, layout, keep="B")
    baseline = entropy(rho, VON_NEUMANN) - entropy(rho_b, VON_NEUMANN)
    value = cond.value - baseline
    if value < 0.0:
        value = 0.0 if value > -1e-9 else value
    return OptimizationResult(
        value=value,
        k_star=cond.k_star,
        theta=cond.theta,
        phi=cond.phi,
        method=cond.method,
        residual=cond.residual,
    )


def _whitener(r_b: np.ndarray) -> np.ndarray:
    """Pseudo-inverse square root of I - r_b r_b^T."""
    rb2 = float(r_b @ r_b)
    eye = np.eye(3)
    if rb2 < 1e-30:
        return eye
    hat = np.outer(r_b, r_b) / rb2
    radial = 1.0 - rb2
    if radial < PINV_CUTOFF:
        return eye - hat
    return (eye - hat) + hat / np.sqrt(radial)


def quadratic_closed_form(rho: DensityMatrix, layout: BipartiteLayout) -> OptimizationResult:
    """Closed-form minimum of the quadratic conditional entropy.

    Solves ``corr^T corr k = lam (I - r_b r_b^T) k`` and returns
    ``S_2(rho_A) - 2 lam_max / d_a`` together with the optimizing direction.
    When the B marginal is pure within 1e-9 the correlation tensor vanishes,
    any direction is optimal and the result carries the degenerate flag with
    k = z by convention.
    """
    layout.require_qubit_b()
    dec = bloch_decompose(rho, layout)
    d_a = layout.d_a
    s2_a = (2.0 / d_a) * (d_a - 1.0 - float(dec.r_a @ dec.r_a))
    if 1.0 - np.linalg.norm(dec.r_b) < DEGENERATE_MARGINAL_TOL:
        return _result(s2_a, np.array([0.0, 0.0, 1.0]), CLOSED_FORM, degenerate=True)
    white = _whitener(dec.r_b)
    gram = white @ (dec.corr.T @ dec.corr) @ white
    gram = 0.5 * (gram + gram.T)
    lams, vecs = np.linalg.eigh(gram)
    lam_max = lams[-1]
    tied = lams >= lam_max - TIE_TOL
    k = dominant_direction(white @ vecs[:, tied])
    n_b = np.eye(3) - np.outer(dec.r_b, dec.r_b)
    residual = float(np.linalg.norm(dec.corr.T @ dec.corr @ k - lam_max * (n_b @ k)))
    return _result(s2_a - 2.0 * lam_max / d_a, k, CLOSED_FORM, residual)


def ellipsoid(rho: DensityMatrix, layout: BipartiteLayout) -> CorrelationEllipsoid:
    """Singular structure of the whitened correlation tensor.

    The direction returned by :func:`quadratic_closed_form` shifts the
    post-measurement Bloch vector of A along the major axis of this
    ellipsoid.
    """
    layout.require_qubit_b()
    dec = bloch_decompose(rho, layout)
    n = dec.corr.shape[0]
    if 1.0 - np.linalg.norm(dec.r_b) < DEGENERATE_MARGINAL_TOL:
        return CorrelationEllipsoid(
            semi_axes=np.zeros(3),
            axis_dirs_b=np.eye(3),
            axis_dirs_a=np.eye(n)[:3],
            center=dec.r_a.copy(),
            degenerate_marginal=True,
        )
    white = _whitener(dec.r_b)
    u, s, vt = np.linalg.svd(dec.corr @ white, full_matrices=False)
    return CorrelationEllipsoid(
        semi_axes=s,
        axis_dirs_b=vt,
        axis_dirs_a=u.T[:3],
        center=dec.r_a.copy(),
    )
