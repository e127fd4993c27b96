"""Sphere-search machinery shared by the discord and deficit optimizers.

Objectives here are even in k (k and -k define the same projective
measurement), so the grid covers the upper hemisphere only.  Refinement runs
in a local tangent chart around the incumbent, which avoids the polar
coordinate singularity, and finishes with a few Newton steps on
finite-difference derivatives so that reported optima are sharp enough for
stationarity diagnostics.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import orth
from scipy.optimize import minimize

_GRID_CACHE: dict[tuple[int, int], np.ndarray] = {}


def sphere_grid(grid_theta: int, grid_phi: int) -> np.ndarray:
    """Upper-hemisphere direction grid, shape (M, 3), poles included."""
    key = (grid_theta, grid_phi)
    cached = _GRID_CACHE.get(key)
    if cached is not None:
        return cached
    thetas = np.linspace(0.0, 0.5 * np.pi, grid_theta + 1)
    phis = np.linspace(0.0, 2.0 * np.pi, grid_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    k = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    k.setflags(write=False)
    _GRID_CACHE[key] = k
    return k


def _tangent_basis(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0]) if abs(k[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, k)
    u /= np.linalg.norm(u)
    return u, np.cross(k, u)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _newton_polish(f, k, fk, h=2e-4, rounds=3):
    """Finite-difference Newton steps in the tangent chart; keeps only improvements."""
    for _ in range(rounds):
        u, v = _tangent_basis(k)

        def g(t1, t2):
            return f(_unit(k + t1 * u + t2 * v))

        gp0, gm0 = g(h, 0.0), g(-h, 0.0)
        g0p, g0m = g(0.0, h), g(0.0, -h)
        gpp, gmm = g(h, h), g(-h, -h)
        gpm, gmp = g(h, -h), g(-h, h)
        grad = np.array([(gp0 - gm0) / (2 * h), (g0p - g0m) / (2 * h)])
        h11 = (gp0 - 2 * fk + gm0) / h**2
        h22 = (g0p - 2 * fk + g0m) / h**2
        h12 = (gpp - gpm - gmp + gmm) / (4 * h**2)
        hess = np.array([[h11, h12], [h12, h22]])
        det = h11 * h22 - h12 * h12
        if det <= 0.0 or h11 <= 0.0:
            break
        step = -np.linalg.solve(hess, grad)
        norm = np.linalg.norm(step)
        if norm > 0.05:
            step *= 0.05 / norm
        k_new = _unit(k + step[0] * u + step[1] * v)
        f_new = f(k_new)
        if f_new <= fk + 1e-14:
            k, fk = k_new, f_new
        if norm < 1e-10:
            break
    return k, fk


def refine_on_sphere(f, k0, step, refine_tol, max_iter):
    """Two Nelder-Mead passes in tangent charts followed by Newton polish.

    Parameters
    ----------
    f : callable
        Scalar objective of a unit 3-vector.
    k0 : ndarray
        Starting direction (best grid point).
    step : float
        Initial simplex scale, typically the grid spacing.
    """
    k = _unit(np.asarray(k0, dtype=float))
    fk = f(k)
    for scale in (step, max(step / 50.0, 1e-5)):
        u, v = _tangent_basis(k)

        def g(t):
            return f(_unit(k + t[0] * u + t[1] * v))

        res = minimize(
            g,
            np.zeros(2),
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": refine_tol,
                "maxiter": max_iter,
                "maxfev": 4 * max_iter,
                "initial_simplex": [[0.0, 0.0], [scale, 0.0], [0.0, scale]],
            },
        )
        if res.fun <= fk:
            k = _unit(k + res.x[0] * u + res.x[1] * v)
            fk = float(res.fun)
    return _newton_polish(f, k, fk)


def dominant_direction(candidates: np.ndarray) -> np.ndarray:
    """Deterministic representative of a (possibly degenerate) eigenspace.

    Given column vectors spanning the tied subspace, returns the unit vector
    in their span that maximizes |k_z|, falling back to |k_x| and then
    |k_y| when the preferred axis is orthogonal to the span.
    """
    candidates = np.asarray(candidates, dtype=float)
    if candidates.ndim == 1:
        candidates = candidates[:, np.newaxis]
    basis = orth(candidates)
    for axis in (2, 0, 1):
        e = np.zeros(3)
        e[axis] = 1.0
        proj = basis @ (basis.T @ e)
        norm = np.linalg.norm(proj)
        if norm > 1e-8:
            return proj / norm
    return basis[:, 0]
