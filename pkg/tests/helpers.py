"""Shared random-state generators and independent oracle evaluations.

The oracles here deliberately avoid the package's Bloch-tensor fast paths:
conditional blocks are contracted straight from the joint matrix with
explicit projectors, and quadratic entropies are evaluated through the
defining purity formula, so closed-form results are checked against a
different computational route.
"""

import numpy as np

from qcorr.statekit import BipartiteLayout, DensityMatrix, make_density


def random_density(rng, dim, rank=None) -> DensityMatrix:
    """Full-rank (or fixed-rank) state from the Ginibre ensemble."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    mat = g @ g.conj().T
    return make_density(mat / mat.trace())


def random_pure(rng, dim) -> DensityMatrix:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return make_density(np.outer(v, v.conj()))


def random_direction(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI3 = np.stack([_SX, _SY, _SZ])


def qubit_projector(k) -> np.ndarray:
    return 0.5 * (np.eye(2, dtype=complex) + k[0] * _SX + k[1] * _SY + k[2] * _SZ)


def qubit_projectors_batch(dirs) -> np.ndarray:
    dirs = np.atleast_2d(dirs)
    return 0.5 * (np.eye(2, dtype=complex) + np.einsum("mn,nij->mij", dirs, _PAULI3))


def random_semi_quantum(rng, d_a, k=None) -> tuple[DensityMatrix, np.ndarray]:
    """State of the measured form sum_s p_s rho_s (x) P_sk, plus its pointer axis."""
    if k is None:
        k = random_direction(rng)
    p = rng.uniform(0.2, 0.8)
    parts = p * np.kron(random_density(rng, d_a).entries, qubit_projector(k))
    parts = parts + (1 - p) * np.kron(random_density(rng, d_a).entries, qubit_projector(-k))
    return make_density(parts), k


def random_rank_one_povm(rng, n_elements=3):
    """Random completeness-respecting rank-one POVM weights and directions."""
    while True:
        q = rng.uniform(0.3, 1.2, size=n_elements - 1)
        dirs = np.array([random_direction(rng) for _ in range(n_elements - 1)])
        resid = -(q[:, None] * dirs).sum(axis=0)
        norm = np.linalg.norm(resid)
        if norm > 1e-3:
            break
    q = np.append(q, norm)
    dirs = np.vstack([dirs, resid / norm])
    q *= 2.0 / q.sum()
    return q, dirs


def pinched_blocks(rho: DensityMatrix, layout: BipartiteLayout, dirs: np.ndarray):
    """A-side blocks Tr_B[rho (I x P_k)] for a batch of directions.

    Contracted directly from the joint matrix with explicit projectors; used
    as the independent route for oracle grids.
    """
    d_a = layout.d_a
    four = rho.entries.reshape(d_a, 2, d_a, 2)
    projs = qubit_projectors_batch(dirs)
    plus = np.einsum("aibj,mji->mab", four, projs)
    minus = np.einsum("aibj,mji->mab", four, np.eye(2) - projs)
    return plus, minus


def oracle_quadratic_conditional(rho, layout, dirs):
    """S_2 conditional entropy from the defining purity formula, batched."""
    plus, minus = pinched_blocks(rho, layout, dirs)
    out = np.zeros(len(plus))
    for blocks in (plus, minus):
        p = np.einsum("maa->m", blocks).real
        pur = np.einsum("mab,mba->m", blocks, blocks).real
        good = p > 1e-14
        out[good] += 2.0 * (p[good] - pur[good] / p[good])
    return out


def oracle_quadratic_deficit(rho, layout, dirs):
    """2 (Tr rho^2 - Tr rho'^2) from block purities, batched."""
    plus, minus = pinched_blocks(rho, layout, dirs)
    pur_after = (
        np.einsum("mab,mba->m", plus, plus).real + np.einsum("mab,mba->m", minus, minus).real
    )
    pur_before = np.vdot(rho.entries, rho.entries).real
    return 2.0 * (pur_before - pur_after)


def degree_grid(theta_step=1, phi_step=1) -> np.ndarray:
    """Upper-hemisphere grid in whole degrees."""
    thetas = np.deg2rad(np.arange(0, 91, theta_step, dtype=float))
    phis = np.deg2rad(np.arange(0, 360, phi_step, dtype=float))
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)


_STENCIL = np.array(
    [(du, dv) for du in (-1.0, 0.0, 1.0) for dv in (-1.0, 0.0, 1.0) if (du, dv) != (0.0, 0.0)]
)


def local_zoom(f_batch, k0, v0, step0=np.deg2rad(1.0), rounds=40):
    """Pattern-search refinement of a batched objective on the sphere.

    ``f_batch`` maps an (M, 3) array of directions to (M,) values.  Steps
    live in the local tangent plane, so convergence does not degrade near
    the poles of the spherical parameterization.
    """
    k0 = np.asarray(k0, dtype=float)
    step = step0
    for _ in range(rounds):
        ref = np.array([0.0, 0.0, 1.0]) if abs(k0[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        u = np.cross(ref, k0)
        u /= np.linalg.norm(u)
        v = np.cross(k0, u)
        cands = k0 + step * (_STENCIL[:, :1] * u + _STENCIL[:, 1:] * v)
        cands /= np.linalg.norm(cands, axis=1, keepdims=True)
        vals = np.asarray(f_batch(cands))
        best = int(np.argmin(vals))
        if vals[best] < v0 - 1e-16:
            k0, v0 = cands[best], float(vals[best])
        else:
            step /= 2.5
            if step < 1e-9:
                break
    return k0, v0


def majorizes(lams_big, lams_small, tol=1e-10) -> bool:
    """True if the first spectrum majorizes the second."""
    a = np.sort(np.asarray(lams_big))[::-1]
    b = np.sort(np.asarray(lams_small))[::-1]
    return bool(np.all(np.cumsum(b) <= np.cumsum(a) + tol))
