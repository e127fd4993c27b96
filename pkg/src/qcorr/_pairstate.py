"""Vectorized measurement surfaces for a fixed qudit-qubit state.

For a projective measurement along k the joint post-measurement state is
block diagonal in the measured basis with A-side blocks
``M_s(k) = Tr_B[rho (I x P_sk)] = (rho_a + s * sum_n k_n T_n) / 2`` where
``T_n = Tr_B[rho (I x sigma_n)]``.  Everything the optimizers need, the
conditional entropy ``sum_s p_s S_f(M_s / p_s)`` and the measured joint
entropy ``S_f(M_+ (+) M_-)``, follows from batched eigenvalues of these
blocks, which keeps full-grid scans cheap.
"""

from __future__ import annotations

import numpy as np

from .entropy import EntropyFunctional, spectrum_entropy
from .measurement import PROB_FLOOR
from .statekit import PAULI, BipartiteLayout, DensityMatrix, bloch_decompose

_2D = np.newaxis


class PairContext:
    """Precomputed tensors of one state, reused across many directions."""

    def __init__(self, rho: DensityMatrix, layout: BipartiteLayout):
        layout.check(rho)
        layout.require_qubit_b()
        self.layout = layout
        self.d_a = layout.d_a
        self.rho = rho
        four = rho.entries.reshape(layout.d_a, 2, layout.d_a, 2)
        self.rho_a = np.einsum("aibi->ab", four)
        self.rho_b = np.einsum("aiaj->ij", four)
        self.t_ops = np.einsum("aibj,nji->nab", four, PAULI)
        self.r_b = np.einsum("ij,nji->n", self.rho_b, PAULI).real
        self.joint_spectrum = np.linalg.eigvalsh(rho.entries)
        self._dec = None

    @property
    def decomposition(self):
        if self._dec is None:
            self._dec = bloch_decompose(self.rho, self.layout)
        return self._dec

    def measured_blocks(self, dirs: np.ndarray):
        """Branch probabilities (M, 2) and raw blocks (M, 2, d_a, d_a)."""
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        delta = np.einsum("mn,nab->mab", dirs, self.t_ops)
        plus = 0.5 * (self.rho_a[_2D] + delta)
        minus = 0.5 * (self.rho_a[_2D] - delta)
        blocks = np.stack([plus, minus], axis=1)
        overlap = dirs @ self.r_b
        probs = 0.5 * np.stack([1.0 + overlap, 1.0 - overlap], axis=1)
        return probs, blocks

    def conditional_entropy(self, dirs: np.ndarray, functional: EntropyFunctional) -> np.ndarray:
        """sum_s p_s S_f(rho_A|s) for each direction; shape (M,)."""
        probs, blocks = self.measured_blocks(dirs)
        lams = np.linalg.eigvalsh(blocks)
        safe = np.where(probs > PROB_FLOOR, probs, 1.0)
        cond = lams / safe[..., _2D]
        s_branch = spectrum_entropy(cond, functional)
        return (np.where(probs > PROB_FLOOR, probs, 0.0) * s_branch).sum(axis=1)

    def measured_joint_entropy(self, dirs: np.ndarray, functional: EntropyFunctional) -> np.ndarray:
        """S_f of the pinched joint state, from the combined block spectra."""
        _, blocks = self.measured_blocks(dirs)
        lams = np.linalg.eigvalsh(blocks).reshape(len(blocks), 2 * self.d_a)
        return spectrum_entropy(lams, functional)

    def conditional_entropy_at(self, k: np.ndarray, functional: EntropyFunctional) -> float:
        return float(self.conditional_entropy(k[_2D], functional)[0])

    def measured_joint_entropy_at(self, k: np.ndarray, functional: EntropyFunctional) -> float:
        return float(self.measured_joint_entropy(k[_2D], functional)[0])

    def measured_power_trace(self, k: np.ndarray, q: float) -> float:
        """Tr[rho'(k)^q] from the block spectra."""
        _, blocks = self.measured_blocks(k[_2D])
        lams = np.clip(np.linalg.eigvalsh(blocks), 0.0, None)
        return float((lams**q).sum())
