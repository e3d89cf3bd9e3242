"""Weighted singular-value (Schmidt) decomposition of channelized amplitudes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .grid import QuadratureGrid

DEFAULT_CUTOFF = 1e-8


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Singular values and mode functions on the source grids.

    ``signal_modes[l]`` and ``idler_modes[l]`` are orthonormal under the
    grids' quadrature weights, and
    ``values[i, j] ~= sum_l singular_values[l] * signal_modes[l, i] * idler_modes[l, j]``.
    """

    singular_values: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray
    signal_grid: QuadratureGrid
    idler_grid: QuadratureGrid

    def __len__(self):
        return len(self.singular_values)

    @property
    def total(self) -> float:
        """``sum lambda^2``, the joint passband probability."""
        return float(np.sum(self.singular_values ** 2))

    @property
    def normalized_values(self) -> np.ndarray:
        if len(self) == 0:
            return self.singular_values.copy()
        return self.singular_values / np.sqrt(self.total)

    def reconstruct(self) -> np.ndarray:
        return np.einsum("l,li,lj->ij", self.singular_values, self.signal_modes, self.idler_modes)


def decompose(psi, rel_cutoff: float = DEFAULT_CUTOFF) -> SchmidtDecomposition:
    """Schmidt decomposition of a sampled amplitude.

    The SVD is taken of ``D_S^1/2 M D_I^1/2`` so that the discrete singular
    values approximate the continuum ones independently of grid spacing.
    Values with ``lambda_l / lambda_1 <= rel_cutoff`` are dropped.
    """
    if not 0 <= rel_cutoff < 1:
        raise ValueError("rel_cutoff must lie in [0, 1)")
    sg, ig = psi.signal_grid, psi.idler_grid
    u, s, vh = np.linalg.svd(psi.weighted, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        keep = np.zeros(s.shape, dtype=bool)
    else:
        keep = s / s[0] > rel_cutoff
    s, u, vh = s[keep], u[:, keep], vh[keep]
    phi = u.T / np.sqrt(sg.weight)
    # M = U S V^H, so the idler factor of mode l is row l of V^H
    psi_modes = vh / np.sqrt(ig.weight)
    return SchmidtDecomposition(s, phi, psi_modes, sg, ig)


def purity_from_schmidt(d: SchmidtDecomposition) -> float:
    """``sum lambda_tilde^4``; equals 1 exactly for a separable amplitude."""
    if len(d) == 0:
        raise DegenerateInputError("empty Schmidt decomposition has no purity")
    return float(np.sum(d.normalized_values ** 4))


def schmidt_number(d: SchmidtDecomposition) -> float:
    return 1.0 / purity_from_schmidt(d)
