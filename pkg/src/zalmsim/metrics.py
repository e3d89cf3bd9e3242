"""Single-source channelized figures of merit."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .grid import DEFAULT_K_SIGMA, DEFAULT_POINTS, QuadratureGrid
from .source import channelize


@dataclass(frozen=True)
class PhiKernel:
    """Idler-traced kernel ``Phi(ws, ws') = int dwi/2pi Psi(ws, wi) Psi*(ws', wi)``."""

    grid: QuadratureGrid
    values: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.values)) * self.grid.weight)

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.values))


def heralding_probability(psi, n, plan, n_points=DEFAULT_POINTS, k_sigma=DEFAULT_K_SIGMA) -> float:
    """Probability the idler lands in channel ``n``, signal unfiltered."""
    return channelize(psi, n, plan, "idler_only", n_points, k_sigma).probability()


def joint_probability(psi, n, plan, n_points=DEFAULT_POINTS) -> float:
    """Probability that signal and idler both pass their channel-``n`` filters."""
    return channelize(psi, n, plan, "both", n_points).probability()


def heralding_efficiency(psi, n, plan, n_points=DEFAULT_POINTS, k_sigma=DEFAULT_K_SIGMA) -> float:
    pr_i = heralding_probability(psi, n, plan, n_points, k_sigma)
    if pr_i <= 0:
        raise DegenerateInputError(f"channel {n} has zero heralding probability")
    return joint_probability(psi, n, plan, n_points) / pr_i


def phi_kernel(amp) -> PhiKernel:
    """``M W_I M^H`` for an amplitude channelized on both sides."""
    m = amp.values
    vals = (m * amp.idler_grid.weight) @ m.conj().T
    vals = 0.5 * (vals + vals.conj().T)
    return PhiKernel(amp.signal_grid, vals)


def purity_direct(phi: PhiKernel) -> float:
    """Weighted Frobenius norm squared over weighted trace squared."""
    tr = phi.trace
    if not tr > 0:
        raise DegenerateInputError("Phi kernel has zero trace")
    w = phi.grid.weight
    frob = float(np.sum(np.abs(phi.values.ravel()) ** 2)) * w * w
    return frob / tr ** 2
