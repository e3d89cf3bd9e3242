"""Partial Bell-state-measurement figures of merit.

Everything here derives from the single-source kernel ``Phi_n`` or its
Schmidt decomposition.  The four-index kernels ``K^(c)`` and ``K^(e)`` are
never materialized; only their diagonals (``n_S x n_S``) and traces are.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .metrics import PhiKernel
from .schmidt import SchmidtDecomposition
from .grid import QuadratureGrid


def bsm_herald_probability(pr_In: float) -> float:
    """Normalized probability of a psi-minus (or psi-plus) herald in one channel."""
    if not 0 <= pr_In <= 1:
        raise ValueError("pr_In must lie in [0, 1]")
    return pr_In ** 2 / 4


def bsm_heralding_efficiency(pr_SnIn: float, pr_In: float) -> float:
    if not pr_In > 0:
        raise DegenerateInputError("zero heralding probability")
    if pr_SnIn > pr_In * (1 + 1e-12):
        raise ValueError("joint probability cannot exceed heralding probability")
    return (pr_SnIn / pr_In) ** 2


def bsm_purity(single_purity: float) -> float:
    if not 0 < single_purity <= 1 + 1e-12:
        raise ValueError("single-source purity must lie in (0, 1]")
    return single_purity ** 2


def bsm_fidelity_and_error(purity: float) -> tuple[float, float]:
    """``(Pr(c), Pr(e))`` from the heralded-biphoton purity."""
    if not 0 <= purity <= 1 + 1e-12:
        raise ValueError("purity must lie in [0, 1]")
    root = np.sqrt(min(purity, 1.0))
    pr_e = (1 - root) / 2
    return 1.0 - pr_e, pr_e


@dataclass(frozen=True)
class BsmKernels:
    """Diagonals ``K^(c)(w;w)``, ``K^(e)(w;w)`` on the signal grid squared, and their traces."""

    grid: QuadratureGrid
    diag_c: np.ndarray
    diag_e: np.ndarray
    trace_c: float
    trace_e: float

    @property
    def fidelity(self) -> float:
        total = self.trace_c + self.trace_e
        if not total > 0:
            raise DegenerateInputError("kernel traces vanish")
        return self.trace_c / total


def bsm_kernels(phi: PhiKernel) -> BsmKernels:
    """Correct/error kernel diagonals from ``Phi_n``.

    ``K^(c,e)(w1,w2;w1,w2) = Phi(w1,w1) Phi(w2,w2) +- |Phi(w1,w2)|^2``.
    """
    d = phi.diagonal
    first = np.outer(d, d)
    second = np.abs(phi.values) ** 2
    w2 = phi.grid.weight ** 2
    # traces via sums of the two terms: (sum w Phi_ii)^2 and sum w^2 |Phi_ij|^2
    t1 = float(np.sum(d) * phi.grid.weight) ** 2
    t2 = float(np.sum(second.ravel()) * w2)
    return BsmKernels(phi.grid, first + second, first - second, t1 + t2, t1 - t2)


@dataclass(frozen=True)
class KernelEigensystem:
    """Eigenvalues of ``K^(c)``/``K^(e)`` indexed by Schmidt-mode pairs.

    ``mu_pairs[k] = (m1, m2)`` with ``m1 >= m2``; ``nu_pairs`` has ``m1 > m2``.
    Eigenfunctions are symmetrized (``xi``) and antisymmetrized (``zeta``)
    products of the Schmidt signal modes.
    """

    mu: np.ndarray
    nu: np.ndarray
    mu_pairs: np.ndarray
    nu_pairs: np.ndarray
    schmidt: SchmidtDecomposition

    @property
    def grid(self) -> QuadratureGrid:
        return self.schmidt.signal_grid

    @property
    def total(self) -> float:
        return float(np.sum(self.mu) + np.sum(self.nu))

    @property
    def mu_normalized(self) -> np.ndarray:
        return self.mu / self.total

    @property
    def nu_normalized(self) -> np.ndarray:
        return self.nu / self.total

    def fidelity(self) -> float:
        return float(np.sum(self.mu)) / self.total

    def purity(self) -> float:
        return float(np.sum(self.mu_normalized ** 2) + np.sum(self.nu_normalized ** 2))

    def xi(self, k: int) -> np.ndarray:
        """``xi`` eigenfunction ``k`` sampled on the signal grid squared."""
        m1, m2 = self.mu_pairs[k]
        phi = self.schmidt.signal_modes
        a = np.outer(phi[m1], phi[m2])
        if m1 == m2:
            return a
        return (a + a.T) / np.sqrt(2)

    def zeta(self, k: int) -> np.ndarray:
        m1, m2 = self.nu_pairs[k]
        phi = self.schmidt.signal_modes
        a = np.outer(phi[m1], phi[m2])
        return (a - a.T) / np.sqrt(2)

    def diagonals(self, mass: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
        """Kernel diagonals rebuilt from the leading eigenmodes.

        Modes are taken in descending eigenvalue order until the discarded
        eigenvalue mass is below ``mass`` of the total.
        """
        dc = np.zeros((self.grid.n_points,) * 2)
        de = np.zeros_like(dc)
        vals = np.concatenate([self.mu, self.nu])
        kind = np.concatenate([np.zeros(len(self.mu), int), np.ones(len(self.nu), int)])
        idx = np.concatenate([np.arange(len(self.mu)), np.arange(len(self.nu))])
        order = np.argsort(-vals, kind="stable")
        remaining = self.total
        for o in order:
            if remaining <= mass * self.total:
                break
            if kind[o] == 0:
                dc += self.mu[idx[o]] * np.abs(self.xi(idx[o])) ** 2
            else:
                de += self.nu[idx[o]] * np.abs(self.zeta(idx[o])) ** 2
            remaining -= vals[o]
        return dc, de


def kernel_eigensystem(d: SchmidtDecomposition) -> KernelEigensystem:
    lam2 = d.singular_values ** 2
    L = len(lam2)
    m1, m2 = np.tril_indices(L, k=-1)
    diag = np.arange(L)
    mu = np.concatenate([2 * lam2 ** 2, 2 * lam2[m1] * lam2[m2]])
    mu_pairs = np.concatenate([np.stack([diag, diag], 1), np.stack([m1, m2], 1)]).reshape(-1, 2)
    nu = 2 * lam2[m1] * lam2[m2]
    nu_pairs = np.stack([m1, m2], 1).reshape(-1, 2)
    return KernelEigensystem(mu, nu, mu_pairs, nu_pairs, d)
