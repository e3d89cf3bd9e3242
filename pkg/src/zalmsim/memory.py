"""Mode conversion and push-pull Duan-Kimble memory loading.

Reflectivities are functions of the detuning from the memory frequency
(rad/s).  Loaded-memory fidelities are evaluated on the kernel diagonals
of the mode-converted heralded biphoton: the Bell-state amplitudes of the
loaded memories do not depend on the eigenmode index, so the eigenmode sums
collapse onto ``K^(c)(w;w)`` and ``K^(e)(w;w)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .bsm import BsmKernels
from .errors import DegenerateInputError, DomainError
from .metrics import PhiKernel

BELL_STATES = ("phi+", "phi-", "psi+", "psi-")
HERALDS = ("psi-", "psi+")
SIGNATURES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class ModeConversionParams:
    """Bandwidth compression ``beta = delta_B / delta_B_tilde`` onto the memory band."""

    delta_B_tilde: float
    beta: float
    target_center: float = 0.0
    frequency_shift: float = 0.0

    def __post_init__(self):
        if not self.beta >= 1:
            raise ValueError("compression factor beta must be >= 1")

    @classmethod
    def from_plan(cls, plan, delta_B_tilde: float, **kw) -> "ModeConversionParams":
        return cls(delta_B_tilde, plan.delta_B / delta_B_tilde, **kw)


@dataclass(frozen=True)
class MemoryParams:
    """Cavity/emitter field rates in rad/s and the interferometer delay ``T`` in s."""

    gamma: float
    kappa: float
    kappa_J: float
    g: float
    Delta_12: float
    T: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "kappa", "kappa_J", "g", "Delta_12", "T"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")

    @property
    def cooperativity(self) -> float:
        return self.g ** 2 / (self.kappa * self.gamma)

    def r1(self, detuning):
        return reflectivity(self, 1, detuning)

    def r2(self, detuning):
        return reflectivity(self, 2, detuning)

    def at_cooperativity_pi(self) -> "MemoryParams":
        """Copy with ``g`` chosen so the on-resonance reflectivities are pure imaginary."""
        _, g = cooperativity_pi(self)
        return replace(self, g=g)


@dataclass(frozen=True)
class ConstantReflectivities:
    """Frequency-independent reflectivities (narrowband or ideal operation)."""

    r1_0: complex
    r2_0: complex
    T: float = 0.0

    def r1(self, detuning):
        return np.full(np.shape(detuning), self.r1_0, dtype=complex)

    def r2(self, detuning):
        return np.full(np.shape(detuning), self.r2_0, dtype=complex)


IDEAL = ConstantReflectivities(1.0, -1.0)


class CoincidenceClass(str, Enum):
    A = "a"
    B = "b"

    @classmethod
    def of(cls, herald: str, s) -> "CoincidenceClass":
        """Type-a: psi- herald with equal detector signs, or psi+ with opposite signs."""
        if herald not in HERALDS:
            raise ValueError(f"herald must be one of {HERALDS}, got {herald!r}")
        s1, s2 = _signature(s)
        same = s1 == s2
        return cls.A if same == (herald == "psi-") else cls.B


def _signature(s):
    if isinstance(s, str):
        s = tuple(+1 if c == "+" else -1 for c in s.strip("()").replace(",", ""))
    s1, s2 = s
    if s1 not in (1, -1) or s2 not in (1, -1):
        raise ValueError(f"detector signature must be (+-1, +-1), got {s}")
    return int(s1), int(s2)


def mode_convert_phi(phi: PhiKernel, mc: ModeConversionParams) -> PhiKernel:
    """Resample ``Phi_n`` onto the compressed memory band.

    The grid shrinks by ``beta`` about the channel centre, which lands on the
    memory frequency.  Values scale by ``beta`` so the weighted trace (the
    joint passband probability) is unchanged.
    """
    grid = phi.grid.scaled(mc.beta, center=0.0)
    return PhiKernel(grid, phi.values * mc.beta)


def reflectivity(params: MemoryParams, transition: int, detuning):
    """Push-pull state-dependent field reflectivity for ground state 1 or 2."""
    if transition == 1:
        half = 0.5j * params.Delta_12
    elif transition == 2:
        half = -0.5j * params.Delta_12
    else:
        raise ValueError("transition must be 1 or 2")
    dw = np.asarray(detuning, dtype=float)
    emitter = params.gamma + half - 1j * dw
    g2 = params.g ** 2
    num = emitter * (params.kappa - params.kappa_J + 1j * dw) - g2
    den = emitter * (params.kappa + params.kappa_J - 1j * dw) + g2
    if np.any(den == 0):
        raise DomainError("reflectivity pole: unphysical parameter set")
    r = num / den
    return complex(r) if r.ndim == 0 else r


def cooperativity_pi(params: MemoryParams) -> tuple[float, float]:
    """``(C_pi, g)`` making the on-resonance reflectivities pure imaginary."""
    k, kj, gam = params.kappa, params.kappa_J, params.gamma
    if not k > kj:
        raise DomainError("C_pi requires kappa > kappa_J")
    if not gam > 0:
        raise DomainError("C_pi requires gamma > 0")
    c_pi = np.sqrt(1 + (1 - kj ** 2 / k ** 2) * params.Delta_12 ** 2 / (4 * gam ** 2)) - kj / k
    return float(c_pi), float(np.sqrt(c_pi * k * gam))


def cavity_efficiency(params) -> float:
    """Intra-cavity loss factor ``|r1(0)|^2``; 1 for ideal reflectivities."""
    return float(abs(complex(np.asarray(params.r1(0.0)))) ** 2)


def ideal_loading_fidelity(kernels: BsmKernels) -> float:
    total = kernels.trace_c + kernels.trace_e
    if not total > 0:
        raise DegenerateInputError("kernel traces vanish")
    return kernels.trace_c / total


def narrowband_fidelities(kernels: BsmKernels, r1_0: complex) -> tuple[float, float]:
    """Closed-form type-a and type-b fidelities with ``r2 = conj(r1)``, no delay."""
    a, b = kernels.trace_c, kernels.trace_e
    im2 = r1_0.imag ** 2
    re2 = r1_0.real ** 2
    num = a * im2
    den_a = a * im2 + b * (2 * re2 + im2)
    den_b = a * (2 * re2 + im2) + b * im2
    if den_a <= 0 or den_b <= 0:
        raise DegenerateInputError("no singlet component survives loading; fidelity undefined")
    return num / den_a, num / den_b


def loading_amplitudes(r1_1, r2_1, r1_2, r2_2, e1, e2, herald: str, s, eigen: str) -> dict:
    """Bell-state amplitudes of the loaded memories for one detection event.

    Arguments are reflectivities of each transition at Alice's (``_1``) and
    Bob's (``_2``) photon frequency and the delay phases ``e_k = exp(i w_k T)``.
    ``eigen`` selects the symmetric (``"mu"``, correct-herald) or antisymmetric
    (``"nu"``, error) eigenkets.  Bob's conditional pi pulse is applied for
    type-b events, so the target is always the singlet.
    """
    s1, s2 = _signature(s)
    sign = -1 if (herald == "psi-") == (eigen == "mu") else 1
    # amplitude: s2 e2 |psi'_1> + sign s1 e1 |psi'_2>; index [M1 state][M2 state]
    t1, t2 = s2 * e2, sign * s1 * e1
    a11 = t1 * r1_1 + t2 * r1_2
    a22 = t1 * r2_1 + t2 * r2_2
    a12 = t1 * r1_1 + t2 * r2_2
    a21 = t1 * r2_1 + t2 * r1_2
    if CoincidenceClass.of(herald, (s1, s2)) is CoincidenceClass.B:
        # pi pulse on Bob's memory swaps its ground states
        a11, a12, a21, a22 = a12, a11, a22, a21
    return {
        "phi+": (a11 + a22) / 4,
        "phi-": (a11 - a22) / 4,
        "psi+": (a12 + a21) / 4,
        "psi-": (a12 - a21) / 4,
    }


def loaded_state_weights(kernels: BsmKernels, params, herald: str = "psi-", s=(1, 1)) -> dict:
    """Unnormalized populations of the four memory Bell states."""
    x = kernels.grid.points
    r1 = np.asarray(params.r1(x), dtype=complex)
    r2 = np.asarray(params.r2(x), dtype=complex)
    T = getattr(params, "T", 0.0)
    e = np.exp(1j * x * T)
    r1_1, r2_1, e1 = r1[:, None], r2[:, None], e[:, None]
    r1_2, r2_2, e2 = r1[None, :], r2[None, :], e[None, :]
    mu = loading_amplitudes(r1_1, r2_1, r1_2, r2_2, e1, e2, herald, s, "mu")
    nu = loading_amplitudes(r1_1, r2_1, r1_2, r2_2, e1, e2, herald, s, "nu")
    w2 = kernels.grid.weight ** 2
    out = {}
    for X in BELL_STATES:
        dens = kernels.diag_c * np.abs(mu[X]) ** 2 + kernels.diag_e * np.abs(nu[X]) ** 2
        out[X] = float(np.sum(dens.ravel())) * w2 / 4
    return out


def broadband_fidelities(kernels: BsmKernels, params, herald: str = "psi-", s=(1, 1)) -> float:
    """Singlet fidelity of the loaded memories with frequency-dependent reflectivities.

    ``params`` is anything with ``r1(detuning)``, ``r2(detuning)`` and ``T``:
    :class:`MemoryParams` or :class:`ConstantReflectivities`.
    """
    n = loaded_state_weights(kernels, params, herald, s)
    total = sum(n.values())
    if not total > 0:
        raise DegenerateInputError("no photon survives loading; fidelity undefined")
    return n["psi-"] / total


def class_fidelities(kernels: BsmKernels, params) -> tuple[float, float]:
    """``(F_a, F_b)`` from representative type-a and type-b events."""
    return (broadband_fidelities(kernels, params, "psi-", (1, 1)),
            broadband_fidelities(kernels, params, "psi-", (1, -1)))
