"""Entanglement-distribution rate, guard bands and inter-channel leakage."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError
from .grid import DEFAULT_POINTS, check_channel
from .source import channelize

PAIR_MODELS = ("poisson", "thermal", "off")


@dataclass(frozen=True)
class EfficiencyBudget:
    """Transmitter, propagation and receiver efficiencies plus mean pairs per pulse."""

    eta_qtx: float = 1.0
    eta_prop: float = 1.0
    eta_qrx: float = 1.0
    E_Np: float = 1.0

    def __post_init__(self):
        for name in ("eta_qtx", "eta_prop", "eta_qrx"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        if not self.E_Np > 0:
            raise ValueError("E_Np must be positive")


def channel_rate(budget: EfficiencyBudget, pr_herald: float, pr_eff: float,
                 eta_cavity: float, F_a: float, F_b: float) -> float:
    """Per-pulse entanglement-distribution rate for one herald channel."""
    b = budget
    return (b.E_Np * (b.eta_qtx * pr_herald) * (b.eta_prop ** 2 * pr_eff)
            * (b.eta_qrx ** 2 * eta_cavity) * 0.5 * (F_a + F_b))


def guard_band_channels(plan, stride: int = 1) -> list[int]:
    """Channels kept when only every ``stride``-th one is used, always including 0."""
    if stride < 1:
        raise ValueError("guard stride must be >= 1")
    return [n for n in plan.channels if n % stride == 0]


def total_rate(rates, selected_channels=None) -> float:
    """Sum of ``R_n`` over the selected channels.

    ``rates`` is a mapping ``n -> R_n`` or a sequence aligned with
    ``selected_channels``.
    """
    if hasattr(rates, "items"):
        keys = sorted(rates) if selected_channels is None else selected_channels
        return math.fsum(rates[n] for n in keys)
    return math.fsum(rates)


def cross_channel_probability(psi, m: int, n: int, plan, n_points: int = DEFAULT_POINTS) -> float:
    """``Pr(S_m, I_n)``: signal in channel ``m`` while the idler is in channel ``n``."""
    check_channel(m, plan)
    return channelize(psi, n, plan, "both", n_points, signal_channel=m).probability()


def interference_ratio(psi, n: int, k: int, plan, n_points: int = DEFAULT_POINTS) -> float:
    """``chi_k(n) = Pr(S_{n+k}, I_n) / Pr(S_n, I_n)``."""
    den = cross_channel_probability(psi, n, n, plan, n_points)
    if not den > 0:
        raise DegenerateInputError(f"channel {n} has zero joint probability")
    return cross_channel_probability(psi, n + k, n, plan, n_points) / den


def two_pair_probability(E_Np: float, model: str = "poisson") -> float:
    """Probability of exactly two pairs in one pump pulse."""
    if not E_Np > 0:
        raise ValueError("E_Np must be positive")
    if model == "poisson":
        return math.exp(-E_Np) * E_Np ** 2 / 2
    if model == "thermal":
        return E_Np ** 2 / (1 + E_Np) ** 3
    if model == "off":
        return 0.0
    raise ValueError(f"pair model must be one of {PAIR_MODELS}")
