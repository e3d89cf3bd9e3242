"""Uniform midpoint-rule frequency grids.

All frequencies are angular detunings (rad/s) from a declared reference
(the signal/idler centre frequencies, or the memory frequency after mode
conversion).  Integration weights carry the ``1/2pi`` of the ``d omega / 2pi``
measure, so a weighted sum of a probability density is a probability.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ChannelRangeError, ShapeError

TWO_PI = 2.0 * np.pi

DEFAULT_POINTS = 257
DEFAULT_K_SIGMA = 16.0


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint grid of ``n_points`` cells covering ``center +- half_width``."""

    center: float
    half_width: float
    n_points: int

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 1:
            raise ValueError(f"n_points must be a positive integer, got {self.n_points}")
        if not self.half_width >= 0.0:
            raise ValueError(f"half_width must be >= 0, got {self.half_width}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def weight(self) -> float:
        """Per-point weight, ``spacing / 2pi``."""
        return self.spacing / TWO_PI

    @cached_property
    def points(self) -> np.ndarray:
        h = self.spacing
        pts = self.center - self.half_width + h * (np.arange(self.n_points) + 0.5)
        pts.setflags(write=False)
        return pts

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n_points, self.weight)

    @property
    def lower(self) -> float:
        return self.center - self.half_width

    @property
    def upper(self) -> float:
        return self.center + self.half_width

    def refined(self, factor: int = 2) -> "QuadratureGrid":
        return QuadratureGrid(self.center, self.half_width, self.n_points * factor)

    def scaled(self, beta: float, center: float = 0.0) -> "QuadratureGrid":
        """Grid compressed about its centre by ``beta`` and re-centred at ``center``."""
        return QuadratureGrid(center, self.half_width / beta, self.n_points)


def channel_bounds(plan) -> int:
    return (plan.N - 1) // 2


def check_channel(n: int, plan) -> None:
    nmax = channel_bounds(plan)
    if abs(n) > nmax:
        raise ChannelRangeError(f"channel {n} outside [-{nmax}, {nmax}] for N={plan.N}")


def channel_center(n: int, plan, side: str) -> float:
    """Detuning of the channel-``n`` passband centre.

    Signal channels step down in frequency and idler channels step up, so
    channel ``n`` pairs energy-conserving signal and idler photons.
    """
    offset = TWO_PI * n * plan.Delta_B
    if side == "signal":
        return -offset
    if side == "idler":
        return offset
    raise ValueError(f"side must be 'signal' or 'idler', got {side!r}")


def channel_grid(channel_index: int, plan, side: str, n_points: int = DEFAULT_POINTS) -> QuadratureGrid:
    """Grid spanning exactly the brickwall passband of one DWDM channel."""
    check_channel(channel_index, plan)
    if n_points < 2:
        raise ValueError("a channel grid needs at least 2 points")
    return QuadratureGrid(channel_center(channel_index, plan, side), np.pi * plan.delta_B, n_points)


def signal_window(idler_grid: QuadratureGrid, source, k_sigma: float = DEFAULT_K_SIGMA,
                  n_points: int | None = None) -> QuadratureGrid:
    """Signal band where the pump envelope is non-negligible for the given idler band.

    The window is the energy-conserving image of the idler band, widened by
    ``k_sigma / sigma_P`` on each side.  When ``n_points`` is omitted the
    window uses the idler grid's spacing.
    """
    if not k_sigma > 0:
        raise ValueError("k_sigma must be positive")
    pad = k_sigma / source.sigma_P
    lo = -idler_grid.upper - pad
    hi = -idler_grid.lower + pad
    if n_points is None:
        h = idler_grid.spacing
        n_points = DEFAULT_POINTS if h == 0 else int(np.ceil((hi - lo) / h))
    return QuadratureGrid(0.5 * (lo + hi), 0.5 * (hi - lo), n_points)


def integrate_2d(amplitude, integrand=None) -> complex:
    """Weighted double sum ``sum_ij wS_i wI_j f(M_ij)``.

    ``integrand`` maps the sample matrix elementwise; it defaults to the
    identity.  numpy's pairwise summation keeps the result independent of
    how the caller built the matrix.
    """
    values = np.asarray(amplitude.values)
    shape = (amplitude.signal_grid.n_points, amplitude.idler_grid.n_points)
    if values.shape != shape:
        raise ShapeError(f"matrix shape {values.shape} does not match grids {shape}")
    f = values if integrand is None else integrand(values)
    total = np.sum(f.ravel())
    return complex(total) * amplitude.signal_grid.weight * amplitude.idler_grid.weight
