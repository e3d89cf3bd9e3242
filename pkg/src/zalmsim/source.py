"""SPDC biphoton wave functions and DWDM channelization.

A :class:`Biphoton` is a lazily evaluated joint spectral amplitude: it is
only ever sampled on the small grids a computation asks for, never on a
global dense grid over the whole phase-matching band.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NormalizationError, ShapeError
from .grid import (DEFAULT_K_SIGMA, DEFAULT_POINTS, TWO_PI, QuadratureGrid,
                   channel_grid, check_channel, signal_window)


@dataclass(frozen=True)
class SourceParams:
    """Pump duration ``sigma_P`` (s) and phase-matching bandwidth ``omega_PM`` (rad/s).

    The centre frequencies are bookkeeping only; everything is computed in
    detunings from them.
    """

    sigma_P: float
    omega_PM: float
    signal_center: float = 0.0
    idler_center: float = 0.0

    def __post_init__(self):
        if not self.sigma_P > 0:
            raise ValueError("sigma_P must be positive")
        if not self.omega_PM > 0:
            raise ValueError("omega_PM must be positive")

    @property
    def pump_center(self) -> float:
        return self.signal_center + self.idler_center


@dataclass(frozen=True)
class ChannelPlan:
    """Brickwall DWDM plan: bandwidth ``delta_B`` and spacing ``Delta_B`` in Hz."""

    delta_B: float
    Delta_B: float
    N: int

    def __post_init__(self):
        if not self.delta_B > 0:
            raise ValueError("delta_B must be positive")
        if not self.Delta_B > self.delta_B:
            raise ValueError("channel spacing must exceed channel bandwidth (guard bands)")
        if int(self.N) != self.N or self.N < 1 or self.N % 2 == 0:
            raise ValueError(f"N must be a positive odd integer, got {self.N}")

    @property
    def channels(self) -> list[int]:
        nmax = (self.N - 1) // 2
        return list(range(-nmax, nmax + 1))


@dataclass(frozen=True)
class SpectralAmplitude2D:
    """Biphoton amplitude sampled on a signal x idler grid pair."""

    signal_grid: QuadratureGrid
    idler_grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        shape = (self.signal_grid.n_points, self.idler_grid.n_points)
        if np.shape(self.values) != shape:
            raise ShapeError(f"values shape {np.shape(self.values)} does not match grids {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("amplitude contains non-finite entries")

    @property
    def weighted(self) -> np.ndarray:
        """``D_S^1/2 M D_I^1/2``, the matrix whose SVD gives the Schmidt weights."""
        return np.sqrt(self.signal_grid.weight * self.idler_grid.weight) * self.values

    def probability(self) -> float:
        w = self.signal_grid.weight * self.idler_grid.weight
        return float(np.sum(np.abs(self.values.ravel()) ** 2) * w)


def gaussian_amplitude(params: SourceParams, ds, di):
    """All-Gaussian amplitude at detunings ``ds`` (signal) and ``di`` (idler)."""
    sig, om = params.sigma_P, params.omega_PM
    pref = np.sqrt(8 * np.pi * sig / om)
    return pref * np.exp(-((ds + di) * sig) ** 2 / 16 - 4 * ((ds - di) / om) ** 2)


class Biphoton:
    """Lazily sampled joint spectral amplitude.

    ``amplitude(ds, di)`` must broadcast over numpy arrays of signal and
    idler detunings.  ``params`` supplies the pump and phase-matching scales
    used for the signal window and for numerical normalization.
    """

    def __init__(self, amplitude: Callable, params: SourceParams, label: str = "generic"):
        self._amplitude = amplitude
        self.params = params
        self.label = label

    def __repr__(self):
        return f"Biphoton({self.label}, {self.params})"

    @classmethod
    def gaussian(cls, params: SourceParams) -> "Biphoton":
        return cls(lambda ds, di: gaussian_amplitude(params, ds, di), params, "gaussian")

    @classmethod
    def from_spectra(cls, pump: Callable, phase_match: Callable, params: SourceParams,
                     k_sigma: float = DEFAULT_K_SIGMA, n_ref: int = 1024) -> "Biphoton":
        """Pump envelope (of the summed detuning) times phase matching, renormalized.

        The norm is integrated on a rotated reference grid spanning
        ``+-k_sigma/sigma_P`` along the pump direction and ``+-4 omega_PM`` along
        the phase-matching direction.
        """
        scale = reference_norm(pump, phase_match, params, k_sigma, n_ref)
        if not scale > 0 or not np.isfinite(scale):
            raise NormalizationError("pump x phase-matching product has zero norm")
        c = 1.0 / np.sqrt(scale)

        def amp(ds, di):
            ds, di = np.broadcast_arrays(ds, di)
            return c * pump(ds + di) * phase_match(ds, di)

        return cls(amp, params, "pump*phase_match")

    def sample(self, signal_grid: QuadratureGrid, idler_grid: QuadratureGrid) -> SpectralAmplitude2D:
        ds = signal_grid.points[:, None]
        di = idler_grid.points[None, :]
        values = np.asarray(self._amplitude(ds, di), dtype=complex)
        values = np.broadcast_to(values, (ds.shape[0], di.shape[1])).copy()
        return SpectralAmplitude2D(signal_grid, idler_grid, values)

    def __call__(self, ds, di):
        return self._amplitude(ds, di)


def reference_norm(pump, phase_match, params: SourceParams, k_sigma: float = DEFAULT_K_SIGMA,
                   n_ref: int = 1024) -> float:
    """Integral of ``|pump * phase_match|^2`` over the wide reference region."""
    plus = QuadratureGrid(0.0, k_sigma / params.sigma_P, n_ref)
    minus = QuadratureGrid(0.0, 4.0 * params.omega_PM, n_ref)
    u = plus.points[:, None]
    v = minus.points[None, :]
    ds, di = 0.5 * (u + v), 0.5 * (u - v)
    vals = np.abs(pump(u) * phase_match(ds, di)) ** 2
    # d(ws) d(wi) = d(u) d(v) / 2
    return float(np.sum(np.broadcast_to(vals, (n_ref, n_ref)).ravel()) * plus.weight * minus.weight / 2)


def gaussian_wavefunction(params: SourceParams, signal_grid: QuadratureGrid,
                          idler_grid: QuadratureGrid) -> SpectralAmplitude2D:
    return Biphoton.gaussian(params).sample(signal_grid, idler_grid)


def generic_wavefunction(pump: Callable, phase_match: Callable, signal_grid: QuadratureGrid,
                         idler_grid: QuadratureGrid, params: SourceParams,
                         k_sigma: float = DEFAULT_K_SIGMA) -> SpectralAmplitude2D:
    return Biphoton.from_spectra(pump, phase_match, params, k_sigma).sample(signal_grid, idler_grid)


def channelize(psi: Biphoton, n: int, plan: ChannelPlan, mode: str = "both",
               n_points: int = DEFAULT_POINTS, k_sigma: float = DEFAULT_K_SIGMA,
               signal_channel: int | None = None) -> SpectralAmplitude2D:
    """Restrict the biphoton to idler channel ``n``.

    ``mode="both"`` also restricts the signal to its channel (``n`` unless
    ``signal_channel`` is given); ``mode="idler_only"`` keeps the whole
    energy-conserving signal window.  Brickwall filters are unity on their
    passbands, so restricting the grid is exact.
    """
    check_channel(n, plan)
    igrid = channel_grid(n, plan, "idler", n_points)
    if mode == "both":
        m = n if signal_channel is None else signal_channel
        sgrid = channel_grid(m, plan, "signal", n_points)
    elif mode == "idler_only":
        sgrid = signal_window(igrid, psi.params, k_sigma)
    else:
        raise ValueError(f"mode must be 'both' or 'idler_only', got {mode!r}")
    return psi.sample(sgrid, igrid)


__all__ = [
    "SourceParams", "ChannelPlan", "SpectralAmplitude2D", "Biphoton", "gaussian_amplitude",
    "gaussian_wavefunction", "generic_wavefunction", "channelize", "reference_norm",
]
