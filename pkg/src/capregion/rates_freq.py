"""Limit (N -> infinity) rates as integrals over normalized frequency.

Spectra ``S_k(lambda)`` are the composite channel-input spectra
``G_delta(lambda) S_ak(lambda) / (delta T)``, so the power constraint reads
``int S_k <= P_k`` and the per-frequency SNR is ``delta T S_k / sigma0^2``.
Integrals use a composite Gauss-Legendre rule split at the alias band edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated, SpectrumOnDeadBand
from .pulse import PulseSpec, alias_breakpoints, cross_spectrum, folded_spectrum
from .quadrature import composite_gauss_legendre
from .rates_time import RateTriple

__all__ = [
    "SpectralAllocation",
    "spectral_grid",
    "spectral_coupling",
    "rate_integrals",
    "orthogonal_special_case",
    "DEAD_BAND",
]

DEAD_BAND = 1e-12


def spectral_grid(pulse: PulseSpec, n_nodes: int = 1024, order: int = 16):
    """Quadrature nodes/weights on ``[-1/2, 1/2]`` split at the fold breakpoints."""
    return composite_gauss_legendre(alias_breakpoints(pulse), n_nodes, order)


@dataclass(frozen=True)
class SpectralAllocation:
    """Sampled spectra on a quadrature grid over ``[-1/2, 1/2]``."""

    grid: np.ndarray
    weights: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=float).copy() for a in (self.grid, self.weights, self.s1, self.s2)]
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 1:
            raise ValueError("grid, weights, s1, s2 must be 1-D arrays of one length")
        if np.any(arrays[2] < 0) or np.any(arrays[3] < 0):
            raise ValueError("spectra must be nonnegative")
        for name, a in zip(("grid", "weights", "s1", "s2"), arrays):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def from_functions(cls, grid, weights, f1, f2) -> "SpectralAllocation":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, weights, np.broadcast_to(f1(grid), grid.shape),
                   np.broadcast_to(f2(grid), grid.shape))

    @property
    def power(self) -> tuple:
        """``(int S_1, int S_2)`` by the grid's quadrature rule."""
        return (math.fsum(self.weights * self.s1), math.fsum(self.weights * self.s2))


def spectral_coupling(pulse: PulseSpec, dtau: float, grid):
    """Folded spectrum and ``1 - |G12,delta / G_delta|^2`` on ``grid``.

    The coupling is set to 0 on the dead band where ``G_delta < DEAD_BAND``.
    """
    gd = np.asarray(folded_spectrum(pulse, grid), dtype=float)
    live = gd >= DEAD_BAND
    ratio_sq = np.zeros_like(gd)
    g12 = np.abs(np.asarray(cross_spectrum(pulse, grid, dtau)))
    ratio_sq[live] = (g12[live] / gd[live]) ** 2
    return gd, np.clip(1.0 - ratio_sq, 0.0, 1.0)


def _integral(weights, values):
    return math.fsum(weights * values)


def rate_integrals(pulse: PulseSpec, dtau: float, alloc: SpectralAllocation,
                   sigma0_sq: float) -> RateTriple:
    """Limit rate triple in bits per symbol for the spectra in ``alloc``.

    ``r1 = 1/2 int log2(1 + x1)``, ``r2`` likewise and
    ``r_sum = 1/2 int log2(1 + x1 + x2 + x1 x2 (1 - |G12,delta/G_delta|^2))`` with
    ``x_k = delta T S_k / sigma0^2``.
    """
    gd, coupling = spectral_coupling(pulse, dtau, alloc.grid)
    dead = gd < DEAD_BAND
    if np.any(dead & ((alloc.s1 > 0) | (alloc.s2 > 0))):
        raise SpectrumOnDeadBand("positive spectrum where the folded spectrum vanishes")
    gain = pulse.symbol_interval / sigma0_sq
    x = gain * alloc.s1
    y = gain * alloc.s2
    half = 0.5 / math.log(2.0)
    w = alloc.weights
    return RateTriple(
        r1=half * _integral(w, np.log1p(x)),
        r2=half * _integral(w, np.log1p(y)),
        r_sum=half * _integral(w, np.log1p(x + y + coupling * x * y)),
    )


def orthogonal_special_case(pulse: PulseSpec, dtau: float, alloc: SpectralAllocation,
                            sigma0_sq: float) -> RateTriple:
    """Nyquist-rate (``delta = 1``) entry point; identical to :func:`rate_integrals`."""
    if pulse.delta != 1.0:
        raise PreconditionViolated(f"orthogonal signalling needs delta = 1, got {pulse.delta}")
    return rate_integrals(pulse, dtau, alloc, sigma0_sq)
