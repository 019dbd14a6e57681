"""Raised-cosine pulse bank.

The transmit pulse is a root raised cosine, so the matched-filter output pulse
``g = p * p~`` is a raised cosine.  Everything here is closed form: time
response, spectrum, and the folded / delay-phased folded spectra obtained by
aliasing the spectrum at the FTN rate ``1/(delta*T)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PulseSpec",
    "rc_autocorr",
    "rc_spectrum",
    "folded_spectrum",
    "cross_spectrum",
    "alias_breakpoints",
]

# |1 - (2 beta t / T)^2| below this is treated as the removable singularity
_SINGULAR_TOL = 1e-8
_STABLE_TOL = 1e-12


@dataclass(frozen=True)
class PulseSpec:
    """Raised-cosine autocorrelation pulse signalled at rate ``1/(delta*T)``.

    Parameters
    ----------
    beta : float
        Roll-off factor, ``0 <= beta <= 1``.
    T : float
        Nyquist symbol period in seconds.
    delta : float
        FTN acceleration factor, ``0 < delta <= 1``.
    """

    beta: float = 0.25
    T: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if not self.T > 0.0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")

    @property
    def symbol_interval(self) -> float:
        """FTN signalling interval ``delta*T``."""
        return self.delta * self.T

    @property
    def stable(self) -> bool:
        """True when ``delta*(1+beta) >= 1``, i.e. the folded spectrum has no dead band."""
        return self.delta * (1.0 + self.beta) >= 1.0 - _STABLE_TOL

    @property
    def bandwidth(self) -> float:
        """One-sided bandwidth ``(1+beta)/(2T)`` in Hz."""
        return (1.0 + self.beta) / (2.0 * self.T)


def rc_autocorr(spec: PulseSpec, t):
    """Raised-cosine pulse ``g(t)`` with ``g(0) = 1``.

    Accepts scalars or arrays; returns the same shape.
    """
    x = np.asarray(t, dtype=float) / spec.T
    beta = spec.beta
    den = 1.0 - (2.0 * beta * x) ** 2
    singular = np.abs(den) < _SINGULAR_TOL
    safe_den = np.where(singular, 1.0, den)
    out = np.sinc(x) * np.cos(np.pi * beta * x) / safe_den
    if beta > 0.0 and np.any(singular):
        out = np.where(singular, 0.25 * np.pi * np.sinc(1.0 / (2.0 * beta)), out)
    return out if out.ndim else float(out)


def rc_spectrum(spec: PulseSpec, f):
    """Raised-cosine spectrum ``G(f)``; equals ``T`` on the flat part of the band."""
    af = np.abs(np.asarray(f, dtype=float))
    T, beta = spec.T, spec.beta
    f_lo = (1.0 - beta) / (2.0 * T)
    f_hi = (1.0 + beta) / (2.0 * T)
    out = np.where(af <= f_lo, T, 0.0)
    if f_hi > f_lo:
        band = (af > f_lo) & (af <= f_hi)
        phase = np.pi * T * (af[band] - f_lo) / beta
        out = np.asarray(out)
        out[band] = 0.5 * T * (1.0 + np.cos(phase))
    else:
        # brick wall, or a taper too narrow to resolve: the band edge takes
        # the midpoint so aliases sum to T
        out = np.where(af == f_lo, 0.5 * T, out)
    return out if out.ndim else float(out)


def _alias_range(spec: PulseSpec) -> np.ndarray:
    # alias n contributes only if |lambda - n| <= delta (1 + beta) / 2
    n_max = int(np.ceil(0.5 * spec.delta * (1.0 + spec.beta) + 0.5))
    return np.arange(-n_max, n_max + 1)


def folded_spectrum(spec: PulseSpec, lam):
    """Folded spectrum ``G_delta(lambda) = 1/(dT) sum_n G((lambda - n)/(dT))``.

    ``lam`` is normalized frequency in ``[-1/2, 1/2]``.  The alias sum is finite
    because ``G`` has bounded support.
    """
    lam_arr = np.asarray(lam, dtype=float)
    dT = spec.symbol_interval
    shifts = lam_arr[..., None] - _alias_range(spec)
    out = rc_spectrum(spec, shifts / dT).sum(axis=-1) / dT
    return out if out.ndim else float(out)


def cross_spectrum(spec: PulseSpec, lam, dtau: float):
    """Delay-phased folded spectrum of the cross-interference matrix.

    ``(1/dT) sum_n G((lambda - n)/dT) exp(j 2 pi dtau (lambda - n)/dT)`` with
    ``dtau = tau_1 - tau_2``.  With the ``e^{+j2pi lambda k}`` generating-function
    convention this is the generating function of ``G12`` evaluated at
    ``-lambda``; only the modulus enters any rate.
    """
    lam_arr = np.asarray(lam, dtype=float)
    dT = spec.symbol_interval
    shifts = (lam_arr[..., None] - _alias_range(spec)) / dT
    terms = rc_spectrum(spec, shifts) * np.exp(2j * np.pi * dtau * shifts)
    out = terms.sum(axis=-1) / dT
    return out if out.ndim else complex(out)


def alias_breakpoints(spec: PulseSpec) -> np.ndarray:
    """Sorted points in ``[-1/2, 1/2]`` where the folded spectra lose smoothness.

    These are the images of the band edges ``(1 +/- beta)/(2T)`` under the
    fold; both interval ends are always included.
    """
    half_widths = {0.5 * spec.delta * (1.0 - spec.beta), 0.5 * spec.delta * (1.0 + spec.beta)}
    pts = [-0.5, 0.0, 0.5]
    for n in _alias_range(spec):
        for w in half_widths:
            for p in (n - w, n + w):
                if -0.5 < p < 0.5:
                    pts.append(float(p))
    pts = np.unique(np.round(pts, 15))
    # merge points closer than the round-off of the fold
    keep = [pts[0]]
    for p in pts[1:]:
        if p - keep[-1] > 1e-12:
            keep.append(p)
    keep[-1] = 0.5
    return np.array(keep)
