"""Toeplitz interference matrices and their asymptotic spectral checks.

``build_interference`` assembles ``G``, ``G12``, ``G21`` and the block matrix
``G~`` for two users whose pulses arrive with delays ``tau_1 <= tau_2``, then
whitens the cross term: ``Phi = G^{-1/2} G12 G^{-1/2}``.  The singular values
of ``Phi`` are the per-mode correlation coefficients used by the sum-rate
bound in :mod:`capregion.rates_time`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateMatrix
from .pulse import PulseSpec, rc_autocorr
from .quadrature import composite_gauss_legendre

__all__ = [
    "ChannelSpec",
    "InterferenceMatrices",
    "build_interference",
    "hermitian_sqrt",
    "generating_function",
    "generating_function_with_bound",
    "dft_eigen_residual",
    "szego_check",
]

DEFAULT_FLOOR = 1e-10


@dataclass(frozen=True)
class ChannelSpec:
    """Delays, noise level, power limits and block length of the 2-user channel.

    ``tau`` is ``(tau_1, tau_2)`` with ``0 <= tau_1 <= tau_2``; the upper bound
    ``tau_2 <= T`` is checked against the pulse in :func:`build_interference`.
    """

    tau: tuple = (0.0, 0.0)
    sigma0_sq: float = 1.0
    power: tuple = (100.0, 100.0)
    n_symbols: int = 16

    def __post_init__(self):
        t1, t2 = (float(v) for v in self.tau)
        p1, p2 = (float(v) for v in self.power)
        object.__setattr__(self, "tau", (t1, t2))
        object.__setattr__(self, "power", (p1, p2))
        if not 0.0 <= t1 <= t2:
            raise ValueError(f"delays must satisfy 0 <= tau1 <= tau2, got {self.tau}")
        if not self.sigma0_sq > 0.0:
            raise ValueError(f"sigma0_sq must be positive, got {self.sigma0_sq}")
        if not (p1 > 0.0 and p2 > 0.0):
            raise ValueError(f"powers must be positive, got {self.power}")
        if int(self.n_symbols) != self.n_symbols or self.n_symbols < 1:
            raise ValueError(f"n_symbols must be a positive integer, got {self.n_symbols}")
        object.__setattr__(self, "n_symbols", int(self.n_symbols))

    @classmethod
    def from_snr(cls, snr_db: float, tau_diff: float = 0.0, n_symbols: int = 16,
                 sigma0_sq: float = 1.0) -> "ChannelSpec":
        """Both users at ``snr_db`` (``P_k / sigma0_sq``), user 1 at zero delay."""
        p = sigma0_sq * 10.0 ** (snr_db / 10.0)
        return cls(tau=(0.0, tau_diff), sigma0_sq=sigma0_sq, power=(p, p),
                   n_symbols=n_symbols)

    @property
    def dtau(self) -> float:
        """``tau_1 - tau_2`` (non-positive under the delay ordering)."""
        return self.tau[0] - self.tau[1]

    @property
    def snr(self) -> tuple:
        return (self.power[0] / self.sigma0_sq, self.power[1] / self.sigma0_sq)


def _readonly(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class InterferenceMatrices:
    """All matrices derived from one (pulse, channel) pair.  Arrays are read-only."""

    pulse: PulseSpec
    chan: ChannelSpec
    g_mat: np.ndarray
    g12_mat: np.ndarray
    g21_mat: np.ndarray
    g_tilde: np.ndarray
    g_eigvals: np.ndarray
    g_eigvecs: np.ndarray
    g_sqrt: np.ndarray
    g_isqrt: np.ndarray
    phi: np.ndarray
    u_phi: np.ndarray
    s_phi: np.ndarray
    v_phi: np.ndarray
    stable: bool
    floor: float
    n_floored: int = 0
    notes: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.g_mat.shape[0]

    @property
    def floor_applied(self) -> bool:
        return self.n_floored > 0

    @property
    def mode_coupling(self) -> np.ndarray:
        """``1 - |lambda_i|^2`` per mode, clipped to ``[0, 1]``."""
        return np.clip(1.0 - self.s_phi ** 2, 0.0, 1.0)


def _eigh_floored(matrix, floor_rel, allow_floor):
    w, v = np.linalg.eigh(matrix)
    floor = floor_rel * max(float(w[-1]), 0.0)
    low = w < floor
    n_low = int(low.sum())
    if n_low and not allow_floor:
        raise DegenerateMatrix(
            f"{n_low} eigenvalue(s) below floor {floor:.3e} (min {w[0]:.3e})")
    if floor <= 0.0:
        raise DegenerateMatrix("matrix has no positive eigenvalue")
    return np.where(low, floor, w), v, floor, n_low


def _fix_signs(u, vh):
    # first non-negligible entry of every left singular vector made positive
    idx = np.argmax(np.abs(u) > 1e-12 * np.abs(u).max(axis=0), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, vh * signs[:, None]


def build_interference(pulse: PulseSpec, chan: ChannelSpec, *, floor_rel: float = DEFAULT_FLOOR,
                       allow_floor: bool = True) -> InterferenceMatrices:
    """Assemble ``G``, ``G12``, ``G21``, ``G~`` and the whitened cross term ``Phi``.

    ``(G_kl)[n, m] = g((n - m) delta T + tau_k - tau_l)``.  Eigenvalues of ``G``
    below ``floor_rel * max_eig`` are clamped (with a warning) unless
    ``allow_floor`` is False, in which case :class:`DegenerateMatrix` is raised.
    """
    if chan.tau[1] > pulse.T:
        raise ValueError(f"tau2 = {chan.tau[1]} exceeds the symbol period T = {pulse.T}")
    n = np.arange(chan.n_symbols)
    lag = (n[:, None] - n[None, :]) * pulse.symbol_interval
    g_mat = rc_autocorr(pulse, lag)
    g_mat = np.atleast_2d(g_mat)
    g12 = np.atleast_2d(rc_autocorr(pulse, lag + chan.dtau))
    g21 = g12.conj().T.copy()
    g_tilde = np.block([[g_mat, g12], [g21, g_mat]])

    w, v, floor, n_low = _eigh_floored(g_mat, floor_rel, allow_floor)
    notes = []
    if n_low:
        msg = (f"G has {n_low} eigenvalue(s) below {floor:.3e}; clamped "
               f"(delta*(1+beta) = {pulse.delta * (1 + pulse.beta):.4g})")
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    root = np.sqrt(w)
    g_sqrt = (v * root) @ v.T
    g_isqrt = (v / root) @ v.T
    phi = g_isqrt @ g12 @ g_isqrt
    u, s, vh = np.linalg.svd(phi)
    u, vh = _fix_signs(u, vh)

    return InterferenceMatrices(
        pulse=pulse, chan=chan,
        g_mat=_readonly(g_mat), g12_mat=_readonly(g12), g21_mat=_readonly(g21),
        g_tilde=_readonly(g_tilde), g_eigvals=_readonly(w), g_eigvecs=_readonly(v),
        g_sqrt=_readonly(g_sqrt), g_isqrt=_readonly(g_isqrt), phi=_readonly(phi),
        u_phi=_readonly(u), s_phi=_readonly(s), v_phi=_readonly(vh.conj().T),
        stable=pulse.stable, floor=floor, n_floored=n_low, notes=tuple(notes),
    )


def hermitian_sqrt(matrix, *, floor_rel: float = 0.0) -> np.ndarray:
    """Positive-definite square root via eigendecomposition.

    Raises :class:`DegenerateMatrix` if the input is not Hermitian or has an
    eigenvalue at or below ``floor_rel * max_eig``.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.conj().T).max() > 1e-12 * scale:
        raise DegenerateMatrix("matrix is not Hermitian")
    w, v = np.linalg.eigh(a)
    if w[0] <= floor_rel * max(w[-1], 0.0) or w[0] <= 0.0:
        raise DegenerateMatrix(f"matrix is not positive definite (min eig {w[0]:.3e})")
    return (v * np.sqrt(w)) @ v.conj().T


def generating_function_with_bound(coeff: Callable, lam, *, tol: float = 1e-14,
                                   chunk: int = 4096, max_terms: int = 1 << 22):
    """Evaluate ``sum_k t_k exp(j 2 pi lam k)`` by symmetric truncation.

    ``coeff`` maps an integer array ``k`` to the coefficients ``t_k``.  Terms are
    added in chunks of ``chunk`` lags on each side until every coefficient in
    a chunk has modulus below ``tol``.

    Returns
    -------
    value : complex or ndarray
    n_terms : int
        Largest lag included.
    bound : float
        Largest coefficient modulus in the final chunk.  For the raised cosine
        (cubic decay) the neglected tail is at most ``bound * n_terms / 2``.
    """
    lam_arr = np.asarray(lam, dtype=float)
    flat = lam_arr.reshape(-1)
    total = np.full(flat.shape, complex(np.asarray(coeff(np.array([0])))[0]))
    start = 1
    bound = np.inf
    while start <= max_terms:
        k = np.arange(start, start + chunk)
        tp = np.asarray(coeff(k), dtype=complex)
        tm = np.asarray(coeff(-k), dtype=complex)
        ph = np.exp(2j * np.pi * flat[:, None] * k[None, :])
        total = total + ph @ tp + ph.conj() @ tm
        bound = float(max(np.abs(tp).max(), np.abs(tm).max()))
        start += chunk
        if bound < tol:
            break
    value = total.reshape(lam_arr.shape)
    if not lam_arr.ndim:
        value = complex(value)
    return value, start - 1, bound


def generating_function(coeff: Callable, lam, *, tol: float = 1e-14):
    """Generating function ``sum_k t_k e^{j 2 pi lam k}`` of a Toeplitz sequence."""
    return generating_function_with_bound(coeff, lam, tol=tol)[0]


def _toeplitz_symbol(matrix):
    # truncated generating function from the 2N-1 diagonals of the matrix
    a = np.asarray(matrix)
    n = a.shape[0]
    lags = np.arange(-(n - 1), n)
    coeffs = np.array([a[max(k, 0), max(-k, 0)] for k in lags])

    def symbol(lam):
        return np.exp(2j * np.pi * np.multiply.outer(lam, lags)) @ coeffs

    return symbol


def dft_eigen_residual(matrix, k: int, symbol: Callable | None = None) -> float:
    """Relative residual of the ``k``-th DFT vector as an eigenvector of ``matrix``.

    Returns ``||A f_k - s(k/N) f_k|| / ||A||_2`` with
    ``f_k[n] = exp(-j 2 pi k n / N) / sqrt(N)`` and ``s`` the generating function.
    Without ``symbol`` the matrix's own (truncated) generating function is used.
    """
    a = np.asarray(matrix)
    n = a.shape[0]
    if not 0 <= k < n:
        raise ValueError(f"mode index {k} outside [0, {n})")
    if symbol is None:
        symbol = _toeplitz_symbol(a)
    f = np.exp(-2j * np.pi * k * np.arange(n) / n) / np.sqrt(n)
    eig = complex(np.asarray(symbol(k / n)))
    return float(np.linalg.norm(a @ f - eig * f) / np.linalg.norm(a, 2))


def szego_check(matrix_family: Callable[[int], np.ndarray], transform: Callable,
                n_values: Sequence[int], symbol: Callable, *, breakpoints=(-0.5, 0.5),
                n_nodes: int = 2048):
    """Compare eigenvalue averages with the Szego limit integral.

    For each ``N`` returns ``(N, mean(transform(eig)), integral, |gap|)`` where the
    integral is ``int_{-1/2}^{1/2} transform(symbol(lam)) dlam`` evaluated by a
    composite Gauss-Legendre rule split at ``breakpoints``.
    """
    nodes, weights = composite_gauss_legendre(breakpoints, n_nodes)
    integral = float(np.dot(weights, transform(np.real(symbol(nodes)))))
    rows = []
    for n in n_values:
        eig = np.linalg.eigvalsh(matrix_family(int(n)))
        avg = float(np.mean(transform(eig)))
        rows.append((int(n), avg, integral, abs(avg - integral)))
    return rows
