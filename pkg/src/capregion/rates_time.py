"""Finite-N rates of the two-user channel, in bits per FTN symbol.

All log-determinants go through eigenvalues of symmetrized products such as
``G^{1/2} R G^{1/2}``; no determinant of a near-singular matrix is formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DegenerateMatrix, NotPSD
from .toeplitz import InterferenceMatrices

__all__ = [
    "ModeAllocation",
    "RateTriple",
    "single_user_rate",
    "sum_rate_logdet",
    "rate_triple_from_modes",
    "covariances_from_modes",
    "iid_baseline_sum_rate",
    "iid_baseline_corners",
    "power_used",
    "mode_budget",
]

_PSD_TOL = 1e-10
_BUDGET_SLACK = 1e-9


@dataclass(frozen=True)
class RateTriple:
    """Pentagon ``{R1 <= r1, R2 <= r2, R1 + R2 <= r_sum}`` of one input allocation."""

    r1: float
    r2: float
    r_sum: float

    def corners(self):
        """The two dominant corners ``(r1, r_sum - r1)`` and ``(r_sum - r2, r2)``."""
        return (self.r1, self.r_sum - self.r1), (self.r_sum - self.r2, self.r2)

    def weighted_max(self, mu1: float, mu2: float) -> float:
        """Largest ``mu1*R1 + mu2*R2`` over the pentagon."""
        return max(mu1 * a + mu2 * b for a, b in self.corners())

    def scaled(self, factor: float) -> "RateTriple":
        return RateTriple(self.r1 * factor, self.r2 * factor, self.r_sum * factor)


@dataclass(frozen=True)
class ModeAllocation:
    """Per-mode powers ``psi_1i``, ``psi_2i`` in the whitened SVD coordinates."""

    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        p1 = np.asarray(self.psi1, dtype=float).copy()
        p2 = np.asarray(self.psi2, dtype=float).copy()
        if p1.shape != p2.shape or p1.ndim != 1:
            raise ValueError("psi1 and psi2 must be 1-D arrays of equal length")
        scale = max(p1.max(initial=0.0), p2.max(initial=0.0), 1.0)
        if p1.min(initial=0.0) < -1e-12 * scale or p2.min(initial=0.0) < -1e-12 * scale:
            raise ValueError("mode powers must be nonnegative")
        p1 = np.maximum(p1, 0.0)
        p2 = np.maximum(p2, 0.0)
        p1.setflags(write=False)
        p2.setflags(write=False)
        object.__setattr__(self, "psi1", p1)
        object.__setattr__(self, "psi2", p2)


def mode_budget(mats: InterferenceMatrices) -> tuple:
    """Per-user totals ``N * delta * T * P_k`` available to the mode powers."""
    scale = mats.n * mats.pulse.symbol_interval
    return scale * mats.chan.power[0], scale * mats.chan.power[1]


def _psd_eig(matrix, what="covariance"):
    a = np.asarray(matrix)
    a = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(a)
    scale = max(abs(np.trace(a).real), np.abs(w).max(initial=0.0), 1e-300)
    if w.size and w[0] < -_PSD_TOL * scale:
        raise NotPSD(f"{what} has eigenvalue {w[0]:.3e} (scale {scale:.3e})")
    return np.maximum(w, 0.0), v


def _psd_sqrt(matrix):
    w, v = _psd_eig(matrix)
    return (v * np.sqrt(w)) @ v.conj().T


def _log2det_eye_plus(sym):
    # log2 det(I + S) for Hermitian PSD S
    w = np.linalg.eigvalsh(0.5 * (sym + sym.conj().T))
    return float(np.sum(np.log1p(np.maximum(w, 0.0))) / np.log(2.0))


def single_user_rate(mats: InterferenceMatrices, r_cov, sigma0_sq: float) -> float:
    """``(1/2N) log2 det(I + G R / sigma0^2)`` via eigenvalues of ``G^{1/2} R G^{1/2}``."""
    _psd_eig(r_cov)
    s = mats.g_sqrt
    return _log2det_eye_plus(s @ np.asarray(r_cov) @ s / sigma0_sq) / (2 * mats.n)


def sum_rate_logdet(mats: InterferenceMatrices, r1_cov, r2_cov, sigma0_sq: float) -> float:
    """``(1/2N) log2 det(I_2N + G~ R~ / sigma0^2)`` with ``R~ = blockdiag(R1, R2)``.

    Evaluated as ``log2 det(I + R~^{1/2} G~ R~^{1/2} / sigma0^2)`` so a singular
    ``G~`` (synchronous users) is harmless.
    """
    n = mats.n
    root = np.zeros((2 * n, 2 * n), dtype=np.result_type(r1_cov, r2_cov, float))
    root[:n, :n] = _psd_sqrt(r1_cov)
    root[n:, n:] = _psd_sqrt(r2_cov)
    return _log2det_eye_plus(root @ mats.g_tilde @ root / sigma0_sq) / (2 * n)


def rate_triple_from_modes(mats: InterferenceMatrices, alloc: ModeAllocation,
                           sigma0_sq: float) -> RateTriple:
    """Mode-domain rate triple in bits per symbol.

    ``r_sum`` is the per-mode sum-rate expression with coupling ``1 - |lambda_i|^2``,
    paired with the singular values of ``Phi`` in descending order.  It is exact
    for diagonal mode covariances and an upper bound otherwise.
    """
    if alloc.psi1.size != mats.n:
        raise ValueError(f"allocation has {alloc.psi1.size} modes, matrices have {mats.n}")
    for user, (psi, cap) in enumerate(zip((alloc.psi1, alloc.psi2), mode_budget(mats)), 1):
        if psi.sum() > cap * (1.0 + _BUDGET_SLACK):
            raise BudgetExceeded(f"user {user} uses {psi.sum():.6g} > budget {cap:.6g}")
    x = alloc.psi1 / sigma0_sq
    y = alloc.psi2 / sigma0_sq
    c = mats.mode_coupling
    scale = 1.0 / (2 * mats.n * np.log(2.0))
    return RateTriple(
        r1=float(np.sum(np.log1p(x)) * scale),
        r2=float(np.sum(np.log1p(y)) * scale),
        r_sum=float(np.sum(np.log1p(x + y + c * x * y)) * scale),
    )


def covariances_from_modes(mats: InterferenceMatrices, alloc: ModeAllocation):
    """Input covariances realising ``alloc`` with diagonal mode covariances.

    ``R1 = G^{-1/2} U diag(psi1) U^H G^{-1/2}``, ``R2`` likewise with ``V``.
    """
    gi = mats.g_isqrt
    u, v = mats.u_phi, mats.v_phi
    r1 = gi @ (u * alloc.psi1) @ u.conj().T @ gi
    r2 = gi @ (v * alloc.psi2) @ v.conj().T @ gi
    return 0.5 * (r1 + r1.conj().T), 0.5 * (r2 + r2.conj().T)


def _log2det_pd(a):
    a = 0.5 * (a + a.conj().T)
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMatrix(f"covariance not positive definite: {exc}") from None
    return float(2.0 * np.sum(np.log(np.abs(np.diag(chol)))) / np.log(2.0))


def _treat_as_noise_rate(g, g_cross, r_own, r_other, sigma0_sq):
    # log2 det(Sigma_y) - log2 det(Sigma_y | own symbols), own user decoded last
    cond = g_cross @ r_other @ g_cross.conj().T + sigma0_sq * g
    full = g @ r_own @ g + cond
    return _log2det_pd(full) - _log2det_pd(cond)


def iid_baseline_sum_rate(mats: InterferenceMatrices, p1: float, p2: float,
                          sigma0_sq: float) -> float:
    """Sum rate ``I(a1; y1 | a2) + I(a2; y2)`` for iid inputs of fixed power.

    Inputs have covariances ``R_k = delta T p_k I``; user 2 is decoded from its
    own samples with user 1 as noise, then user 1 interference-free.
    """
    n = mats.n
    dT = mats.pulse.symbol_interval
    r1 = dT * p1 * np.eye(n)
    r2 = dT * p2 * np.eye(n)
    first = single_user_rate(mats, r1, sigma0_sq) * 2 * n
    second = _treat_as_noise_rate(mats.g_mat, mats.g21_mat, r2, r1, sigma0_sq)
    return (first + second) / (2 * n)


def iid_baseline_corners(mats: InterferenceMatrices, p1: float, p2: float, sigma0_sq: float):
    """Both successive-decoding corners ``(R1, R2)`` of the iid baseline."""
    n = mats.n
    dT = mats.pulse.symbol_interval
    r1 = dT * p1 * np.eye(n)
    r2 = dT * p2 * np.eye(n)
    su1 = single_user_rate(mats, r1, sigma0_sq)
    su2 = single_user_rate(mats, r2, sigma0_sq)
    tan2 = _treat_as_noise_rate(mats.g_mat, mats.g21_mat, r2, r1, sigma0_sq) / (2 * n)
    tan1 = _treat_as_noise_rate(mats.g_mat, mats.g12_mat, r1, r2, sigma0_sq) / (2 * n)
    return (su1, tan2), (tan1, su2)


def power_used(mats: InterferenceMatrices, r_cov, delta_T: float) -> float:
    """Average transmit power ``tr(G R) / (N delta T)``."""
    _psd_eig(r_cov)
    return float(np.trace(mats.g_mat @ np.asarray(r_cov)).real / (mats.n * delta_T))
