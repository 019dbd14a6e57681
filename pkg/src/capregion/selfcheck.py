"""Fast invariant suite run by ``capregion selfcheck``.

Every check returns ``(status, detail)`` with status ``PASS``, ``FAIL`` or
``WARN``.  Warnings are informational and do not fail the suite.
"""

from __future__ import annotations

import sys
import warnings
from typing import Callable

import numpy as np

from .pulse import PulseSpec, folded_spectrum, rc_autocorr, rc_spectrum
from .quadrature import composite_gauss_legendre
from .rates_time import (ModeAllocation, covariances_from_modes, mode_budget,
                         rate_triple_from_modes, single_user_rate, sum_rate_logdet)
from .toeplitz import ChannelSpec, build_interference, dft_eigen_residual

__all__ = ["run_selfcheck", "CHECKS"]

PASS, FAIL, WARN = "PASS", "FAIL", "WARN"


def _check_g0(autocorr):
    spec = PulseSpec(beta=0.25)
    val = float(autocorr(spec, 0.0))
    return (PASS if abs(val - 1.0) < 1e-12 else FAIL), f"g(0) = {val:.15g}"


def _check_nyquist_zeros(autocorr):
    spec = PulseSpec(beta=0.25)
    vals = np.asarray(autocorr(spec, np.arange(1, 9) * spec.T), dtype=float)
    worst = float(np.abs(vals).max())
    return (PASS if worst < 1e-12 else FAIL), f"max |g(kT)|, k=1..8: {worst:.3e}"


def _check_singularity(autocorr):
    # the removable point t = T/(2 beta) must match its neighbourhood
    spec = PulseSpec(beta=0.25)
    t0 = spec.T / (2 * spec.beta)
    at = float(autocorr(spec, t0))
    near = 0.5 * float(autocorr(spec, t0 - 1e-6) + autocorr(spec, t0 + 1e-6))
    gap = abs(at - near)
    return (PASS if gap < 1e-9 else FAIL), f"|g(T/2beta) - limit| = {gap:.3e}"


def _check_spectrum_area(autocorr):
    spec = PulseSpec(beta=0.25)
    edges = [-0.625, -0.375, 0.375, 0.625]
    x, w = composite_gauss_legendre(edges, 96)
    area = float(np.dot(w, rc_spectrum(spec, x)))
    g0 = float(autocorr(spec, 0.0))
    gap = abs(area - g0)
    return (PASS if gap < 1e-10 else FAIL), f"|int G - g(0)| = {gap:.3e}"


def _check_nyquist_fold(autocorr):
    spec = PulseSpec(beta=0.25, delta=1.0)
    lam = np.linspace(-0.5, 0.5, 41)
    dev = float(np.abs(folded_spectrum(spec, lam) - 1.0).max())
    return (PASS if dev < 1e-12 else FAIL), f"max |G_1(lam) - 1| = {dev:.3e}"


def _check_toeplitz_entries(autocorr):
    spec = PulseSpec(beta=0.25, delta=0.9)
    chan = ChannelSpec.from_snr(20.0, 0.3, 4)
    mats = build_interference(spec, chan)
    k = np.arange(4)
    lag = (k[:, None] - k[None, :]) * spec.symbol_interval
    dev = max(float(np.abs(mats.g_mat - autocorr(spec, lag)).max()),
              float(np.abs(mats.g12_mat - autocorr(spec, lag + chan.dtau)).max()))
    return (PASS if dev < 1e-12 else FAIL), f"max entry deviation at N=4: {dev:.3e}"


def _check_mode_equality(autocorr):
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in (2, 3, 4):
        spec = PulseSpec(beta=0.25, delta=0.9)
        chan = ChannelSpec.from_snr(20.0, 0.45 * rng.random() + 0.1, n)
        mats = build_interference(spec, chan)
        cap = mode_budget(mats)
        p1 = rng.dirichlet(np.ones(n)) * cap[0]
        p2 = rng.dirichlet(np.ones(n)) * cap[1]
        alloc = ModeAllocation(p1, p2)
        tri = rate_triple_from_modes(mats, alloc, chan.sigma0_sq)
        r1, r2 = covariances_from_modes(mats, alloc)
        ref = (single_user_rate(mats, r1, chan.sigma0_sq), single_user_rate(mats, r2, chan.sigma0_sq),
               sum_rate_logdet(mats, r1, r2, chan.sigma0_sq))
        worst = max(worst, *(abs(a - b) for a, b in zip((tri.r1, tri.r2, tri.r_sum), ref)))
    return (PASS if worst < 1e-9 else FAIL), f"mode vs log-det rates, N<=4: {worst:.3e}"


def _check_residual_trend(autocorr):
    spec = PulseSpec(beta=0.25, delta=0.9)
    res = []
    for n in (16, 32, 64):
        g = build_interference(spec, ChannelSpec(n_symbols=n)).g_mat
        res.append(dft_eigen_residual(g, n // 4))
    ok = all(b < a for a, b in zip(res, res[1:]))
    text = ", ".join(f"N={n}: {r:.3e}" for n, r in zip((16, 32, 64), res))
    return (PASS if ok else FAIL), f"DFT residual at mode N/4 ({text})"


def _check_stability_probe(autocorr):
    spec = PulseSpec(beta=0.25, delta=0.72)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mats = build_interference(spec, ChannelSpec(n_symbols=64))
    prod = spec.delta * (1 + spec.beta)
    cond = float(mats.g_eigvals[-1] / mats.g_eigvals[0])
    if mats.floor_applied:
        return WARN, (f"delta*(1+beta) = {prod:.3g}: {mats.n_floored} eigenvalue(s) of G "
                      f"clamped to {mats.floor:.3e}")
    if not spec.stable:
        return WARN, (f"delta*(1+beta) = {prod:.3g} < 1: cond(G) = {cond:.3e} at N=64; "
                      "region tracing requires eigenvalue flooring")
    return PASS, f"delta*(1+beta) = {prod:.3g}: cond(G) = {cond:.3e}"


CHECKS = [
    ("pulse.g0", _check_g0),
    ("pulse.nyquist_zeros", _check_nyquist_zeros),
    ("pulse.removable_point", _check_singularity),
    ("pulse.spectrum_area", _check_spectrum_area),
    ("pulse.nyquist_fold", _check_nyquist_fold),
    ("toeplitz.entries_n4", _check_toeplitz_entries),
    ("rates.mode_equality_n4", _check_mode_equality),
    ("toeplitz.dft_residual_trend", _check_residual_trend),
    ("toeplitz.stability_probe", _check_stability_probe),
]


def run_selfcheck(autocorr: Callable = rc_autocorr, stream=None) -> bool:
    """Run all checks, print one line each, return True iff none failed.

    ``autocorr`` replaces the pulse autocorrelation in the checks that
    evaluate it directly, which lets tests inject a faulty pulse.
    """
    stream = sys.stdout if stream is None else stream
    ok = True
    for name, check in CHECKS:
        try:
            status, detail = check(autocorr)
        except Exception as exc:  # a crashing check is a failed check
            status, detail = FAIL, f"{type(exc).__name__}: {exc}"
        ok &= status != FAIL
        print(f"[{status}] {name}: {detail}", file=stream)
    print(f"selfcheck {'passed' if ok else 'FAILED'}", file=stream)
    return ok
