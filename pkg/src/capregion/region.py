"""Capacity-region boundaries, convergence studies and comparison curves.

Region coordinates are reported in bits per Nyquist interval ``T`` (the
per-symbol rate divided by ``delta``), so curves for different acceleration
factors share one time base.  At ``delta = 1`` this is bits per symbol.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DegenerateMatrix
from .optimize import maximize_weighted
from .pulse import PulseSpec
from .rates_freq import DEAD_BAND, SpectralAllocation, rate_integrals, spectral_coupling, spectral_grid
from .rates_time import (
    ModeAllocation,
    RateTriple,
    iid_baseline_corners,
    rate_triple_from_modes,
)
from .toeplitz import ChannelSpec, build_interference

__all__ = [
    "RegionRequest",
    "RateRegion",
    "trace_boundary",
    "iid_region",
    "ray_radius",
    "region_deviation",
    "region_contains",
    "convergence_study",
    "TauSweep",
    "tau_sweep",
    "sum_rate_capacity",
    "ComparisonTable",
    "comparison_suite",
    "DEFAULT_VARIANTS",
]

MODES = ("time", "frequency")
COMPARISONS = (None, "synchronous", "nyquist", "iid-baseline")
DEFAULT_VARIANTS = ((1.0, 0.25), (0.9, 0.25), (0.8, 0.25), (1.0, 0.0))


@dataclass(frozen=True)
class RegionRequest:
    """What to trace: the channel, the domain and the boundary resolution.

    ``mode`` is ``"time"`` (block length ``chan.n_symbols``) or ``"frequency"``
    (limit region on a ``grid_m``-node quadrature grid).
    """

    pulse: PulseSpec
    chan: ChannelSpec
    mode: str = "time"
    weight_count: int = 65
    comparison: str | None = None
    grid_m: int = 1024
    n_random: int = 8
    allow_floor: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.weight_count < 3:
            raise ValueError("weight_count must be at least 3")
        if self.mode == "time" and self.chan.n_symbols < 2:
            raise ValueError("time-domain regions need N >= 2")
        if self.comparison not in COMPARISONS:
            raise ValueError(f"comparison must be one of {COMPARISONS}")


@dataclass
class RateRegion:
    """Boundary of a convex, downward-closed rate region.

    ``points`` run from the R2 axis to the R1 axis (R1 ascending, R2
    nonincreasing).  ``alloc_ids[i]`` indexes ``allocations`` and ``triples``
    (both indexed by weight); ``support[j]`` is the weighted-sum optimum for
    ``thetas[j]``.
    """

    points: np.ndarray
    point_thetas: np.ndarray
    alloc_ids: np.ndarray
    thetas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    support: np.ndarray = field(default_factory=lambda: np.zeros(0))
    triples: list = field(default_factory=list)
    allocations: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    baseline: "RateRegion | None" = None

    @property
    def endpoints(self):
        """``(max R1, max R2)``: the single-user corner rates."""
        return float(self.points[-1, 0]), float(self.points[0, 1])

    @property
    def max_sum_rate(self) -> float:
        return float(np.max(self.points.sum(axis=1)))

    @property
    def rate_scale(self) -> float:
        return self.metadata.get("rate_scale", 1.0)


def _hull_indices(pts, tol=1e-12):
    """Indices of the upper-right convex hull chain of ``pts`` (pre-sorted)."""
    chain = []
    for i in range(len(pts)):
        p = pts[i]
        while len(chain) >= 2:
            o, a = pts[chain[-2]], pts[chain[-1]]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross >= -tol * max(1.0, abs(p).max()):
                chain.pop()
            else:
                break
        chain.append(i)
    return chain


def hull_boundary(points, thetas, alloc_ids):
    """Upper-right hull of corner points plus their two axis projections.

    Returns ``(points, thetas, alloc_ids)`` ordered from the R2 axis to the
    R1 axis.
    """
    pts = np.asarray(points, dtype=float)
    th = np.asarray(thetas, dtype=float)
    ids = np.asarray(alloc_ids, dtype=int)
    top = int(np.lexsort((pts[:, 0], -pts[:, 1]))[0])      # max R2, then min R1
    right = int(np.lexsort((pts[:, 1], -pts[:, 0]))[0])    # max R1, then min R2
    pts = np.vstack([[0.0, pts[top, 1]], pts, [pts[right, 0], 0.0]])
    th = np.concatenate([[th[top]], th, [th[right]]])
    ids = np.concatenate([[ids[top]], ids, [ids[right]]])
    order = np.lexsort((-pts[:, 1], pts[:, 0]))
    pts, th, ids = pts[order], th[order], ids[order]
    # drop exact duplicates before hulling
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > 1e-15, axis=1)
    pts, th, ids = pts[keep], th[keep], ids[keep]
    chain = _hull_indices(pts)
    return pts[chain], th[chain], ids[chain]


def _turning_angle(points) -> float:
    # largest direction change between consecutive segments, excluding axis legs
    inner = points[1:-1]
    if len(inner) < 3:
        return 0.0
    seg = np.diff(inner, axis=0)
    ang = np.arctan2(seg[:, 1], seg[:, 0])
    return float(np.degrees(np.max(np.abs(np.diff(ang))))) if len(ang) > 1 else 0.0


def _weights(count):
    thetas = np.linspace(0.0, 0.5 * np.pi, count)
    mus = [(math.cos(t), math.sin(t)) for t in thetas]
    mus[0] = (1.0, 0.0)
    mus[-1] = (0.0, 1.0)
    return thetas, mus


def _corner(triple: RateTriple, mu1, mu2):
    if mu1 >= mu2:
        return triple.r1, triple.r_sum - triple.r1
    return triple.r_sum - triple.r2, triple.r2


class _Problem:
    """Normalized parallel-channel problem plus the map back to allocations."""

    def __init__(self, req: RegionRequest):
        pulse, chan = req.pulse, req.chan
        self.req = req
        dT = pulse.symbol_interval
        self.budgets = (dT * chan.power[0] / chan.sigma0_sq, dT * chan.power[1] / chan.sigma0_sq)
        if req.mode == "time":
            if not pulse.stable and not req.allow_floor:
                raise DegenerateMatrix(
                    f"delta*(1+beta) = {pulse.delta * (1 + pulse.beta):.4g} < 1; "
                    "enable eigenvalue flooring to trace this region")
            self.mats = build_interference(pulse, chan, allow_floor=req.allow_floor)
            self.coupling = self.mats.mode_coupling
            self.weights = np.full(chan.n_symbols, 1.0 / chan.n_symbols)
            self.live = np.ones(chan.n_symbols, dtype=bool)
        else:
            self.grid, quad = spectral_grid(pulse, req.grid_m)
            gd, coupling = spectral_coupling(pulse, chan.dtau, self.grid)
            self.live = gd >= DEAD_BAND
            self.quad = quad
            self.coupling = coupling[self.live]
            self.weights = quad[self.live]

    def allocation(self, x, y):
        s0 = self.req.chan.sigma0_sq
        if self.req.mode == "time":
            return ModeAllocation(s0 * x, s0 * y)
        scale = s0 / self.req.pulse.symbol_interval
        s1 = np.zeros(self.grid.shape)
        s2 = np.zeros(self.grid.shape)
        s1[self.live] = scale * x
        s2[self.live] = scale * y
        return SpectralAllocation(self.grid, self.quad, s1, s2)

    def triple(self, alloc) -> RateTriple:
        return evaluate_allocation(self.req, alloc, self)


def evaluate_allocation(req: RegionRequest, alloc, problem=None) -> RateTriple:
    """Re-evaluate an allocation snapshot to its per-symbol rate triple."""
    if req.mode == "time":
        mats = problem.mats if problem is not None else build_interference(
            req.pulse, req.chan, allow_floor=req.allow_floor)
        return rate_triple_from_modes(mats, alloc, req.chan.sigma0_sq)
    return rate_integrals(req.pulse, req.chan.dtau, alloc, req.chan.sigma0_sq)


def trace_boundary(req: RegionRequest, threads: int = 1) -> RateRegion:
    """Trace the region boundary by weighted-sum maximization.

    For ``weight_count`` angles ``theta`` in ``[0, pi/2]`` the weighted sum
    ``cos(theta) R1 + sin(theta) R2`` is maximized over feasible allocations
    (union of pentagons).  Weights are independent and may run on ``threads``
    worker threads; results are ordered by weight index.
    """
    problem = _Problem(req)
    thetas, mus = _weights(req.weight_count)
    scale = 1.0 / req.pulse.delta

    def solve(j):
        mu1, mu2 = mus[j]
        rng = np.random.default_rng([req.seed, j])
        opt = maximize_weighted(problem.coupling, problem.weights, *problem.budgets,
                                mu1, mu2, n_random=req.n_random, rng=rng)
        alloc = problem.allocation(opt.x, opt.y)
        return alloc, problem.triple(alloc)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve, range(len(thetas))))
    else:
        results = [solve(j) for j in range(len(thetas))]

    allocations = [r[0] for r in results]
    triples = [r[1] for r in results]
    corners = np.array([_corner(t, *mu) for t, mu in zip(triples, mus)]) * scale
    support = np.array([mu[0] * p[0] + mu[1] * p[1] for mu, p in zip(mus, corners)])
    pts, th, ids = hull_boundary(corners, thetas, np.arange(len(thetas)))

    meta = {
        "mode": req.mode,
        "N": req.chan.n_symbols if req.mode == "time" else "limit",
        "delta": req.pulse.delta,
        "beta": req.pulse.beta,
        "T": req.pulse.T,
        "tau": req.chan.tau,
        "snr": req.chan.snr,
        "weight_count": req.weight_count,
        "rate_scale": scale,
        "unit": "bits per T",
        "max_turning_angle_deg": _turning_angle(pts),
    }
    if req.mode == "time":
        meta["floor_applied"] = problem.mats.floor_applied
    else:
        meta["grid_m"] = int(problem.grid.size)
    region = RateRegion(points=pts, point_thetas=th, alloc_ids=ids, thetas=thetas,
                        support=support, triples=triples, allocations=allocations,
                        metadata=meta)
    if req.comparison == "synchronous":
        sync = replace(req, chan=replace(req.chan, tau=(0.0, 0.0)), comparison=None)
        region.baseline = trace_boundary(sync, threads)
    elif req.comparison == "nyquist":
        nyq = replace(req, pulse=replace(req.pulse, delta=1.0), comparison=None)
        region.baseline = trace_boundary(nyq, threads)
    elif req.comparison == "iid-baseline":
        region.baseline = iid_region(req.pulse, req.chan)
    return region


def iid_region(pulse: PulseSpec, chan: ChannelSpec) -> RateRegion:
    """Region spanned by the two successive-decoding corners with iid inputs."""
    mats = build_interference(pulse, chan)
    c1, c2 = iid_baseline_corners(mats, chan.power[0], chan.power[1], chan.sigma0_sq)
    scale = 1.0 / pulse.delta
    corners = np.array([c1, c2]) * scale
    pts, th, ids = hull_boundary(corners, [np.nan, np.nan], [-1, -1])
    meta = {"mode": "iid-baseline", "N": chan.n_symbols, "delta": pulse.delta,
            "beta": pulse.beta, "T": pulse.T, "tau": chan.tau, "snr": chan.snr,
            "rate_scale": scale, "unit": "bits per T"}
    return RateRegion(points=pts, point_thetas=th, alloc_ids=ids, metadata=meta)


def ray_radius(region: RateRegion | np.ndarray, phis) -> np.ndarray:
    """Distance from the origin to the boundary along rays at angles ``phis``."""
    pts = region.points if isinstance(region, RateRegion) else np.asarray(region, dtype=float)
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    p = pts[:-1]
    e = np.diff(pts, axis=0)
    ux, uy = np.cos(phis)[:, None], np.sin(phis)[:, None]
    # solve t*u = p + s*e for every (ray, segment)
    det = -ux * e[None, :, 1] + uy * e[None, :, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (-p[None, :, 0] * e[None, :, 1] + p[None, :, 1] * e[None, :, 0]) / det
        s = (ux * p[None, :, 1] - uy * p[None, :, 0]) / det
    ok = (np.abs(det) > 1e-300) & (s >= -1e-12) & (s <= 1 + 1e-12) & (t >= 0)
    t = np.where(ok, t, -np.inf)
    return t.max(axis=1)


def region_deviation(region: RateRegion, reference: RateRegion, n_rays: int = 181,
                     relative: bool = True) -> float:
    """Largest gap between two regions along rays from the origin."""
    phis = np.linspace(0.0, 0.5 * np.pi, n_rays)
    ra = ray_radius(region, phis)
    rb = ray_radius(reference, phis)
    gap = np.abs(ra - rb)
    if relative:
        gap = gap / rb
    return float(gap.max())


def region_contains(outer: RateRegion, inner: RateRegion, n_rays: int = 181,
                    tol: float = 1e-9) -> bool:
    """True if ``outer`` reaches at least as far as ``inner`` along every ray."""
    phis = np.linspace(0.0, 0.5 * np.pi, n_rays)
    return bool(np.all(ray_radius(outer, phis) >= ray_radius(inner, phis) - tol))


def convergence_study(pulse: PulseSpec, chan: ChannelSpec, n_list: Sequence[int],
                      reference: RateRegion, *, weight_count: int = 65,
                      n_rays: int = 181, threads: int = 1):
    """``[(N, max relative ray deviation of C_N from reference)]``."""
    if list(n_list) != sorted(n_list):
        raise ValueError("n_list must be ascending")
    rows = []
    for n in n_list:
        req = RegionRequest(pulse, replace(chan, n_symbols=int(n)), "time", weight_count)
        rows.append((int(n), region_deviation(trace_boundary(req, threads), reference, n_rays)))
    return rows


def sum_rate_capacity(pulse: PulseSpec, chan: ChannelSpec, mode: str = "time",
                      grid_m: int = 1024, n_random: int = 8) -> float:
    """Maximum of ``R1 + R2`` over the region, in bits per T."""
    problem = _Problem(RegionRequest(pulse, chan, mode, 3, grid_m=grid_m, n_random=n_random))
    opt = maximize_weighted(problem.coupling, problem.weights, *problem.budgets, 1.0, 1.0,
                            n_random=n_random)
    return problem.triple(problem.allocation(opt.x, opt.y)).r_sum / pulse.delta


@dataclass
class TauSweep:
    rows: list           # (tau, sum rate capacity in bits per T)
    argmax: int

    @property
    def best_tau(self) -> float:
        return self.rows[self.argmax][0]


def tau_sweep(pulse: PulseSpec, chan: ChannelSpec, tau_list: Sequence[float],
              n_symbols: int | None = None, mode: str = "time") -> TauSweep:
    """Sum-rate capacity for each delay difference ``tau`` (user 1 at zero delay)."""
    n = chan.n_symbols if n_symbols is None else n_symbols
    rows = []
    for tau in tau_list:
        if not 0.0 <= tau <= pulse.T:
            raise ValueError(f"tau = {tau} outside [0, T]")
        c = replace(chan, tau=(0.0, float(tau)), n_symbols=n)
        rows.append((float(tau), sum_rate_capacity(pulse, c, mode)))
    best = int(np.argmax([r[1] for r in rows]))
    return TauSweep(rows, best)


@dataclass
class ComparisonTable:
    regions: dict                 # label -> RateRegion
    checks: dict                  # check name -> bool
    details: dict = field(default_factory=dict)


def curve_label(kind: str, delta: float, beta: float, n=None) -> str:
    tail = f",N={n}" if n is not None else ""
    return f"{kind}({delta:g},{beta:g}{tail})"


def comparison_suite(pulse_variants: Sequence[tuple] = DEFAULT_VARIANTS, chan: ChannelSpec | None = None,
                     n_symbols: int = 20, *, T: float = 1.0, weight_count: int = 65,
                     iid_variant: tuple = (0.8, 0.25), threads: int = 1,
                     tol: float = 1e-9) -> ComparisonTable:
    """aMAC (``tau = delta T / 2``) and MAC (``tau = 0``) regions per ``(delta, beta)``.

    Also adds the iid baseline at ``iid_variant`` and evaluates three checks:
    equal single-user endpoints for aMAC/MAC, aMAC sum rate at least the MAC
    sum rate, and nesting of regions ordered by closeness of
    ``delta (1 + beta)`` to 1 at fixed ``beta``.
    """
    chan = ChannelSpec.from_snr(20.0, 0.0, n_symbols) if chan is None else replace(chan, n_symbols=n_symbols)
    regions, pairs = {}, {}
    for delta, beta in pulse_variants:
        pulse = PulseSpec(beta=beta, T=T, delta=delta)
        a_chan = replace(chan, tau=(0.0, 0.5 * pulse.symbol_interval))
        s_chan = replace(chan, tau=(0.0, 0.0))
        amac = trace_boundary(RegionRequest(pulse, a_chan, "time", weight_count), threads)
        mac = trace_boundary(RegionRequest(pulse, s_chan, "time", weight_count), threads)
        regions[curve_label("aMAC", delta, beta, n_symbols)] = amac
        regions[curve_label("MAC", delta, beta, n_symbols)] = mac
        pairs[(delta, beta)] = (amac, mac)
    if iid_variant is not None:
        d, b = iid_variant
        pulse = PulseSpec(beta=b, T=T, delta=d)
        regions[curve_label("iid", d, b, n_symbols)] = iid_region(
            pulse, replace(chan, tau=(0.0, 0.5 * pulse.symbol_interval)))

    endpoints_equal = all(
        np.allclose(a.endpoints, m.endpoints, rtol=0, atol=tol) for a, m in pairs.values())
    sum_gain = all(a.max_sum_rate >= m.max_sum_rate - tol for a, m in pairs.values())
    nesting = True
    by_beta = {}
    for (d, b), (amac, _) in pairs.items():
        by_beta.setdefault(b, []).append((abs(d * (1 + b) - 1.0), d, amac))
    for items in by_beta.values():
        items.sort(key=lambda it: it[0])
        for (_, _, closer), (_, _, farther) in zip(items, items[1:]):
            nesting &= region_contains(closer, farther, tol=1e-6)
    checks = {"endpoints_equal": endpoints_equal, "async_sum_gain": sum_gain,
              "ftn_nesting": nesting}
    return ComparisonTable(regions, checks)
