"""Weighted-sum maximization over parallel coupled channels.

Both the finite-N mode domain and the frequency domain reduce to the same
problem.  With normalized powers ``x_i, y_i >= 0``, channel weights ``w_i`` and
coupling ``k_i = 1 - |lambda_i|^2`` in ``[0, 1]``::

    A(x)    = sum_i w_i ln(1 + x_i)
    B(y)    = sum_i w_i ln(1 + y_i)
    C(x, y) = sum_i w_i ln(1 + x_i + y_i + k_i x_i y_i)

subject to ``sum_i w_i x_i <= X`` and ``sum_i w_i y_i <= Y``.  For weights
``mu1 >= mu2`` the best pentagon corner is ``(A, C - A)`` and the objective is
``(mu1 - mu2) A + mu2 C``; the other case is symmetric.  Every term is jointly
concave on the nonnegative orthant, so the optimum is found by a log-barrier
Newton ascent on the two budget hyperplanes, restarted from several feasible
points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OptimizerStalled

__all__ = ["water_fill", "corner_coefficients", "objective", "WeightedOptimum",
           "maximize_weighted", "solve_barrier"]

_BARRIER_START = 1e-2
_BARRIER_STAGES = 13          # down to 1e-14
_BARRIER_STEP = 0.1
_NEWTON_CAP = 200
_DECREMENT_TOL = 1e-15
# accepted decrement when rounding blocks any further ascent
_STUCK_TOL = 1e-9


def water_fill(floors, weights, budget: float) -> np.ndarray:
    """Maximize ``sum w_i ln(h_i + x_i)`` subject to ``sum w_i x_i = budget``.

    Closed form ``x_i = max(0, L - h_i)`` with the water level ``L`` found by
    sorting the floors.
    """
    h = np.asarray(floors, dtype=float)
    w = np.asarray(weights, dtype=float)
    if budget <= 0.0:
        return np.zeros_like(h)
    order = np.argsort(h, kind="stable")
    hs, ws = h[order], w[order]
    cw = np.cumsum(ws)
    cwh = np.cumsum(ws * hs)
    # level if the first j+1 channels are active
    levels = (budget + cwh) / cw
    nxt = np.append(hs[1:], np.inf)
    j = int(np.argmax(levels <= nxt))
    level = levels[j]
    return np.maximum(level - h, 0.0)


def corner_coefficients(mu1: float, mu2: float):
    """Coefficients ``(a, b, c)`` of ``A``, ``B`` and ``C`` in the weighted objective."""
    if mu1 >= mu2:
        return mu1 - mu2, 0.0, mu2
    return 0.0, mu2 - mu1, mu1


def objective(x, y, coupling, weights, a, b, c) -> float:
    t = a * np.log1p(x) + b * np.log1p(y) + c * np.log1p(x + y + coupling * x * y)
    return float(np.dot(weights, t))


@dataclass
class WeightedOptimum:
    x: np.ndarray
    y: np.ndarray
    value: float
    newton_steps: int
    start: str


def _barrier_value(x, y, k, w, a, b, c, mu):
    if np.any(x <= 0) or np.any(y <= 0):
        return -np.inf
    t = (a * np.log1p(x) + b * np.log1p(y) + c * np.log1p(x + y + k * x * y)
         + mu * (np.log(x) + np.log(y)))
    return float(np.dot(w, t))


def solve_barrier(k, w, a, b, c, budget_x, budget_y, x0, y0):
    """Log-barrier Newton ascent from a strictly feasible ``(x0, y0)``.

    The Hessian is block diagonal with one 2x2 block per channel, so each
    equality-constrained Newton step costs a 2x2 Schur solve.  Returns
    ``(x, y, newton_steps)``.
    """
    x = np.array(x0, dtype=float)
    y = np.array(y0, dtype=float)
    # start exactly on the budget hyperplanes
    x *= budget_x / np.dot(w, x)
    y *= budget_y / np.dot(w, y)
    steps = 0
    for stage in range(_BARRIER_STAGES):
        mu = _BARRIER_START * _BARRIER_STEP ** stage
        converged = False
        for _ in range(_NEWTON_CAP):
            steps += 1
            d = 1.0 + x + y + k * x * y
            px = 1.0 + k * y
            py = 1.0 + k * x
            gx = a / (1.0 + x) + c * px / d + mu / x
            gy = b / (1.0 + y) + c * py / d + mu / y
            # negated Hessian blocks, all terms nonnegative
            u = a / (1.0 + x) ** 2 + mu / x ** 2
            v = b / (1.0 + y) ** 2 + mu / y ** 2
            qxx = u + c * px * px / d ** 2
            qyy = v + c * py * py / d ** 2
            qxy = c * (1.0 - k) / d ** 2
            det = (u * v + c * (u * py * py + v * px * px) / d ** 2
                   + c * c * k * (px * py + 1.0 - k) / d ** 3)
            # inverse of the negated block, scaled by 1/w
            ixx = qyy / (det * w)
            iyy = qxx / (det * w)
            ixy = -qxy / (det * w)
            gxw, gyw = w * gx, w * gy
            hx = ixx * gxw + ixy * gyw
            hy = ixy * gxw + iyy * gyw
            s11 = np.dot(w, ixx * w)
            s12 = np.dot(w, ixy * w)
            s22 = np.dot(w, iyy * w)
            r1 = np.dot(w, hx)
            r2 = np.dot(w, hy)
            det_s = s11 * s22 - s12 * s12
            nu1 = (s22 * r1 - s12 * r2) / det_s
            nu2 = (s11 * r2 - s12 * r1) / det_s
            dx = hx - (ixx * w * nu1 + ixy * w * nu2)
            dy = hy - (ixy * w * nu1 + iyy * w * nu2)
            # the Schur solve loses digits when a block is nearly singular;
            # restore A d = 0 exactly
            ww = np.dot(w, w)
            dx -= w * (np.dot(w, dx) / ww)
            dy -= w * (np.dot(w, dy) / ww)
            dec = float(np.dot(gxw, dx) + np.dot(gyw, dy))
            if dec <= _DECREMENT_TOL:
                converged = True
                break
            step = 1.0
            neg_x, neg_y = dx < 0, dy < 0
            if neg_x.any():
                step = min(step, 0.99 * float(np.min(-x[neg_x] / dx[neg_x])))
            if neg_y.any():
                step = min(step, 0.99 * float(np.min(-y[neg_y] / dy[neg_y])))
            f0 = _barrier_value(x, y, k, w, a, b, c, mu)
            for _ in range(60):
                f1 = _barrier_value(x + step * dx, y + step * dy, k, w, a, b, c, mu)
                if f1 >= f0 + 0.25 * step * dec:
                    break
                step *= 0.5
            if not f1 > f0:
                # no representable improvement left at this barrier weight
                converged = dec < _STUCK_TOL
                break
            x = x + step * dx
            y = y + step * dy
            x *= budget_x / np.dot(w, x)
            y *= budget_y / np.dot(w, y)
        if not converged:
            raise OptimizerStalled(
                f"Newton ascent did not converge at barrier weight {mu:.1e} "
                f"(decrement {dec:.3e})", last_iterate=(x, y))
    return x, y, steps


def _lexicographic_endpoint(k, w, budget_x, budget_y, first_user):
    # maximize the own single-user rate, then the other user's corner rate
    if first_user == 1:
        x = water_fill(np.ones_like(k), w, budget_x)
        y = water_fill((1.0 + x) / (1.0 + k * x), w, budget_y)
    else:
        y = water_fill(np.ones_like(k), w, budget_y)
        x = water_fill((1.0 + y) / (1.0 + k * y), w, budget_x)
    return x, y


def maximize_weighted(coupling, weights, budget_x: float, budget_y: float,
                      mu1: float, mu2: float, *, n_random: int = 8,
                      rng: np.random.Generator | None = None) -> WeightedOptimum:
    """Maximize ``mu1 R1 + mu2 R2`` over the union of pentagons.

    Axis weights (``mu1 == 0`` or ``mu2 == 0``) are solved lexicographically in
    closed form so the region endpoints carry the best corner.  Otherwise the
    barrier ascent runs from a flat start, a water-filling pair and
    ``n_random`` random feasible points; the best result is kept.
    """
    k = np.asarray(coupling, dtype=float)
    w = np.asarray(weights, dtype=float)
    a, b, c = corner_coefficients(mu1, mu2)
    if mu2 == 0.0 or mu1 == 0.0:
        x, y = _lexicographic_endpoint(k, w, budget_x, budget_y, 1 if mu2 == 0.0 else 2)
        return WeightedOptimum(x, y, objective(x, y, k, w, a, b, c), 0, "lexicographic")

    total = w.sum()
    starts = [("flat", np.full_like(k, budget_x / total), np.full_like(k, budget_y / total))]
    wx = water_fill(np.ones_like(k), w, budget_x)
    wy = water_fill((1.0 + wx) / (1.0 + k * wx), w, budget_y)
    starts.append(("water-filling", wx + 1e-3 * budget_x / total, wy + 1e-3 * budget_y / total))
    rng = np.random.default_rng(0) if rng is None else rng
    for i in range(n_random):
        starts.append((f"random-{i}", rng.random(k.size) + 0.05, rng.random(k.size) + 0.05))

    best = None
    for name, x0, y0 in starts:
        x, y, steps = solve_barrier(k, w, a, b, c, budget_x, budget_y, x0, y0)
        val = objective(x, y, k, w, a, b, c)
        if best is None or val > best.value:
            best = WeightedOptimum(x, y, val, steps, name)
    return best
