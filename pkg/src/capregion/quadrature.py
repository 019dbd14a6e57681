"""Composite Gauss-Legendre rules on piecewise-smooth intervals."""

from __future__ import annotations

import numpy as np

__all__ = ["composite_gauss_legendre"]


def composite_gauss_legendre(edges, n_nodes: int = 1024, order: int = 16):
    """Nodes and weights of a composite Gauss-Legendre rule.

    The interval ``[edges[0], edges[-1]]`` is split at every entry of
    ``edges``; each piece is further cut into equal sub-panels so that the
    total node count is close to ``n_nodes``.  Sub-panels are distributed in
    proportion to piece length, with at least one per piece.

    Returns
    -------
    nodes, weights : ndarray
        Sorted nodes and matching positive weights; ``weights.sum()`` equals
        the interval length to round-off.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be a strictly increasing sequence of length >= 2")
    order = int(order)
    x_ref, w_ref = np.polynomial.legendre.leggauss(order)
    lengths = np.diff(edges)
    total_panels = max(int(round(n_nodes / order)), lengths.size)
    counts = np.maximum(1, np.round(total_panels * lengths / lengths.sum()).astype(int))

    nodes, weights = [], []
    for a, b, m in zip(edges[:-1], edges[1:], counts):
        sub = np.linspace(a, b, m + 1)
        half = 0.5 * np.diff(sub)
        mid = 0.5 * (sub[:-1] + sub[1:])
        nodes.append((mid[:, None] + half[:, None] * x_ref).ravel())
        weights.append((half[:, None] * w_ref).ravel())
    return np.concatenate(nodes), np.concatenate(weights)
