"""Deterministic grid + coordinate-descent search for CHSH-type objectives."""

from __future__ import annotations

import numpy as np

__all__ = ["chsh_grid_max", "coordinate_refine"]


def chsh_grid_max(e_matrix: np.ndarray, grid: np.ndarray):
    """Maximize |E[i,k] + E[i,l] + E[j,k] - E[j,l]| over a shared grid.

    ``e_matrix[i, k]`` holds the correlator at (grid[i], grid[k]).  The
    combination separates for fixed (i, j) into max_k (E[i,k] + E[j,k]) plus
    max_l (E[i,l] - E[j,l]), so the scan is O(n^3).  Ties resolve to the
    lexicographically smallest index tuple.  Returns (value, (t1, t1p, t2, t2p)).
    """
    n = e_matrix.shape[0]
    best_val = -np.inf
    best_idx = (0, 0, 0, 0)
    for i in range(n):
        for j in range(n):
            s1 = e_matrix[i] + e_matrix[j]
            s2 = e_matrix[i] - e_matrix[j]
            k_hi, l_hi = int(np.argmax(s1)), int(np.argmax(s2))
            k_lo, l_lo = int(np.argmin(s1)), int(np.argmin(s2))
            hi = s1[k_hi] + s2[l_hi]
            lo = -(s1[k_lo] + s2[l_lo])
            if hi > best_val:
                best_val, best_idx = hi, (i, j, k_hi, l_hi)
            if lo > best_val:
                best_val, best_idx = lo, (i, j, k_lo, l_lo)
    i, j, k, l = best_idx
    return float(best_val), (grid[i], grid[j], grid[k], grid[l])


def coordinate_refine(objective, x0, span, tol: float = 1e-6,
                      max_evals: int = 20000):
    """Coordinate descent maximizing ``objective`` starting from ``x0``.

    Scans each coordinate at +-span, keeps improving moves, halves the span
    when a full sweep yields none, and stops once span < tol or the
    evaluation budget is spent.  Returns (x, value, converged).
    """
    x = np.array(x0, dtype=float)
    value = float(objective(x))
    evals = 1
    while span >= tol:
        moved = False
        for k in range(x.size):
            for delta in (-span, span):
                if evals >= max_evals:
                    return x, value, False
                trial = x.copy()
                trial[k] += delta
                tv = float(objective(trial))
                evals += 1
                if tv > value:
                    x, value, moved = trial, tv, True
        if not moved:
            span /= 2.0
    return x, value, True
