"""CHSH assembly, settings optimization, and the inequality checks.

The CHSH combination E(a,b) + E(a,b') + E(a',b) - E(a',b') of a pair
correlator is bounded by 2 for any hidden-variable underpinning (proper
observables against a nonnegative phase-space density) and by 2*sqrt(2)
quantum mechanically.  This module assembles reports against both bounds,
searches settings deterministically, and evaluates the wedge inequality
3 P(+,-)(theta) - P(+,-)(3 theta) >= 0 obeyed by the oscillator-evolved
sign correlations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import chsh_grid_max, coordinate_refine
from .correlations import orthant, tanh_two_zeta
from .phase_space import TwoModeMap, evolve, marginal_qq, tmss_state

__all__ = [
    "CLASSICAL_BOUND",
    "CIRELSON_BOUND",
    "BOUND_TOL",
    "CHSHSettings",
    "BellReport",
    "OptimizationResult",
    "chsh",
    "optimize_settings",
    "mixed_quadrant_probability",
    "wedge_inequality",
]

CLASSICAL_BOUND = 2.0
CIRELSON_BOUND = 2.0 * math.sqrt(2.0)
#: Absolute slack used on both bound checks (algebraic identities only).
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class CHSHSettings:
    """Measurement settings (times or angles) for (A, A', B, B')."""

    t1: float
    t1p: float
    t2: float
    t2p: float

    def __post_init__(self):
        for v in (self.t1, self.t1p, self.t2, self.t2p):
            if not math.isfinite(v):
                raise ValueError(f"settings must be finite, got {v}")

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.t1p, self.t2, self.t2p], dtype=float)


@dataclass(frozen=True)
class BellReport:
    """Four correlators, their CHSH combination, and the bound verdicts."""

    e_ab: float
    e_abp: float
    e_apb: float
    e_apbp: float
    chsh_value: float
    classical_ok: bool
    cirelson_ok: bool

    def __post_init__(self):
        combo = self.e_ab + self.e_abp + self.e_apb - self.e_apbp
        if combo != self.chsh_value:
            raise ValueError("chsh_value must equal the stated combination exactly")


def chsh(correlator, settings: CHSHSettings) -> BellReport:
    """Assemble a CHSH report from a pair correlator E(t_a, t_b) -> float.

    No thresholding is applied to the value; the report just records whether
    it sits within the classical and quantum ceilings (absolute tolerance
    ``BOUND_TOL``).
    """
    e_ab = float(correlator(settings.t1, settings.t2))
    e_abp = float(correlator(settings.t1, settings.t2p))
    e_apb = float(correlator(settings.t1p, settings.t2))
    e_apbp = float(correlator(settings.t1p, settings.t2p))
    value = e_ab + e_abp + e_apb - e_apbp
    return BellReport(
        e_ab=e_ab,
        e_abp=e_abp,
        e_apb=e_apb,
        e_apbp=e_apbp,
        chsh_value=value,
        classical_ok=abs(value) <= CLASSICAL_BOUND + BOUND_TOL,
        cirelson_ok=abs(value) <= CIRELSON_BOUND + BOUND_TOL,
    )


@dataclass(frozen=True)
class OptimizationResult:
    settings: CHSHSettings
    value: float
    converged: bool


def optimize_settings(correlator, bounds=(0.0, 2.0 * math.pi),
                      grid_points: int = 32, refine_tol: float = 1e-6,
                      max_evals: int = 20000) -> OptimizationResult:
    """Deterministic search for the settings maximizing |CHSH|.

    Coarse scan on a shared per-axis grid over ``bounds`` (the four-index
    combination separates, so the scan is cubic, not quartic in the grid
    size), then coordinate-descent refinement down to ``refine_tol``.  The
    reported value is a certified lower bound on the supremum; ``converged``
    is False when the refinement budget ran out first.  Ties break toward
    the lexicographically smallest settings.
    """
    lo, hi = float(bounds[0]), float(bounds[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise ValueError(f"bounds must be a finite box, got {bounds}")
    grid = np.linspace(lo, hi, grid_points, endpoint=False)
    e_matrix = np.empty((grid_points, grid_points))
    for i, ta in enumerate(grid):
        for k, tb in enumerate(grid):
            e_matrix[i, k] = correlator(ta, tb)
    _, start = chsh_grid_max(e_matrix, grid)

    def objective(x):
        return abs(
            correlator(x[0], x[2]) + correlator(x[0], x[3])
            + correlator(x[1], x[2]) - correlator(x[1], x[3])
        )

    span = float(grid[1] - grid[0])
    x, value, converged = coordinate_refine(
        objective, np.array(start), span, tol=refine_tol, max_evals=max_evals
    )
    return OptimizationResult(
        settings=CHSHSettings(*x), value=float(value), converged=converged
    )


def mixed_quadrant_probability(theta: float, zeta: float | None = None, *,
                               tau: float | None = None) -> float:
    """P(+,-) of the oscillator-evolved state at total angle theta.

    For a given ``zeta`` the probability is taken from the evolved state's
    position marginal through the full pipeline (evolve, marginalize,
    orthant); ``tau`` evaluates the same quantity through the marginal
    correlation tau * cos(theta) directly, which stays accurate arbitrarily
    close to the maximally entangled limit.
    """
    if tau is not None:
        strength = tanh_two_zeta(None, tau)
        return orthant(strength * math.cos(theta)).p_pm
    state = evolve(tmss_state(zeta), TwoModeMap.harmonic(theta, 0.0))
    _, rho = marginal_qq(state)
    return orthant(rho).p_pm


def wedge_inequality(zeta: float | None, theta: float, *,
                     tau: float | None = None) -> float:
    """Wedge combination 3 P(+,-)(theta) - P(+,-)(3*theta).

    Nonnegative for every squeeze strength when theta stays in [0, pi/3]
    (so that 3*theta remains on the monotone branch); it tends to zero from
    above in the maximally entangled limit, where P(+,-) becomes linear in
    the angle.
    """
    if tau is not None:
        p1 = mixed_quadrant_probability(theta, tau=tau)
        p3 = mixed_quadrant_probability(3.0 * theta, tau=tau)
    else:
        p1 = mixed_quadrant_probability(theta, zeta)
        p3 = mixed_quadrant_probability(3.0 * theta, zeta)
    return 3.0 * p1 - p3
