"""Runnable acceptance criteria: one function per criterion, shared by CLI and tests.

Each criterion function returns a :class:`CriterionResult` carrying the
verdict, a human-readable detail string, the elapsed time, and every CHSH
value it produced (the quantum-ceiling criterion audits the collected
values).  ``run_all`` executes the suite in order and appends the ceiling
audit at the end.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import bell, correlations, fock_oracle, observables, phase_space, superposition

__all__ = ["AcceptanceConfig", "CriterionResult", "run_all", "CRITERIA"]


@dataclass(frozen=True)
class AcceptanceConfig:
    samples: int = 10**7
    fock_n: int = 200
    seed: int = 20260809
    quad_order: int = 64
    flip_sign_convention: bool = False
    mc_gate_sigmas: float = 4.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    elapsed: float = 0.0
    chsh_values: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d}: {self.title} ({self.detail}; {self.elapsed:.1f}s)"


def _timed(fn):
    def wrapper(config: AcceptanceConfig) -> CriterionResult:
        t0 = time.perf_counter()
        result = fn(config)
        result.elapsed = time.perf_counter() - t0
        return result

    return wrapper


@_timed
def criterion_1(config: AcceptanceConfig) -> CriterionResult:
    """Spin-parity maximal violation equals 2 sqrt(1 + tanh(2 zeta)^2)."""
    worst = 0.0
    values = []
    for zeta in (0.0, 0.25, 0.5, 1.0, 2.0):
        got = fock_oracle.spin_bell_max(zeta, config.fock_n)
        want = 2.0 * math.sqrt(1.0 + math.tanh(2.0 * zeta) ** 2)
        worst = max(worst, abs(got - want))
        values.append(got)
    passed = worst <= 1e-4
    return CriterionResult(1, "spin-parity maximal violation", passed,
                           f"max |opt - closed| = {worst:.2e} (tol 1e-4)",
                           chsh_values=values)


@_timed
def criterion_2(config: AcceptanceConfig) -> CriterionResult:
    """Sign-parity violation matches 2 sqrt(2) (2/pi) arctan(sinh 2 zeta); crossing found."""
    worst = 0.0
    values = []
    for zeta in (0.5, 1.0, 2.0):
        got, _ = fock_oracle.pi_chsh_optimum(zeta, config.fock_n)
        want = 2.0 * math.sqrt(2.0) * (2.0 / math.pi) * math.atan(math.sinh(2.0 * zeta))
        worst = max(worst, abs(got - want))
        values.append(got)
    zstar = brentq(
        lambda z: fock_oracle.pi_chsh_optimum(z, config.fock_n)[0] - 2.0,
        0.3, 1.2, xtol=1e-4,
    )
    zstar_closed = brentq(
        lambda z: math.atan(math.sinh(2.0 * z)) - math.pi / (2.0 * math.sqrt(2.0)),
        0.1, 2.0, xtol=1e-12,
    )
    cross_err = abs(zstar - zstar_closed)
    passed = worst <= 5e-3 and cross_err <= 1e-3
    return CriterionResult(
        2, "sign-parity violation and classical crossing", passed,
        f"max |opt - closed| = {worst:.2e} (tol 5e-3), "
        f"zeta* = {zstar:.5f} vs {zstar_closed:.5f} (tol 1e-3)",
        chsh_values=values,
    )


@_timed
def criterion_3(config: AcceptanceConfig) -> CriterionResult:
    """<Sx Sx> equals tanh(2 zeta) to 1e-8 at the default truncation."""
    worst = 0.0
    for zeta in (0.0, 0.25, 0.5, 0.75, 1.0):
        got = fock_oracle.parity_correlator(zeta, config.fock_n).sx_sx
        worst = max(worst, abs(got - math.tanh(2.0 * zeta)))
    return CriterionResult(3, "parity-flip correlator law", worst <= 1e-8,
                           f"max |<SxSx> - tanh(2z)| = {worst:.2e} (tol 1e-8)")


@_timed
def criterion_4(config: AcceptanceConfig) -> CriterionResult:
    """Oscillator-evolution correlator: closed vs orthant vs quadrature vs Monte-Carlo."""
    grid = (0.0, 0.25, 0.5, 1.0, 2.0)
    dv1 = observables.sign_of_linear(1)
    dv2 = observables.sign_of_linear(2)
    worst_orthant = worst_quad = worst_mc_sigmas = 0.0
    idx = 0
    for zeta in grid:
        for theta in grid:
            closed = correlations.correlator_h0(zeta, theta, 0.0).value
            state = phase_space.evolve(
                phase_space.tmss_state(
                    zeta, flip_sign_convention=config.flip_sign_convention
                ),
                phase_space.TwoModeMap.harmonic(theta, 0.0),
            )
            orth = correlations.correlator_orthant(state, dv1, dv2).value
            quad = correlations.correlator_numeric(state, dv1, dv2, "quadrature").value
            mc = correlations.correlator_numeric(
                state, dv1, dv2, "monte-carlo",
                samples=config.samples, seed=config.seed + idx,
            )
            idx += 1
            worst_orthant = max(worst_orthant, abs(closed - orth))
            worst_quad = max(worst_quad, abs(closed - quad))
            gate = config.mc_gate_sigmas * max(mc.stderr, 1e-15)
            worst_mc_sigmas = max(worst_mc_sigmas, abs(closed - mc.value) / gate)
    passed = worst_orthant <= 1e-6 and worst_quad <= 1e-6 and worst_mc_sigmas <= 1.0
    return CriterionResult(
        4, "oscillator correlator quadruple agreement", passed,
        f"|closed-orthant| = {worst_orthant:.2e}, |closed-quadrature| = "
        f"{worst_quad:.2e} (tol 1e-6), Monte-Carlo at {worst_mc_sigmas:.2f} "
        f"of the {config.mc_gate_sigmas:.0f}-sigma gate",
    )


@_timed
def criterion_5(config: AcceptanceConfig) -> CriterionResult:
    """Near the maximally entangled limit, P(+,-) is linear: theta / (2 pi)."""
    tau = 1.0 - 1e-12
    worst = 0.0
    for theta in (0.1, 0.3, 1.0):
        got = bell.mixed_quadrant_probability(theta, tau=tau)
        worst = max(worst, abs(got - theta / (2.0 * math.pi)))
    return CriterionResult(5, "maximally entangled linear-probability limit",
                           worst <= 1e-5,
                           f"max |P - theta/2pi| = {worst:.2e} (tol 1e-5)")


@_timed
def criterion_6(config: AcceptanceConfig) -> CriterionResult:
    """Wedge inequality holds on the grid and saturates in the entangled limit."""
    thetas = [k * math.pi / 300.0 for k in range(101)]
    wedge_min = math.inf
    for zeta in (0.0, 0.5, 1.0, 2.0, 5.0):
        for theta in thetas:
            wedge_min = min(wedge_min, bell.wedge_inequality(zeta, theta))
    tau = 1.0 - 1e-12
    sat_min, sat_max = math.inf, -math.inf
    for theta in thetas:
        w = bell.wedge_inequality(None, theta, tau=tau)
        sat_min, sat_max = min(sat_min, w), max(sat_max, w)
    passed = wedge_min >= -1e-12 and sat_min >= -1e-12 and sat_max <= 1e-5
    return CriterionResult(
        6, "wedge inequality and its saturation", passed,
        f"grid min = {wedge_min:.2e} (>= -1e-12), saturation range "
        f"[{sat_min:.2e}, {sat_max:.2e}] (<= 1e-5)",
    )


@_timed
def criterion_7(config: AcceptanceConfig) -> CriterionResult:
    """Free-evolution CHSH saturates: arcsine sum reaches pi at wide settings."""
    tau = 1.0 - 1e-12
    big_t = 1e3
    settings = bell.CHSHSettings(0.0, big_t, 0.0, big_t)
    report = bell.chsh(
        lambda ta, tb: correlations.correlator_hf(None, ta, tb, tau=tau).value,
        settings,
    )
    arc_sum = (math.pi / 2.0) * report.chsh_value
    passed = abs(arc_sum - math.pi) <= 5e-3 and abs(report.chsh_value - 2.0) <= 4e-3
    return CriterionResult(
        7, "free-evolution CHSH saturation", passed,
        f"arcsine sum = pi {arc_sum - math.pi:+.2e} (tol 5e-3), "
        f"CHSH = 2 {report.chsh_value - 2.0:+.2e} (tol 4e-3)",
        chsh_values=[report.chsh_value],
    )


@_timed
def criterion_8(config: AcceptanceConfig) -> CriterionResult:
    """No settings choice beats the classical bound for proper sign observables."""
    worst = -math.inf
    values = []
    for zeta in (0.5, 2.0):
        for family, bounds in (
            (lambda ta, tb, z=zeta: correlations.correlator_h0(z, ta, tb).value,
             (0.0, 2.0 * math.pi)),
            (lambda ta, tb, z=zeta: correlations.correlator_hf(z, ta, tb).value,
             (0.0, 50.0)),
        ):
            result = bell.optimize_settings(family, bounds)
            worst = max(worst, result.value)
            values.append(result.value)
    passed = worst <= bell.CLASSICAL_BOUND + bell.BOUND_TOL
    return CriterionResult(
        8, "phase-space optimum respects the classical bound", passed,
        f"largest optimum = {worst:.9f} (<= 2 + 1e-9)", chsh_values=values,
    )


def criterion_9(results) -> CriterionResult:
    """Every CHSH value produced in the suite sits under the quantum ceiling."""
    t0 = time.perf_counter()
    collected = [v for r in results for v in r.chsh_values]
    worst = max((abs(v) for v in collected), default=0.0)
    passed = worst <= bell.CIRELSON_BOUND + bell.BOUND_TOL
    return CriterionResult(
        9, "quantum ceiling on every CHSH value", passed,
        f"max |CHSH| over {len(collected)} values = {worst:.9f} "
        f"(<= 2 sqrt(2) + 1e-9)", elapsed=time.perf_counter() - t0,
    )


@_timed
def criterion_10(config: AcceptanceConfig) -> CriterionResult:
    """Rotated superposition exhibits a strict Wigner negativity witness."""
    _, neg = superposition.min_wigner_scan(
        superposition.rotated_state(0.5, math.pi / 4.0), 4.0, 21
    )
    _, base = superposition.min_wigner_scan(
        superposition.rotated_state(0.5, 0.0), 4.0, 21
    )
    passed = neg < -1e-4 and base >= 0.0
    return CriterionResult(
        10, "Wigner negativity witness", passed,
        f"rotated min = {neg:.6f} (< -1e-4), squeezed-state min = {base:.2e} (>= 0)",
    )


@_timed
def criterion_11(config: AcceptanceConfig) -> CriterionResult:
    """Properness catalog verdicts and closure under canonical maps."""
    verdicts_ok = (
        observables.classify(observables.sign_of_linear(1)).proper
        and observables.classify(observables.function_of_linear(1)).proper
        and not observables.classify(observables.parity_z(1)).proper
        and not observables.classify(observables.parity_y_singular(1)).proper
        and not observables.classify(observables.quadratic_ho(1)).proper
    )
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    closure_ok = True
    for _ in range(1000):
        a, b, c = rng.uniform(-2.0, 2.0, size=3)
        a = a if abs(a) > 1e-3 else 1.0
        smap = phase_space.SymplecticMap(a, b, c, (1.0 + b * c) / a)
        for dv in (observables.sign_of_linear(1, 1.0, 0.0),
                   observables.function_of_linear(2, 0.3, -1.1)):
            moved = observables.transform_dv(dv, smap)
            if not observables.classify(moved).proper:
                closure_ok = False
    passed = verdicts_ok and closure_ok
    return CriterionResult(
        11, "properness catalog and closure", passed,
        f"catalog verdicts {'ok' if verdicts_ok else 'WRONG'}, closure over "
        f"1000 random maps {'ok' if closure_ok else 'BROKEN'}",
    )


def _harmonic_expected_matrix(zeta: float, t1: float, t2: float) -> np.ndarray:
    c, s = math.cosh(2.0 * zeta), math.sinh(2.0 * zeta)
    theta = t1 + t2
    m = np.diag([c, c, c, c])
    m[0, 1] = m[1, 0] = -s * math.cos(theta)
    m[2, 3] = m[3, 2] = s * math.cos(theta)
    m[0, 3] = m[3, 0] = s * math.sin(theta)
    m[1, 2] = m[2, 1] = s * math.sin(theta)
    return m


def _free_expected_matrix(zeta: float, t1: float, t2: float) -> np.ndarray:
    c, s = math.cosh(2.0 * zeta), math.sinh(2.0 * zeta)
    m = np.zeros((4, 4))
    m[0, 0] = m[1, 1] = c
    m[2, 2] = c * (1.0 + t1 * t1)
    m[3, 3] = c * (1.0 + t2 * t2)
    m[0, 1] = m[1, 0] = -s
    m[0, 2] = m[2, 0] = -c * t1
    m[1, 3] = m[3, 1] = -c * t2
    m[0, 3] = m[3, 0] = s * t2
    m[1, 2] = m[2, 1] = s * t1
    m[2, 3] = m[3, 2] = s * (1.0 - t1 * t2)
    return m


@_timed
def criterion_12(config: AcceptanceConfig) -> CriterionResult:
    """Evolution reproduces both evolved-exponent structures coefficientwise."""
    rng = np.random.Generator(np.random.Philox(key=config.seed + 1))
    worst = 0.0
    for _ in range(100):
        zeta = rng.uniform(0.0, 1.25)
        t1, t2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
        state = phase_space.tmss_state(zeta)
        harmonic = phase_space.evolve(state, phase_space.TwoModeMap.harmonic(t1, t2))
        worst = max(worst, float(np.max(np.abs(
            harmonic.matrix - _harmonic_expected_matrix(zeta, t1, t2)
        ))))
        free = phase_space.evolve(state, phase_space.TwoModeMap.free(t1, t2))
        worst = max(worst, float(np.max(np.abs(
            free.matrix - _free_expected_matrix(zeta, t1, t2)
        ))))
    return CriterionResult(
        12, "evolution matches both evolved exponents", worst <= 1e-12,
        f"max coefficient deviation = {worst:.2e} (tol 1e-12)",
    )


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_10, criterion_11,
    criterion_12,
]

_RUNTIME_LIMITS = {1: 30.0, 2: 120.0, 4: 300.0, 10: 60.0}


def run_all(config: AcceptanceConfig | None = None) -> list[CriterionResult]:
    """Run the full acceptance suite; returns results ordered by criterion number."""
    config = config or AcceptanceConfig()
    results = [fn(config) for fn in CRITERIA]
    for r in results:
        limit = _RUNTIME_LIMITS.get(r.number)
        if limit is not None and r.elapsed > limit:
            r.passed = False
            r.detail += f"; RUNTIME {r.elapsed:.1f}s exceeds {limit:.0f}s"
    results.append(criterion_9(results))
    results.sort(key=lambda r: r.number)
    return results
