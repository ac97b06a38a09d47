import math

import numpy as np
import pytest

from phasebell.bell import (
    BOUND_TOL,
    CIRELSON_BOUND,
    CLASSICAL_BOUND,
    BellReport,
    CHSHSettings,
    chsh,
    mixed_quadrant_probability,
    optimize_settings,
    wedge_inequality,
)
from phasebell.correlations import correlator_h0, correlator_hf
from phasebell.fock_oracle import parity_correlator


def h0_family(zeta):
    return lambda ta, tb: correlator_h0(zeta, ta, tb).value


def hf_family(zeta):
    return lambda ta, tb: correlator_hf(zeta, ta, tb).value


class TestChsh:
    def test_vacuum_free_family_is_trivial(self):
        report = chsh(hf_family(0.0), CHSHSettings(0.1, 0.9, 0.2, 1.4))
        assert report.chsh_value == 0.0
        assert report.classical_ok and report.cirelson_ok

    def test_combination_identity_enforced(self):
        with pytest.raises(ValueError):
            BellReport(1.0, 1.0, 1.0, 1.0, 3.0, True, True)

    def test_report_matches_manual_combination(self):
        corr = h0_family(0.8)
        s = CHSHSettings(0.1, 0.7, 0.3, 1.1)
        report = chsh(corr, s)
        manual = (corr(0.1, 0.3) + corr(0.1, 1.1) + corr(0.7, 0.3) - corr(0.7, 1.1))
        assert report.chsh_value == manual

    def test_free_saturation_at_wide_settings(self):
        tau = 1.0 - 1e-12
        corr = lambda ta, tb: correlator_hf(None, ta, tb, tau=tau).value
        report = chsh(corr, CHSHSettings(0.0, 1e3, 0.0, 1e3))
        arc_sum = (math.pi / 2.0) * report.chsh_value
        assert arc_sum == pytest.approx(math.pi, abs=5e-3)
        assert report.chsh_value == pytest.approx(2.0, abs=4e-3)
        assert report.classical_ok

    def test_settings_must_be_finite(self):
        with pytest.raises(ValueError):
            CHSHSettings(0.0, math.inf, 0.0, 1.0)


class TestOptimizeSettings:
    def test_h0_family_never_violates(self):
        result = optimize_settings(h0_family(0.5), bounds=(0.0, 2 * math.pi))
        assert result.value <= CLASSICAL_BOUND + BOUND_TOL
        assert result.converged

    @pytest.mark.parametrize("zeta", [0.5, 2.0])
    def test_both_families_bounded(self, zeta):
        for family, bounds in ((h0_family(zeta), (0.0, 2 * math.pi)),
                               (hf_family(zeta), (0.0, 50.0))):
            result = optimize_settings(family, bounds)
            assert result.value <= CLASSICAL_BOUND + BOUND_TOL

    def test_deterministic(self):
        a = optimize_settings(h0_family(1.0), bounds=(0.0, 2 * math.pi))
        b = optimize_settings(h0_family(1.0), bounds=(0.0, 2 * math.pi))
        assert a == b

    def test_fock_spin_objective_reaches_known_maximum(self):
        # feed the truncated-basis parity correlator through the optimizer
        corr = parity_correlator(0.5, 200)
        f, z = corr.sx_sx, corr.sz_sz

        def spin_pair(b1, b2):
            return f * math.sin(b1) * math.sin(b2) + z * math.cos(b1) * math.cos(b2)

        result = optimize_settings(spin_pair, bounds=(0.0, 2 * math.pi))
        want = 2.0 * math.sqrt(1.0 + math.tanh(1.0) ** 2)
        assert result.value == pytest.approx(want, abs=1e-4)
        assert result.value <= CIRELSON_BOUND + BOUND_TOL

    def test_budget_flag(self):
        result = optimize_settings(h0_family(0.5), bounds=(0.0, 2 * math.pi),
                                   max_evals=32)
        assert not result.converged

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            optimize_settings(h0_family(0.5), bounds=(0.0, math.inf))


class TestWedgeInequality:
    def test_vacuum_is_flat_one_half(self):
        for theta in (0.0, 0.3, 1.0):
            assert wedge_inequality(0.0, theta) == pytest.approx(0.5, abs=1e-12)

    def test_saturation_near_the_entangled_limit(self):
        tau = 1.0 - 1e-12
        assert wedge_inequality(None, 0.3, tau=tau) == pytest.approx(0.0, abs=1e-5)

    def test_positive_minimum_at_unit_squeeze(self):
        thetas = np.linspace(0.0, math.pi / 3.0, 101)
        values = [wedge_inequality(1.0, float(t)) for t in thetas]
        assert min(values) > 0.0
        # frozen regression baseline for the scan minimum
        assert min(values) == pytest.approx(0.0225076072, abs=1e-8)

    def test_grid_nonnegative(self):
        for zeta in (0.0, 0.5, 1.0, 2.0, 5.0):
            for theta in np.linspace(0.0, math.pi / 3.0, 26):
                assert wedge_inequality(zeta, float(theta)) >= -1e-12

    def test_tau_route_matches_state_route(self):
        for zeta in (0.3, 1.0, 2.0):
            tau = math.tanh(2.0 * zeta)
            for theta in (0.1, 0.5, 1.0):
                assert wedge_inequality(zeta, theta) == pytest.approx(
                    wedge_inequality(None, theta, tau=tau), abs=1e-12
                )


class TestMixedQuadrantProbability:
    def test_epr_limit_is_linear(self):
        tau = 1.0 - 1e-12
        for theta in (0.1, 0.3, 1.0):
            assert mixed_quadrant_probability(theta, tau=tau) == pytest.approx(
                theta / (2.0 * math.pi), abs=1e-5
            )

    def test_vacuum_is_quarter(self):
        assert mixed_quadrant_probability(0.9, 0.0) == pytest.approx(0.25, abs=1e-12)
