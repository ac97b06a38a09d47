import math

import numpy as np
import pytest

from phasebell.fock_oracle import (
    hermite_functions,
    parity_correlator,
    parity_matrices,
    pi_chsh_fock,
    pi_chsh_optimum,
    pi_matrices,
    position_function_matrix,
    rotated_parity,
    schmidt_expectation,
    sign_operator_matrix,
    spin_bell_max,
    tmss_coeffs,
)

from oracles import sign_matrix_boundary_formula

CIRELSON = 2.0 * math.sqrt(2.0)


def pi_closed_form(zeta):
    return CIRELSON * (2.0 / math.pi) * math.atan(math.sinh(2.0 * zeta))


class TestAmplitudes:
    def test_vacuum(self):
        amps = tmss_coeffs(0.0, 50)
        assert amps.coeffs[0] == 1.0
        assert np.all(amps.coeffs[1:] == 0.0)
        assert amps.norm_deficit == 0.0

    def test_half_zeta_deep_truncation(self):
        amps = tmss_coeffs(0.5, 100)
        assert amps.norm_deficit <= math.tanh(0.5) ** 202
        assert amps.norm_deficit < 1e-60

    def test_large_zeta_deficit(self):
        amps = tmss_coeffs(2.0, 400)
        assert amps.norm_deficit < 1e-12
        assert amps.warning is None

    def test_deficit_bounded_by_geometric_tail(self):
        for zeta in (0.25, 0.5, 1.0, 2.0):
            for n in (20, 50, 100):
                amps = tmss_coeffs(zeta, n)
                assert np.sum(amps.coeffs**2) <= 1.0 + 1e-15
                assert amps.norm_deficit <= amps.tail_bound + 1e-15

    def test_warning_channel_instead_of_failure(self):
        amps = tmss_coeffs(2.0, 20)
        assert amps.warning is not None
        assert "truncation" in amps.warning

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            tmss_coeffs(math.nan, 10)
        with pytest.raises(ValueError):
            tmss_coeffs(0.5, -1)


class TestParityMatrices:
    def test_hermitian(self):
        mats = parity_matrices(31)
        for s in (mats.sx, mats.sy, mats.sz):
            assert np.allclose(s, np.conj(s.T))

    def test_squares_to_identity_with_odd_truncation(self):
        mats = parity_matrices(31)  # all doublets complete
        for s in (mats.sx, mats.sy, mats.sz):
            assert np.allclose(s @ s, np.eye(32))

    def test_square_defect_only_at_edge_for_even_truncation(self):
        mats = parity_matrices(30)  # level 30 unpaired
        defect = mats.sx @ mats.sx - np.eye(31)
        assert np.allclose(defect[:30, :30], 0.0)
        assert defect[30, 30] == -1.0

    def test_su2_commutators(self):
        mats = parity_matrices(31)
        assert np.allclose(
            mats.sx @ mats.sy - mats.sy @ mats.sx, 2j * mats.sz.astype(complex)
        )
        mats_even = parity_matrices(30)
        comm = mats_even.sx @ mats_even.sy - mats_even.sy @ mats_even.sx
        assert np.allclose((comm - 2j * mats_even.sz)[:30, :30], 0.0)


class TestParityCorrelator:
    def test_vacuum(self):
        corr = parity_correlator(0.0, 100)
        assert corr.sz_sz == 1.0
        assert corr.sx_sx == 0.0

    @pytest.mark.parametrize("zeta", [0.5, 1.0])
    def test_flip_law(self, zeta):
        corr = parity_correlator(zeta, 200)
        assert corr.sx_sx == pytest.approx(math.tanh(2 * zeta), abs=1e-10)

    def test_convergence_with_truncation(self):
        target = math.tanh(2.0)
        for n in (50, 100, 200):
            got = parity_correlator(1.0, n).sx_sx
            assert abs(got - target) <= tmss_coeffs(1.0, n).tail_bound + 1e-14

    def test_pair_sum_agrees_with_dense_matrices(self):
        amps = tmss_coeffs(0.8, 200)
        mats = parity_matrices(200)
        corr = parity_correlator(0.8, 200)
        assert schmidt_expectation(amps, mats.sx, mats.sx) == pytest.approx(
            corr.sx_sx, abs=1e-14
        )
        assert schmidt_expectation(amps, mats.sz, mats.sz) == pytest.approx(
            corr.sz_sz, abs=1e-14
        )


class TestRotatedParity:
    def test_zero_angle(self):
        mats = parity_matrices(40)
        assert np.allclose(rotated_parity(mats, 0.0), mats.sx)

    def test_half_turn(self):
        mats = parity_matrices(40)
        assert np.allclose(rotated_parity(mats, math.pi), -mats.sx, atol=1e-12)

    def test_quarter_turn_gives_negative_partner(self):
        mats = parity_matrices(40)
        assert np.allclose(rotated_parity(mats, math.pi / 2), -mats.sy, atol=1e-12)


class TestSpinBellMax:
    def test_vacuum_reaches_classical_bound(self):
        assert spin_bell_max(0.0, 100) == pytest.approx(2.0, abs=1e-6)

    def test_matches_closed_form(self):
        got = spin_bell_max(0.5, 200)
        assert got == pytest.approx(2.0 * math.sqrt(1 + math.tanh(1.0) ** 2), abs=1e-4)

    def test_large_squeeze_approaches_ceiling(self):
        got = spin_bell_max(5.0, 60000)
        assert got == pytest.approx(CIRELSON, abs=1e-3)

    def test_monotone_and_bounded(self):
        values = [
            spin_bell_max(z, 60000) for z in (0.0, 0.5, 1.0, 2.0, 5.0)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert all(v <= CIRELSON + 1e-9 for v in values)


class TestSignMatrix:
    def test_quadrature_matches_boundary_formula(self):
        got = sign_operator_matrix(120, order=3200)
        exact = sign_matrix_boundary_formula(120)
        assert np.max(np.abs(got - exact)) < 2e-3
        assert got[0, 1] == pytest.approx(math.sqrt(2.0 / math.pi), abs=2e-3)

    def test_boundary_formula_base_case(self):
        exact = sign_matrix_boundary_formula(3)
        assert exact[0, 1] == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-14)

    def test_parity_selection_exact(self):
        g = sign_operator_matrix(60, order=800)
        n = np.arange(61)
        same = (n[:, None] % 2) == (n[None, :] % 2)
        assert np.all(g[same] == 0.0)

    def test_symmetric(self):
        g = sign_operator_matrix(60, order=800)
        assert np.allclose(g, g.T)

    def test_smooth_function_matrix_is_spectrally_accurate(self):
        t = position_function_matrix(np.tanh, 40, 400)
        t2 = position_function_matrix(np.tanh, 40, 800)
        assert np.max(np.abs(t - t2)) < 1e-12


class TestPiConfiguration:
    def test_pi_y_structure(self):
        pi_x, pi_y = pi_matrices(30, order=800)
        assert np.allclose(pi_y, np.conj(pi_y.T))
        assert np.allclose(np.abs(pi_y), np.abs(pi_x))
        assert pi_y[0, 1] == pytest.approx(1j * pi_x[0, 1])

    def test_vacuum_never_violates(self):
        value, _ = pi_chsh_optimum(0.0, 64, order=800)
        assert value <= 2.0 + 1e-9

    @pytest.mark.parametrize("zeta", [0.5, 1.0, 2.0])
    def test_optimum_matches_closed_form(self, zeta):
        value, _ = pi_chsh_optimum(zeta, 200)
        assert value == pytest.approx(pi_closed_form(zeta), abs=5e-3)

    def test_specific_times_reach_the_optimum(self):
        # the correlator depends on the times through cos(2 t1 + 2 t2)
        value = pi_chsh_fock(0.5, 200, 0.0, math.pi / 4, -math.pi / 8, math.pi / 8)
        assert value == pytest.approx(pi_closed_form(0.5), abs=5e-3)

    def test_growth_toward_the_ceiling(self):
        # the closed form approaches 2 sqrt(2); the truncated route tracks it
        # at every desk-feasible squeeze (dense matrices cap the reachable N)
        assert pi_closed_form(5.0) == pytest.approx(CIRELSON, abs=2e-4)
        values = [pi_chsh_optimum(z, 200)[0] for z in (0.5, 1.0, 2.0)]
        big = pi_chsh_optimum(2.5, 800, order=3200)[0]
        assert values == sorted(values)
        assert big > values[-1]
        assert big == pytest.approx(pi_closed_form(2.5), abs=5e-3)
        assert big <= CIRELSON + 1e-9

    def test_crossing_location(self):
        from scipy.optimize import brentq

        zstar = brentq(lambda z: pi_chsh_optimum(z, 200)[0] - 2.0, 0.3, 1.2,
                       xtol=1e-4)
        zstar_closed = brentq(
            lambda z: math.atan(math.sinh(2 * z)) - math.pi / CIRELSON,
            0.1, 2.0, xtol=1e-12,
        )
        assert abs(zstar - zstar_closed) <= 1e-3


class TestHermiteFunctions:
    def test_orthonormal_on_quadrature_grid(self):
        from scipy.special import roots_hermite

        x, w = roots_hermite(200)
        phi = hermite_functions(40, x)
        # e^{x^2} w phi_n phi_m integrates to delta_{nm}
        gram = (phi * (w * np.exp(x * x))) @ phi.T
        assert np.allclose(gram, np.eye(41), atol=1e-12)

    def test_gaussian_ground_state(self):
        x = np.linspace(-3, 3, 7)
        phi = hermite_functions(0, x)
        assert np.allclose(phi[0], np.pi**-0.25 * np.exp(-x * x / 2))
