"""Inequality evaluators: CHSH, Leggett, KCBS, Hardy, TLM, polarization."""

import math

import numpy as np
import pytest

from qfoundry import inequalities as ineq
from qfoundry import qcore
from qfoundry.inequalities import (
    CorrelationRecord,
    HardyConfiguration,
    KcbsConfiguration,
    chsh_optimize,
    chsh_planar_grid_value,
    chsh_value,
    hardy_classical_fourth_zero,
    hardy_fourth_probability_closed_form,
    hardy_probabilities,
    kcbs_build_pentagram,
    kcbs_classical_assignment_values,
    kcbs_classical_minimum,
    kcbs_value,
    leggett_bound,
    leggett_quantum_value,
    leggett_violation_argmax_oracle,
    leggett_violation_scan,
    qm_same_polarization_probability,
    tlm_check,
)
from qfoundry.qcore import MeasurementSetting, StateVector

SQRT2 = math.sqrt(2.0)


def partially_entangled(gamma):
    amplitudes = np.array([0.0, math.cos(gamma), -math.sin(gamma), 0.0], dtype=complex)
    return StateVector((2, 2), amplitudes)


class TestPolarizationProbability:
    def test_parallel_polarizers(self):
        p_same, p_both = qm_same_polarization_probability(0.0)
        assert abs(p_same - 1.0) < 1e-12
        assert abs(p_both - 0.5) < 1e-12

    def test_orthogonal_polarizers(self):
        p_same, p_both = qm_same_polarization_probability(np.pi / 2.0)
        assert p_same < 1e-12
        assert p_both < 1e-12

    def test_contradiction_angle_reports_all_readings(self):
        # Born-rule values at the 2*pi/3 relative setting; the printed 0.125
        # equals the both-pass reading, cos^2 gives 0.25, and both undercut
        # the LHV bound of 1/3
        p_same, p_both = qm_same_polarization_probability(2.0 * np.pi / 3.0)
        assert abs(p_same - 0.25) < 1e-12
        assert abs(p_both - 0.125) < 1e-12
        assert p_same < 1.0 / 3.0 - 0.05
        assert p_both < 1.0 / 3.0 - 0.05

    def test_matches_cos_squared_on_a_grid(self):
        for theta in np.linspace(0.0, np.pi, 37):
            p_same, p_both = qm_same_polarization_probability(theta)
            assert abs(p_same - np.cos(theta) ** 2) < 1e-12
            assert abs(p_both - 0.5 * np.cos(theta) ** 2) < 1e-12


class TestChsh:
    def test_pr_box_reaches_four(self):
        record = CorrelationRecord(np.array([[1.0, 1.0], [1.0, -1.0]]))
        assert chsh_value(record) == 4.0

    def test_uncorrelated_gives_zero(self):
        assert chsh_value(CorrelationRecord(np.zeros((2, 2)))) == 0.0

    def test_singlet_optimal_angles_give_tsirelson(self):
        # E(a, b) = -a.b at the 45-degree-spaced planar settings
        a0, a1 = 0.0, np.pi / 2.0
        b0, b1 = 5.0 * np.pi / 4.0, 3.0 * np.pi / 4.0
        c = np.empty((2, 2))
        for i, alpha in enumerate((a0, a1)):
            for j, beta in enumerate((b0, b1)):
                c[i, j] = -math.cos(alpha - beta)
        s = chsh_value(CorrelationRecord(c))
        assert abs(s - 2.0 * SQRT2) < 1e-12

    def test_record_validation(self):
        with pytest.raises(ValueError):
            CorrelationRecord(np.array([[1.2, 0.0], [0.0, 0.0]]))
        with pytest.raises(ValueError):
            CorrelationRecord(np.zeros((3, 2)))

    def test_optimizer_reaches_tsirelson_on_singlet(self):
        optimum = chsh_optimize(qcore.singlet())
        assert abs(optimum.s_max - 2.0 * SQRT2) < 1e-6

    def test_optimizer_settings_match_canonical_gram(self):
        optimum = chsh_optimize(qcore.singlet())
        a0, a1 = optimum.settings_a
        b0, b1 = optimum.settings_b
        # same-party settings orthogonal, cross dots at 1/sqrt(2) with an
        # odd number of sign flips: invariant under global rotations
        assert abs(a0.dot(a1)) < 1e-5
        assert abs(b0.dot(b1)) < 1e-5
        cross = [a0.dot(b0), a0.dot(b1), a1.dot(b0), a1.dot(b1)]
        np.testing.assert_allclose(np.abs(cross), 1.0 / SQRT2, atol=1e-5)
        assert np.prod(np.sign(cross)) == -1.0

    def test_product_state_respects_classical_bound(self):
        product = qcore.basis_state((2, 2), (0, 0))
        optimum = chsh_optimize(product)
        assert optimum.s_max <= 2.0 + 1e-9

    def test_partially_entangled_state_cross_checked_against_grid_oracle(self):
        state = partially_entangled(np.pi / 8.0)
        optimum = chsh_optimize(state)
        oracle = chsh_planar_grid_value(state, step_deg=1.0)
        # the 1-degree grid undershoots the true optimum by O(step^2)
        assert optimum.s_max >= oracle - 1e-9
        assert abs(optimum.s_max - oracle) < 5e-3
        # frozen analytic value 2 sqrt(1 + sin^2(pi/4)) = sqrt(6)
        assert abs(optimum.s_max - 2.449489742783178) < 1e-6

    def test_quantum_records_never_exceed_tsirelson(self):
        rng = np.random.default_rng(61)
        worst = 0.0
        for _ in range(200):
            state = qcore.random_state((2, 2), rng)
            settings_a = [MeasurementSetting.random(rng) for _ in range(2)]
            settings_b = [MeasurementSetting.random(rng) for _ in range(2)]
            c = np.array(
                [[ineq.setting_correlation(state, a, b) for b in settings_b] for a in settings_a]
            )
            worst = max(worst, abs(chsh_value(CorrelationRecord(np.clip(c, -1, 1)))))
        assert worst <= 2.0 * SQRT2 + 1e-9


class TestLeggettInequality:
    def test_bound_values(self):
        assert leggett_bound(0.0) == 4.0
        assert abs(leggett_bound(np.pi) - 2.726760455264837) < 1e-12
        assert abs(leggett_bound(math.radians(18.8)) - 3.7920469261920444) < 1e-12

    def test_quantum_values(self):
        assert leggett_quantum_value(0.0) == 4.0
        assert abs(leggett_quantum_value(np.pi)) < 1e-12
        assert abs(leggett_quantum_value(math.radians(18.8)) - 3.893298520231393) < 1e-12

    def test_quantum_value_matches_singlet_correlators(self):
        # E_kl = -a_k . b_l from the singlet at planar separations phi and 0,
        # with b3 = a2; |E11 + E23| + |E22 + E23| must equal |2(cos phi + 1)|
        state = qcore.singlet()

        def planar(angle):
            return MeasurementSetting([np.cos(angle), np.sin(angle), 0.0])

        for phi in (0.3, math.radians(18.8), 1.2):
            a1, a2 = planar(0.0), planar(phi + 0.4)
            b1, b2, b3 = planar(phi), planar(phi + 0.4 + phi), a2
            e11 = ineq.setting_correlation(state, a1, b1)
            e22 = ineq.setting_correlation(state, a2, b2)
            e23 = ineq.setting_correlation(state, a2, b3)
            s = abs(e11 + e23) + abs(e22 + e23)
            assert abs(s - leggett_quantum_value(phi)) < 1e-12

    def test_scan_finds_stationarity_root(self):
        phi = np.deg2rad(np.arange(0.0, 90.0001, 0.01))
        scan = leggett_violation_scan(phi)
        oracle = leggett_violation_argmax_oracle()
        assert abs(math.degrees(scan.argmax_phi) - math.degrees(oracle)) <= 0.5
        assert abs(math.degrees(scan.argmax_phi) - 18.8) <= 1.0
        assert scan.max_violation > 0.10
        # frozen from the closed form: the peak gap is 1/pi^2
        assert abs(scan.max_violation - 1.0 / np.pi**2) < 1e-8

    def test_scan_no_violation_at_zero(self):
        scan = leggett_violation_scan(np.array([0.0]))
        assert scan.violation[0] == 0.0

    def test_scan_emits_full_table(self):
        phi = np.linspace(0.0, np.pi, 100)
        scan = leggett_violation_scan(phi)
        assert scan.phi.shape == scan.s_qm.shape == scan.bound.shape == (100,)
        assert np.all(scan.violation == scan.s_qm - scan.bound)

    def test_scan_validation(self):
        with pytest.raises(ValueError):
            leggett_violation_scan(np.array([]))
        with pytest.raises(ValueError):
            leggett_violation_scan(np.array([-0.1]))
        with pytest.raises(ValueError):
            leggett_bound(3.5)


class TestLeggettModelChsh:
    def test_model_reproduces_singlet_chsh_in_valid_plane(self):
        # where the construction is consistent its correlators equal the
        # quantum ones, so the optimal planar settings reach 2 sqrt(2)
        from qfoundry.hvmodels import LeggettModelParams, leggett_expectations

        z = MeasurementSetting([0.0, 0.0, 1.0])

        def planar(angle):
            return MeasurementSetting([np.cos(angle), np.sin(angle), 0.0])

        angles_a = (0.0, np.pi / 2.0)
        angles_b = (5.0 * np.pi / 4.0, 3.0 * np.pi / 4.0)
        c = np.empty((2, 2))
        for i, alpha in enumerate(angles_a):
            for j, beta in enumerate(angles_b):
                params = LeggettModelParams(z, z, planar(alpha), planar(beta))
                c[i, j] = leggett_expectations(params).mean_ab
        assert abs(chsh_value(CorrelationRecord(c)) - 2.0 * SQRT2) < 1e-12

    def test_model_never_beats_tsirelson_in_valid_plane(self):
        from qfoundry.hvmodels import LeggettModelParams, leggett_expectations

        z = MeasurementSetting([0.0, 0.0, 1.0])
        rng = np.random.default_rng(67)
        for _ in range(100):
            angles = rng.uniform(0.0, 2.0 * np.pi, size=4)
            c = np.empty((2, 2))
            for i in range(2):
                for j in range(2):
                    params = LeggettModelParams(
                        z,
                        z,
                        MeasurementSetting([np.cos(angles[i]), np.sin(angles[i]), 0.0]),
                        MeasurementSetting([np.cos(angles[2 + j]), np.sin(angles[2 + j]), 0.0]),
                    )
                    c[i, j] = leggett_expectations(params).mean_ab
            assert abs(chsh_value(CorrelationRecord(c))) <= 2.0 * SQRT2 + 1e-12


class TestKcbs:
    def test_pentagram_geometry(self):
        config = kcbs_build_pentagram()
        np.testing.assert_allclose(np.linalg.norm(config.directions, axis=1), 1.0, atol=1e-12)
        assert config.max_adjacent_dot() < 1e-12

    def test_axial_state_sees_equal_overlaps(self):
        config = kcbs_build_pentagram()
        overlaps = (config.directions @ config.state_direction) ** 2
        np.testing.assert_allclose(overlaps, overlaps[0], atol=1e-12)

    def test_quantum_value_is_five_minus_four_root_five(self):
        value = kcbs_value(kcbs_build_pentagram())
        assert abs(value - (5.0 - 4.0 * math.sqrt(5.0))) < 1e-9
        assert abs(value - (-3.9442719099991588)) < 1e-9

    def test_classical_minimum_is_exactly_minus_three(self):
        assert kcbs_classical_minimum() == -3
        values = kcbs_classical_assignment_values()
        assert values.shape == (32,)
        assert values.min() == -3 and values.max() == 5

    def test_classical_mixtures_respect_bound(self):
        rng = np.random.default_rng(71)
        values = kcbs_classical_assignment_values()
        for _ in range(200):
            weights = rng.dirichlet(np.ones(32))
            assert weights @ values >= -3.0 - 1e-12

    def test_equatorial_state_sits_above_quantum_minimum(self):
        config = kcbs_build_pentagram()
        tilted = KcbsConfiguration(config.directions, np.array([1.0, 0.0, 0.0]))
        assert kcbs_value(tilted) > 5.0 - 4.0 * math.sqrt(5.0) + 0.1

    def test_incompatible_directions_rejected(self):
        directions = kcbs_build_pentagram().directions.copy()
        directions[1] = np.array([0.0, 0.0, 1.0])
        with pytest.raises(ValueError, match="not orthogonal"):
            KcbsConfiguration(directions, np.array([0.0, 0.0, 1.0]))


class TestHardy:
    def test_ket_normalizers(self):
        config = HardyConfiguration(0.4)
        g = 0.4
        assert abs(config.normalizer - (math.sin(g) + math.cos(g)) ** -0.5) < 1e-15
        assert abs(config.normalizer_prime - (math.sin(g) ** 3 + math.cos(g) ** 3) ** -0.5) < 1e-15

    def test_kets_orthonormal(self):
        for gamma in np.linspace(0.05, np.pi / 2.0 - 0.05, 9):
            config = HardyConfiguration(gamma)
            for kets in (config.alice_kets, config.bob_kets):
                plus, minus, plus_prime, minus_prime = kets
                assert abs(plus @ minus) < 1e-12
                assert abs(plus_prime @ minus_prime) < 1e-12
                for ket in kets:
                    assert abs(ket @ ket - 1.0) < 1e-12

    def test_zero_conditions_and_closed_form_on_grid(self):
        for gamma in np.linspace(0.02, np.pi / 2.0 - 0.02, 50):
            p1, p2, p3, p4 = hardy_probabilities(HardyConfiguration(gamma))
            assert max(p1, p2, p3) < 1e-12
            assert abs(p4 - hardy_fourth_probability_closed_form(gamma)) < 1e-10

    def test_maximally_entangled_case_has_no_violation(self):
        _, _, _, p4 = hardy_probabilities(HardyConfiguration(np.pi / 4.0))
        assert p4 < 1e-12

    def test_reference_angle(self):
        _, _, _, p4 = hardy_probabilities(HardyConfiguration(math.radians(22.5)))
        # frozen from the projector-based oracle: sin(90 deg) = 1 and
        # 4 (cos^3 + sin^3)(22.5 deg) = 3.37885...
        assert abs(p4 - 0.08761006569007043) < 1e-10
        assert abs(p4 - 0.0876) < 1e-4

    def test_degenerate_endpoints_flagged(self):
        assert HardyConfiguration(0.0).separable
        assert HardyConfiguration(np.pi / 2.0).separable
        assert not HardyConfiguration(0.3).separable
        _, _, _, p4 = hardy_probabilities(HardyConfiguration(0.0))
        assert p4 < 1e-12
        with pytest.raises(ValueError):
            HardyConfiguration(-0.1)
        with pytest.raises(ValueError):
            HardyConfiguration(np.pi / 2.0 + 0.1)

    def test_classical_enumeration_forces_fourth_zero(self):
        assert hardy_classical_fourth_zero()


class TestTlm:
    def test_pr_box_violates(self):
        result = tlm_check(CorrelationRecord(np.array([[1.0, 1.0], [1.0, -1.0]])))
        assert result.lhs == 2.0
        assert result.rhs == 0.0
        assert not result.satisfied

    def test_singlet_optimal_record_sits_at_equality(self):
        r = 1.0 / SQRT2
        result = tlm_check(CorrelationRecord(np.array([[r, r], [r, -r]])))
        assert abs(result.lhs - 1.0) < 1e-12
        assert abs(result.rhs - 1.0) < 1e-12
        assert result.satisfied

    def test_quantum_records_satisfy(self):
        rng = np.random.default_rng(73)
        for _ in range(300):
            state = qcore.random_state((2, 2), rng)
            settings_a = [MeasurementSetting.random(rng) for _ in range(2)]
            settings_b = [MeasurementSetting.random(rng) for _ in range(2)]
            c = np.clip(
                np.array(
                    [
                        [ineq.setting_correlation(state, a, b) for b in settings_b]
                        for a in settings_a
                    ]
                ),
                -1.0,
                1.0,
            )
            result = tlm_check(CorrelationRecord(c))
            assert result.lhs <= result.rhs + 1e-12
            assert result.satisfied
