"""Tests for mechanism construction, certification, and conversions."""

import math

import numpy as np
import pytest

from qpriv import divergences as dv
from qpriv import errors
from qpriv import privacy
from qpriv import quantum_core as qc

LN3 = math.log(3.0)
PROJ0 = np.diag([1.0, 0.0])
E0 = qc.DensityMatrix(np.diag([1.0, 0.0]))
E1 = qc.DensityMatrix(np.diag([0.0, 1.0]))

SMALL_BUDGET = privacy.SearchBudget(restarts=16, polish_steps=96)


class TestBuildMechanism:
    def test_boundary_weight(self):
        """epsilon = ln 3 puts the depolarizing weight at 2 / (3 + 1)."""
        mech = privacy.build_qldp_mechanism(PROJ0, LN3)
        out = qc.apply(mech, E0)
        np.testing.assert_allclose(out.entries, np.diag([0.75, 0.25]), atol=1e-12)

    def test_epsilon_zero_fully_depolarizes(self):
        mech = privacy.build_qldp_mechanism(PROJ0, 0.0)
        rng = np.random.default_rng(0)
        for _ in range(5):
            rho = qc.random_density_matrix(2, seed=rng)
            out = qc.apply(mech, rho)
            np.testing.assert_allclose(out.entries, np.eye(2) / 2, atol=1e-12)

    def test_trace_ratio_on_optimal_projector(self):
        """Output trace distance is (e^eps - 1) / (e^eps + 1) of the input."""
        rng = np.random.default_rng(1)
        for _ in range(10):
            rho = qc.random_density_matrix(2, seed=rng)
            sigma = qc.random_density_matrix(2, seed=rng)
            w, v = np.linalg.eigh(rho.entries - sigma.entries)
            proj = (v * (w > 0)) @ v.conj().T
            mech = privacy.build_qldp_mechanism(proj, LN3)
            num = dv.trace_distance(qc.apply(mech, rho), qc.apply(mech, sigma))
            den = dv.trace_distance(rho, sigma)
            assert num / den == pytest.approx(0.5, abs=1e-12)

    def test_rejects_non_effect(self):
        with pytest.raises(errors.NotAnEffect):
            privacy.build_qldp_mechanism(np.diag([2.0, 0.0]), 1.0)


class TestBuildEpsDeltaMechanism:
    def test_delta_zero_matches_pure_mechanism(self):
        params = privacy.PrivacyParams(1.2, 0.0)
        a = privacy.build_eps_delta_mechanism(PROJ0, params)
        b = privacy.build_qldp_mechanism(PROJ0, 1.2)
        rng = np.random.default_rng(2)
        rho = qc.random_density_matrix(2, seed=rng)
        np.testing.assert_allclose(
            qc.apply(a, rho).entries, qc.apply(b, rho).entries, atol=1e-12
        )

    def test_delta_one_is_bare_measurement(self):
        params = privacy.PrivacyParams(1.2, 1.0)
        mech = privacy.build_eps_delta_mechanism(PROJ0, params)
        meas = qc.measurement_channel_two_outcome(PROJ0)
        rng = np.random.default_rng(3)
        rho = qc.random_density_matrix(2, seed=rng)
        np.testing.assert_allclose(
            qc.apply(mech, rho).entries, qc.apply(meas, rho).entries, atol=1e-12
        )

    def test_trace_ratio_with_delta(self):
        """(e^eps - 1 + 2 delta) / (e^eps + 1) = 0.6 at (ln 3, 0.2)."""
        params = privacy.PrivacyParams(LN3, 0.2)
        mech = privacy.build_eps_delta_mechanism(PROJ0, params)
        num = dv.trace_distance(qc.apply(mech, E0), qc.apply(mech, E1))
        assert num == pytest.approx(0.6, abs=1e-12)


class TestCertify:
    def test_built_mechanism_certifies(self):
        mech = privacy.build_qldp_mechanism(PROJ0, LN3)
        result = privacy.certify(mech, privacy.PrivacyParams(LN3, 0.0), SMALL_BUDGET)
        assert result.certified
        assert result.worst_value <= 1e-8

    def test_under_depolarized_mechanism_fails(self):
        """Shaving the weight by 0.01 exposes a positive divergence.

        The two-outcome output ratio bound ln(2/p - 1) exceeds epsilon for
        any p below the boundary weight, so certification must reject.
        """
        p_bad = 2.0 / (math.exp(LN3) + 1.0) - 0.01
        assert math.log(2.0 / p_bad - 1.0) > LN3
        bad = qc.compose(
            qc.depolarizing_channel(2, p_bad), qc.measurement_channel_two_outcome(PROJ0)
        )
        result = privacy.certify(bad, privacy.PrivacyParams(LN3, 0.0), SMALL_BUDGET)
        assert not result.certified
        assert result.worst_value > privacy.TOL_CERT

    def test_replacement_channel_certifies_at_zero(self):
        chan = qc.replacement_channel(qc.DensityMatrix(np.eye(2) / 2))
        result = privacy.certify(chan, privacy.PrivacyParams(0.0, 0.0), SMALL_BUDGET)
        assert result.certified
        assert result.worst_value <= 1e-10

    def test_witness_pair_is_orthogonal(self):
        mech = privacy.build_qldp_mechanism(PROJ0, 1.0)
        result = privacy.certify(mech, privacy.PrivacyParams(1.0, 0.0), SMALL_BUDGET)
        a, b = result.witness_pair
        assert abs(np.vdot(a.amplitudes, b.amplitudes)) < 1e-9

    def test_worst_value_bounded_for_built_mechanisms(self):
        rng = np.random.default_rng(4)
        for eps, delta in ((0.5, 0.0), (1.0, 0.1), (LN3, 0.3)):
            effect = qc.random_density_matrix(3, seed=rng).entries
            params = privacy.PrivacyParams(eps, delta)
            mech = privacy.build_eps_delta_mechanism(effect, params)
            result = privacy.certify(mech, params, SMALL_BUDGET, seed=rng)
            assert result.certified
            assert result.worst_value <= delta + 1e-8


class TestEstimateEpsilon:
    def test_replacement_channel_is_zero(self):
        chan = qc.replacement_channel(qc.DensityMatrix(np.eye(2) / 2))
        assert privacy.estimate_epsilon(chan, SMALL_BUDGET) == pytest.approx(0.0, abs=1e-10)

    def test_matches_two_outcome_ratio_oracle(self):
        """For Dep_p after a projector readout, the analytic level is ln(2/p - 1)."""
        for p in (0.3, 0.5, 0.8):
            chan = qc.compose(
                qc.depolarizing_channel(2, p),
                qc.measurement_channel_two_outcome(PROJ0),
            )
            est = privacy.estimate_epsilon(chan)
            assert est == pytest.approx(math.log(2.0 / p - 1.0), abs=1e-6)

    def test_identity_channel_reports_infinity(self):
        ident = qc.KrausChannel((np.eye(2),))
        assert math.isinf(privacy.estimate_epsilon(ident, SMALL_BUDGET))

    def test_tight_for_projective_readout_off_axis(self):
        rng = np.random.default_rng(5)
        basis, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        proj = basis[:, :2] @ basis[:, :2].conj().T
        eps = 0.8
        mech = privacy.build_qldp_mechanism(proj, eps)
        assert privacy.estimate_epsilon(mech) == pytest.approx(eps, abs=1e-6)


class TestPurifyDp:
    def test_delta_zero_keeps_epsilon(self):
        mech = privacy.build_qldp_mechanism(PROJ0, 1.0)
        _, eps_prime = privacy.purify_dp(mech, 0.5, privacy.PrivacyParams(1.0, 0.0))
        assert eps_prime == pytest.approx(1.0, abs=1e-15)

    def test_eta_near_one_endpoint(self):
        mech = privacy.build_eps_delta_mechanism(PROJ0, privacy.PrivacyParams(1.0, 0.2))
        _, eps_prime = privacy.purify_dp(
            mech, 1.0 - 1e-12, privacy.PrivacyParams(1.0, 0.2)
        )
        endpoint = 1.0 + math.log(1.0 + 2.0 * 0.2 * math.exp(-1.0))
        assert eps_prime == pytest.approx(endpoint, abs=1e-9)

    def test_formula_value(self):
        """d = 2, eps = ln 3, delta = 0.1, eta = 0.5 gives ln 3 + ln(1 + 0.4/3)."""
        params = privacy.PrivacyParams(LN3, 0.1)
        mech = privacy.build_eps_delta_mechanism(PROJ0, params)
        purified, eps_prime = privacy.purify_dp(mech, 0.5, params)
        assert eps_prime == pytest.approx(LN3 + math.log(1.0 + 0.4 / 3.0), abs=1e-12)
        assert eps_prime == pytest.approx(1.2237754316221157, abs=1e-9)
        rng = np.random.default_rng(6)
        for _ in range(10):
            omega = qc.random_density_matrix(2, seed=rng)
            drift = dv.trace_distance(qc.apply(mech, omega), qc.apply(purified, omega))
            assert drift <= 0.5 + 1e-12

    def test_invalid_eta(self):
        mech = privacy.build_qldp_mechanism(PROJ0, 1.0)
        with pytest.raises(errors.InvalidEta):
            privacy.purify_dp(mech, 0.0, privacy.PrivacyParams(1.0, 0.0))


class TestRelaxPureDp:
    def test_identity_at_zero_delta(self):
        assert privacy.relax_pure_dp(1.3, 0.0) == privacy.PrivacyParams(1.3, 0.0)

    def test_arithmetic(self):
        assert privacy.relax_pure_dp(1.1, 0.1) == privacy.PrivacyParams(1.0, 0.1)

    def test_round_trip_certifies(self):
        """A mechanism built at eps + delta certifies at (eps, delta)."""
        eps, delta = 0.9, 0.25
        mech = privacy.build_qldp_mechanism(PROJ0, eps + delta)
        relaxed = privacy.relax_pure_dp(eps + delta, delta)
        assert relaxed.epsilon == pytest.approx(eps, abs=1e-12)
        assert relaxed.delta == delta
        result = privacy.certify(mech, relaxed, SMALL_BUDGET)
        assert result.certified

    def test_invalid_params(self):
        with pytest.raises(errors.InvalidParams):
            privacy.relax_pure_dp(0.1, 0.2)


class TestClosureProperties:
    def test_post_processing_closure(self):
        rng = np.random.default_rng(7)
        params = privacy.PrivacyParams(1.0, 0.05)
        for _ in range(50):
            mech = privacy.build_eps_delta_mechanism(
                qc.random_density_matrix(2, seed=rng).entries, params
            )
            post = qc.random_channel(2, int(rng.integers(2, 4)), 2, rng)
            result = privacy.certify(qc.compose(post, mech), params, SMALL_BUDGET, seed=rng)
            assert result.certified

    def test_pre_processing_closure(self):
        rng = np.random.default_rng(8)
        params = privacy.PrivacyParams(0.7, 0.0)
        for _ in range(50):
            mech = privacy.build_qldp_mechanism(
                qc.random_density_matrix(3, seed=rng).entries, params.epsilon
            )
            pre = qc.random_channel(3, 3, 2, rng)
            result = privacy.certify(qc.compose(mech, pre), params, SMALL_BUDGET, seed=rng)
            assert result.certified

    def test_random_private_channel_certifies(self):
        rng = np.random.default_rng(9)
        params = privacy.PrivacyParams(1.0, 0.1)
        for _ in range(10):
            chan = privacy.random_private_channel(3, params, rng)
            result = privacy.certify(chan, params, SMALL_BUDGET, seed=rng)
            assert result.certified


class TestParams:
    def test_rejects_negative_epsilon(self):
        with pytest.raises(errors.InvalidParams):
            privacy.PrivacyParams(-0.1, 0.0)

    def test_rejects_bad_delta(self):
        with pytest.raises(errors.InvalidParams):
            privacy.PrivacyParams(1.0, 1.5)
