"""Oscillator outcome covariance and the force-estimator floor."""

import math

import numpy as np
import pytest

from clocksim.errors import InvalidParam
from clocksim.oscillator import (
    ForceEstimatorSpec,
    LinearMeasurementPlan,
    covariance_matrix,
    fd_estimator_bias,
    fd_estimator_variance,
    floor_tradeoff,
    heisenberg_moments,
    variance_floor,
)


class TestCovariance:
    def test_single_measurement(self):
        plan = LinearMeasurementPlan(times=[0.0], sigmas=[1.0])
        b = covariance_matrix(plan)
        assert abs(b[0, 0] - (0.5 + 1.0)) < 1e-14

    def test_quarter_period_backaction(self):
        plan = LinearMeasurementPlan(times=[0.0, math.pi / 2], sigmas=[1.0, 1.0])
        b = covariance_matrix(plan)
        # vacuum rotated + imprecision + kick of the first measurement
        assert abs(b[1, 1] - (0.5 + 1.0 + 0.25)) < 1e-14

    def test_coincident_kernel_vanishes(self):
        # sin(t - t) = 0: a measurement exerts no backaction on itself,
        # drive-independent by construction
        plan = LinearMeasurementPlan(times=[0.3, 1.7], sigmas=[0.5, 0.5])
        b = covariance_matrix(plan)
        rot = np.column_stack([np.cos(plan.times), np.sin(plan.times)])
        base = rot @ plan.initial_cov @ rot.T + np.diag(plan.sigmas**2)
        assert abs((b - base)[0, 0]) < 1e-14  # first outcome: no kicks yet

    def test_positive_semidefinite(self):
        plan = LinearMeasurementPlan(
            times=np.linspace(0, 3, 7), sigmas=np.full(7, 0.4)
        )
        assert np.min(np.linalg.eigvalsh(covariance_matrix(plan))) > -1e-10

    def test_stroboscopic_pi_spacing(self):
        plan = LinearMeasurementPlan(times=[0.0, math.pi, 2 * math.pi], sigmas=[0.3] * 3)
        b = covariance_matrix(plan)
        rot = np.column_stack([np.cos(plan.times), np.sin(plan.times)])
        resid = b - rot @ plan.initial_cov @ rot.T - np.diag(plan.sigmas**2)
        assert np.max(np.abs(resid)) < 1e-12

    def test_validation(self):
        with pytest.raises(InvalidParam):
            LinearMeasurementPlan(times=[0.0, 0.0], sigmas=[1.0, 1.0])
        with pytest.raises(InvalidParam):
            LinearMeasurementPlan(times=[0.0], sigmas=[1.0], initial_cov=np.zeros((2, 2)))


class TestVarianceFloor:
    def test_floor_chain_on_grid(self):
        for tau in np.geomspace(0.02, 1.0, 10):
            spec = ForceEstimatorSpec(tau=float(tau), center_index=4)
            for sig2 in np.geomspace(0.05 / tau, 20.0 / tau, 9):
                sig = math.sqrt(sig2)
                v = fd_estimator_variance(spec, sig)
                assert v >= floor_tradeoff(tau, sig) - 1e-9
                assert floor_tradeoff(tau, sig) >= variance_floor(tau) - 1e-12

    def test_tradeoff_saturates_floor(self):
        tau = 0.1
        sig2s = np.geomspace(0.01 / tau, 100.0 / tau, 500)
        vals = [floor_tradeoff(tau, math.sqrt(s)) for s in sig2s]
        best = min(vals)
        assert best / variance_floor(tau) < 1.05
        opt = sig2s[int(np.argmin(vals))]
        assert abs(opt * tau - math.pi / 4) < 0.1  # optimal sigma^2 ~ 1/tau

    def test_min_variance_slope(self):
        taus = np.geomspace(0.02, 0.5, 8)
        mins = []
        for tau in taus:
            spec = ForceEstimatorSpec(tau=float(tau), center_index=4)
            vals = [
                fd_estimator_variance(spec, math.sqrt(s))
                for s in np.geomspace(0.01 / tau, 100.0 / tau, 120)
            ]
            mins.append(min(vals))
        slope = np.polyfit(np.log(taus), np.log(mins), 1)[0]
        assert abs(slope + 3.0) < 0.1

    def test_per_index_sigmas(self):
        spec = ForceEstimatorSpec(tau=0.2, center_index=3)
        scalar = fd_estimator_variance(spec, 2.0)
        vec = fd_estimator_variance(spec, [2.0, 2.0, 2.0, 2.0])
        assert scalar == vec


class TestBias:
    def test_zero_drive(self):
        spec = ForceEstimatorSpec(tau=0.1, center_index=5)
        assert abs(fd_estimator_bias(spec)) < 1e-12

    def test_quadratic_order(self):
        biases = []
        taus = [0.2, 0.1, 0.05]
        for tau in taus:
            spec = ForceEstimatorSpec(
                tau=tau,
                center_index=round(2.0 / tau) + 1,
                waveform=lambda t: math.cos(0.3 * t),
            )
            biases.append(abs(fd_estimator_bias(spec)))
        order = np.polyfit(np.log(taus), np.log(biases), 1)[0]
        assert order >= 1.9

    def test_prefactor_series(self):
        tau = 0.1
        k = (2.0 * math.cos(tau) - 2.0 + tau**2) / tau**2
        assert abs(k / (tau**2 / 12.0) - 1.0) < 0.01


class TestHeisenbergMoments:
    def test_free_rotation(self):
        q, p = heisenberg_moments((1.0, 0.5), lambda t: 0.0, 1.3)
        assert abs(q - (math.cos(1.3) + 0.5 * math.sin(1.3))) < 1e-12
        assert abs(p - (0.5 * math.cos(1.3) - math.sin(1.3))) < 1e-12

    def test_constant_drive(self):
        q, _ = heisenberg_moments((0.0, 0.0), lambda t: 1.0, 2.0)
        assert abs(q - (1.0 - math.cos(2.0))) < 1e-9

    def test_resonant_drive(self):
        t = 2.0
        q, _ = heisenberg_moments((0.0, 0.0), lambda u: math.sin(u), t)
        closed = (math.sin(t) - t * math.cos(t)) / 2.0
        assert abs(q - closed) < 1e-9
