"""Theta evaluation against brute-force series, mpmath, and the identity suite."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clocksim.errors import InvalidParam
from clocksim.theta import (
    ThetaEvalConfig,
    theta3,
    theta3_multiplication_rhs,
    theta3_normalized,
)

mp.mp.dps = 40


def direct_series(z, tau, terms):
    """Definition sum, centered window, no cleverness."""
    total = 0j
    for m in range(-terms, terms + 1):
        total += complex(mp.exp(-mp.pi * tau * m * m + 2j * mp.pi * m * mp.mpmathify(z)))
    return complex(total)


def mpmath_ref(z, tau):
    return complex(mp.jtheta(3, mp.pi * mp.mpmathify(z), mp.exp(-mp.pi * tau)))


def test_direct_series_oracle_moderate_tau():
    assert abs(theta3(0.3, 2.0) - direct_series(0.3, 2.0, 200)) < 1e-12


def test_modular_path_matches_slow_direct_sum():
    # tau < 1 goes through the comb form; the plain definition still
    # converges here and must agree
    val = theta3(0.2, 0.05)
    ref = direct_series(0.2, 0.05, 10**4)
    assert abs(val - ref) < 1e-10 * abs(ref)


@pytest.mark.parametrize(
    "z,tau",
    [
        (0.37, 1.3),
        (0.5, 0.01),
        (0.13 + 0.4j, 1.7),
        (-0.25 + 0.02j, 0.08),
        (2.7 - 1.3j, 3.0),
        (5.0 + 2.0j, 1.0),
        (0.001j, 0.002),
        (0.0, 100.0),
    ],
)
def test_against_mpmath(z, tau):
    ref = mpmath_ref(z, tau)
    assert abs(theta3(z, tau) - ref) <= 1e-12 * max(abs(ref), 1e-300)


def test_invalid_inputs():
    with pytest.raises(InvalidParam):
        theta3(0.1, -1.0)
    with pytest.raises(InvalidParam):
        theta3(0.1, 0.0)
    with pytest.raises(InvalidParam):
        theta3(float("nan"), 1.0)
    with pytest.raises(InvalidParam):
        ThetaEvalConfig(rel_tol=2.0)


def test_vectorized_matches_scalar():
    zs = np.linspace(-1.2, 1.2, 11)
    vec = theta3(zs, 0.4)
    scal = np.array([theta3(float(z), 0.4) for z in zs])
    assert np.array_equal(vec, scal)


@settings(max_examples=200, deadline=None)
@given(
    z=st.floats(-5, 5, allow_nan=False),
    tau=st.floats(0.05, 20.0, allow_nan=False),
)
def test_periodicity_property(z, tau):
    a, b = theta3(z + 1.0, tau), theta3(z, tau)
    assert abs(a - b) <= 1e-11 * abs(b)


@settings(max_examples=200, deadline=None)
@given(
    z=st.floats(-3, 3, allow_nan=False),
    tau=st.floats(0.05, 20.0, allow_nan=False),
)
def test_evenness_property(z, tau):
    assert theta3(-z, tau) == theta3(z, tau)


@pytest.mark.parametrize("b", [-2, -1, 1, 2])
@pytest.mark.parametrize("z,tau", [(0.3, 1.5), (0.1, 0.9), (-0.4, 2.2)])
def test_quasi_periodicity(b, z, tau):
    lhs = theta3(z + 1j * b * tau, tau)
    rhs = math.exp(math.pi * tau * b * b) * np.exp(-2j * math.pi * b * z) * theta3(z, tau)
    assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 10.0, 100.0])
def test_modular_residual_against_reference(tau):
    # both branches must agree with the arbitrary-precision reference at
    # well-conditioned points (z = 0 keeps the direct sum cancellation-free)
    for z in (0.0, 0.02):
        ref = mpmath_ref(z, tau)
        assert abs(theta3(z, tau) - ref) <= 1e-11 * abs(ref)


@pytest.mark.parametrize("n", [5, 11])
@pytest.mark.parametrize("xi_sq", [0.3, 2.0])
@pytest.mark.parametrize("z", [0.0, 0.13])
def test_dft_pair(n, xi_sq, z):
    # theta3(z + k/N, i xi^2/N) as a finite Fourier sum of the inverse-width
    # theta, and back
    ks = np.arange(n)
    js = np.arange(n)
    lhs = np.array([theta3(z + k / n, xi_sq / n) for k in ks], dtype=complex)
    inv = np.array(
        [theta3(1j * z / xi_sq - j / n, 1.0 / (n * xi_sq)) for j in js]
    )
    rhs = np.array(
        [
            np.sum(inv * np.exp(2j * np.pi * js * k / n))
            * math.exp(-math.pi * n * z * z / xi_sq)
            / math.sqrt(n * xi_sq)
            for k in ks
        ]
    )
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * np.max(np.abs(lhs))
    lhs2 = np.array(
        [theta3(1j * z / xi_sq - k / n, 1.0 / (n * xi_sq)) for k in ks]
    )
    fwd = np.array([theta3(z + j / n, xi_sq / n) for j in js], dtype=complex)
    rhs2 = np.array(
        [
            np.sum(fwd * np.exp(-2j * np.pi * js * k / n))
            * math.exp(math.pi * n * z * z / xi_sq)
            * math.sqrt(xi_sq / n)
            for k in ks
        ]
    )
    assert np.max(np.abs(lhs2 - rhs2)) < 1e-10 * np.max(np.abs(lhs2))


@pytest.mark.parametrize("sigma", [0.1, 1.0, 10.0])
def test_tail_bound_envelope(sigma):
    for z in np.linspace(-0.95, 0.95, 21):
        val = math.sqrt(sigma) * theta3(z, sigma)
        lower = math.exp(-math.pi * z * z / sigma)
        upper = lower
        for off in (1.0 + z, 1.0 - z):
            upper += math.exp(-math.pi * off * off / sigma) / (
                1.0 - math.exp(-2.0 * math.pi * off / sigma)
            )
        assert lower - 1e-12 <= val <= upper + 1e-12


@pytest.mark.parametrize("tau", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("z", [0.0, 0.21, 0.5])
def test_triple_product(tau, z):
    q = math.exp(-math.pi * tau)
    prod = 1.0
    for n in range(1, 41):
        prod *= (1.0 - q ** (2 * n)) * (
            1.0 + 2.0 * math.cos(2.0 * math.pi * z) * q ** (2 * n - 1)
            + q ** (4 * n - 2)
        )
    assert abs(prod - theta3(z, tau)) < 1e-10


def test_multiplication_identity_cases():
    # a = b = 1 at the origin
    tau = 0.9
    rhs = theta3_multiplication_rhs(1, 1, 0.0, 0.0, tau)
    lhs = theta3(0.0, tau) ** 2
    assert abs(rhs - lhs) < 1e-12 * abs(lhs)
    # a=1, b=2 generic point
    lhs = theta3(0.1, 1 * 2 * 0.7) * theta3(0.3, 0.7)
    rhs = theta3_multiplication_rhs(1, 2, 0.1, 0.3, 0.7)
    assert abs(rhs - lhs) < 1e-10
    # both sides in the modular regime
    lhs = theta3(0.05, 0.2) * theta3(0.05, 0.2)
    rhs = theta3_multiplication_rhs(1, 1, 0.05, 0.05, 0.2)
    assert abs(rhs - lhs) < 1e-9 * abs(lhs)


def test_multiplication_rejects_bad_orders():
    with pytest.raises(InvalidParam):
        theta3_multiplication_rhs(0, 1, 0.0, 0.0, 1.0)


def test_normalized():
    assert theta3_normalized(0.0, 1.7) == 1.0
    mid = theta3_normalized(0.5, 1.0)
    assert 0.0 < mid < 1.0
    ref = direct_series(0.25, 0.8, 300) / direct_series(0.0, 0.8, 300)
    assert abs(theta3_normalized(0.25, 0.8) - ref) < 1e-12
