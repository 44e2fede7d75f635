"""Repeatedly measured driven oscillator: outcome covariance and the
finite-difference force estimator's variance floor.

Units: omega = m = hbar = 1, so the free Heisenberg evolution is a rotation
of (q, p) and the position commutator kernel is sin(t_j - t_l), independent
of the drive.  For Gaussian measurements of q at times t_1 < ... < t_n the
outcome covariance is

    B[j, l] = B_init[j, l] + delta_jl imp_j^2 + sum_{n < min(j, l)} sin(t_j - t_n) sin(t_l - t_n) kick_n^2

where imp_j is the readout imprecision and kick_n the momentum disturbance
of measurement n; a minimum-uncertainty Gaussian measurement has
imp^2 * kick^2 = 1/4.

The finite-difference estimator for the force at t_j,

    q_j + (q_{j+1} + q_{j-1} - 2 q_j) / tau^2,

picks up 1/(4 sigma^2 tau^4) from imprecision and ~ (2 tau / pi)^2 sigma^2 / tau^4
from the backaction of measurement j on outcome j+1 (kick scale sigma), so
its variance is bounded below by (2/pi) / tau^3 for tau <= 1, attained only
when sigma^2 scales like 1/tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import InvalidParam, QuadratureFailure

__all__ = [
    "LinearMeasurementPlan",
    "ForceEstimatorSpec",
    "covariance_matrix",
    "fd_estimator_variance",
    "fd_estimator_bias",
    "heisenberg_moments",
    "variance_floor",
    "floor_tradeoff",
]

VACUUM_COV = np.array([[0.5, 0.0], [0.0, 0.5]])


@dataclass(frozen=True)
class LinearMeasurementPlan:
    """Measurement times, per-measurement imprecisions, initial (q, p) moments."""

    times: np.ndarray
    sigmas: np.ndarray
    initial_cov: np.ndarray = field(default_factory=lambda: VACUUM_COV.copy())

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        sigmas = np.asarray(self.sigmas, dtype=float)
        if sigmas.ndim == 0:
            sigmas = np.full(times.size, float(sigmas))
        cov = np.asarray(self.initial_cov, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "initial_cov", cov)
        if times.size != sigmas.size:
            raise InvalidParam("times and sigmas must have equal length")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise InvalidParam("times must be strictly increasing")
        if np.any(sigmas <= 0):
            raise InvalidParam("imprecisions must be positive")
        if cov.shape != (2, 2) or abs(cov[0, 1] - cov[1, 0]) > 1e-12:
            raise InvalidParam("initial_cov must be symmetric 2x2")
        if np.linalg.det(cov) < 0.25 - 1e-12:
            raise InvalidParam("initial_cov violates the uncertainty relation")


@dataclass(frozen=True)
class ForceEstimatorSpec:
    """Stencil step tau, center measurement index j (1-based), and the drive."""

    tau: float
    center_index: int
    waveform: Callable[[float], float] = staticmethod(lambda t: 0.0)

    def __post_init__(self):
        if self.tau <= 0:
            raise InvalidParam("tau must be positive")
        if self.center_index < 2:
            raise InvalidParam("need a measurement on each side of the center")


def covariance_matrix(plan: LinearMeasurementPlan) -> np.ndarray:
    """Outcome covariance B for the plan; symmetric positive semidefinite."""
    t = plan.times
    n = t.size
    c, s = np.cos(t), np.sin(t)
    rot = np.column_stack([c, s])  # q(t) = cos t q + sin t p (free part)
    b = rot @ plan.initial_cov @ rot.T
    b += np.diag(plan.sigmas**2)
    kick_sq = 1.0 / (4.0 * plan.sigmas**2)
    for m in range(n):
        kern = np.where(np.arange(n) > m, np.sin(t - t[m]), 0.0)
        b += kick_sq[m] * np.outer(kern, kern)
    return b


def _plan_for_stencil(spec: ForceEstimatorSpec, plan_sigma) -> LinearMeasurementPlan:
    n = spec.center_index + 1
    times = spec.tau * np.arange(n)
    sig = np.asarray(plan_sigma, dtype=float)
    if sig.ndim == 0:
        sig = np.full(n, float(sig))
    if sig.size != n:
        raise InvalidParam(f"need {n} sigmas for center index {spec.center_index}")
    # plan_sigma parametrizes the momentum kick; the matching
    # minimum-uncertainty readout imprecision is 1/(2 sigma)
    return LinearMeasurementPlan(times=times, sigmas=1.0 / (2.0 * sig))


def fd_estimator_variance(spec: ForceEstimatorSpec, plan_sigma) -> float:
    """Variance of q_j + (q_{j+1} + q_{j-1} - 2 q_j)/tau^2 from the full plan.

    plan_sigma sets the momentum-kick scale per measurement (scalar or one
    value per measurement 1..j+1); the readout imprecision is the
    minimum-uncertainty partner 1/(2 sigma).
    """
    plan = _plan_for_stencil(spec, plan_sigma)
    b = covariance_matrix(plan)
    j = spec.center_index - 1  # 0-based position of t_j
    w = np.zeros(plan.times.size)
    w[j - 1] = 1.0 / spec.tau**2
    w[j] = (spec.tau**2 - 2.0) / spec.tau**2
    w[j + 1] = 1.0 / spec.tau**2
    return float(w @ b @ w)


def variance_floor(tau: float) -> float:
    """(2/pi) / tau^3, the backaction-imprecision tradeoff bound for tau <= 1."""
    return 2.0 / (math.pi * tau**3)


def floor_tradeoff(tau: float, sigma: float) -> float:
    """Dominant-term lower bound (1/tau^3)(1/(4 sigma^2 tau) + (4/pi^2) sigma^2 tau).

    Chain of bounds for tau <= 1, pointwise in sigma:

        fd_estimator_variance >= floor_tradeoff >= variance_floor

    the right inequality saturating at sigma^2 = pi/(4 tau).  The full
    variance keeps the sharp constants ((tau^2-2)^2, sin tau) plus every
    subleading term, so its own minimum sits a fixed factor above the
    floor; only this two-term bound attains (2/pi)/tau^3 exactly.
    """
    return (1.0 / (4.0 * sigma**2 * tau) + (4.0 / math.pi**2) * sigma**2 * tau) / tau**3


def _quad(f, a, b):
    val, err = quad(f, a, b, limit=200)
    if err > 1e-8 * max(1.0, abs(val)):
        raise QuadratureFailure(f"quadrature error {err} too large")
    return val


def fd_estimator_bias(spec: ForceEstimatorSpec) -> float:
    """Expectation of the stencil estimator minus x(t) for a zero-mean state.

    Exact expression: with K = (2 cos tau - 2 + tau^2)/tau^2,

        K * integral_0^t x(t') sin(t - t') dt'
        + tau^-2 integral_0^tau sin(tau - u) (x(t + u) + x(t - u)) du - x(t)

    which is O(tau^2) for smooth bounded drives.
    """
    x = spec.waveform
    tau = spec.tau
    t = tau * (spec.center_index - 1)
    k = (2.0 * math.cos(tau) - 2.0 + tau**2) / tau**2
    drive = _quad(lambda u: x(u) * math.sin(t - u), 0.0, t) if t > 0 else 0.0
    stencil = _quad(lambda u: math.sin(tau - u) * (x(t + u) + x(t - u)), 0.0, tau)
    return k * drive + stencil / tau**2 - x(t)


def heisenberg_moments(initial_mean, x: Callable[[float], float], t: float):
    """Mean (q, p) at time t for initial means (q0, p0) under drive x."""
    q0, p0 = float(initial_mean[0]), float(initial_mean[1])
    qdrive = _quad(lambda u: x(u) * math.sin(t - u), 0.0, t) if t != 0 else 0.0
    pdrive = _quad(lambda u: x(u) * math.cos(t - u), 0.0, t) if t != 0 else 0.0
    mean_q = math.cos(t) * q0 + math.sin(t) * p0 + qdrive
    mean_p = math.cos(t) * p0 - math.sin(t) * q0 + pdrive
    return mean_q, mean_p
