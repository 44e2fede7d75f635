"""White-noise waveform estimation with the measured clock.

The drive enters as random measurement phases: between measurements the
clock advances delta_j = spacing + X_j grid units, where spacing =
d**(1/2 - gamma) and X_j = sqrt(d) * integral of x(t) over the interval.
For white noise of variance sigma^2 the X_j are i.i.d. Normal with variance
sigma^2 d^(1 - gamma).

The estimator reads the drive off consecutive outcomes:

    Xhat_j = sqrt(d) * wrap(xi_j - xi_{j-1}) - spacing

with increments wrapped into (-sqrt(d)/2, sqrt(d)/2] (ring boundary) and
the deterministic drift removed.  Averaged over the noise, the per-visit
walk damping (1 - e^{-2 pi i delta_j}) becomes the constant
1 - e^{-2 pi sigma_X^2}, which is how random phases enter the factored
correlation formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clock import ClockParams, build_quasi_ideal_state
from .errors import InvalidParam
from .measurement import MeasurementParams, run_chain
from .rng import substream

__all__ = [
    "WaveformExperimentConfig",
    "effective_damping_constant",
    "run_waveform_trial",
    "estimation_error_samples",
    "detectability_threshold",
    "wrap_increments",
]

_TRIAL_EXPERIMENT_ID = 37


@dataclass(frozen=True)
class WaveformExperimentConfig:
    """Noise level, measurement-rate exponent, and the clock/measurement setup."""

    clock: ClockParams
    meas: MeasurementParams
    noise_sigma: float
    gamma: float = 0.5
    n_measurements: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise InvalidParam("noise_sigma must be >= 0")
        if not (0.0 <= self.gamma <= 0.5):
            raise InvalidParam("gamma must lie in [0, 1/2]")
        if self.n_measurements < 2:
            raise InvalidParam("need at least two measurements for increments")

    @property
    def spacing_grid(self) -> float:
        """Inter-measurement interval in grid units, d^(1/2 - gamma)."""
        return float(self.clock.d) ** (0.5 - self.gamma)

    @property
    def signal_std(self) -> float:
        """Standard deviation of each interval integral X_j."""
        return self.noise_sigma * float(self.clock.d) ** ((1.0 - self.gamma) / 2.0)


def effective_damping_constant(noise_sigma: float) -> float:
    """Averaged per-visit damping for random phases delta = 1 + N(0, sigma^2).

    E[1 - exp(-2 pi i delta)] = 1 - exp(-2 pi^2 sigma^2), the Gaussian
    characteristic function at frequency 2 pi.  (sigma is the standard
    deviation of the phase perturbation itself, i.e. of the interval
    integrals X_j.)
    """
    if noise_sigma < 0:
        raise InvalidParam("noise_sigma must be >= 0")
    return 1.0 - math.exp(-2.0 * math.pi**2 * noise_sigma**2)


def wrap_increments(outcomes: np.ndarray, d: int) -> np.ndarray:
    """Consecutive outcome differences mapped into (-sqrt(d)/2, sqrt(d)/2]."""
    root_d = math.sqrt(d)
    diff = np.diff(outcomes)
    return -((-diff + root_d / 2) % root_d - root_d / 2)


def run_waveform_trial(cfg: WaveformExperimentConfig, rng: np.random.Generator):
    """One chain under a fresh noise draw; returns (true X_j, estimates).

    The arrays align on intervals 2..n: the first interval has no preceding
    outcome, so its integral is drawn but not estimated.
    """
    d = cfg.clock.d
    xs = rng.normal(0.0, cfg.signal_std, size=cfg.n_measurements)
    deltas = cfg.spacing_grid + xs
    state = build_quasi_ideal_state(cfg.clock)
    record = run_chain(state, deltas, cfg.meas, d, rng)
    estimates = (
        math.sqrt(d) * wrap_increments(record.outcomes, d) - cfg.spacing_grid
    )
    return xs[1:], estimates


def estimation_error_samples(
    cfg: WaveformExperimentConfig, trials: int, seed: int | None = None
) -> np.ndarray:
    """Pooled estimator errors Xhat_j - X_j over independent trials.

    Trial t draws from the counter-keyed stream (seed, experiment, t), so
    the pool is reproducible and trivially parallel.
    """
    seed = cfg.seed if seed is None else seed
    errors = []
    for t in range(trials):
        rng = substream(seed, _TRIAL_EXPERIMENT_ID, t)
        xs, est = run_waveform_trial(cfg, rng)
        errors.append(est - xs)
    return np.concatenate(errors)


def detectability_threshold(d: int, gamma: float) -> float:
    """Smallest detectable signal scale d^{(3/2) gamma - 1/2}."""
    if not (0.0 <= gamma <= 0.5):
        raise InvalidParam("gamma must lie in [0, 1/2]")
    return float(d) ** (1.5 * gamma - 0.5)
