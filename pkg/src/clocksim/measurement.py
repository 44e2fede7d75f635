"""Theta-smeared time measurement: Kraus diagonal, outcome sampling, chains,
and a dense density-matrix oracle for pseudo-correlation moments.

The measurement operator for outcome ``xi_tilde`` in ``[-sqrt(d)/2,
sqrt(d)/2]`` is diagonal in the time basis,

    Omega_k(xi) = theta3(0, 2 i s/d)**-1/2 d**-1/4 theta3((k - xi sqrt(d))/d, i s/d)

with ``s = sigma_m^2`` the squared imprecision.  ``integral Omega(xi)^dagger
Omega(xi) d xi`` is the identity, so outcomes form a normalized density.

The oracle propagates ``rho`` exactly (dense, O(d^3) per step) and applies
the closed-form outcome integral of each measurement: the nonselective
dephasing multiplier for unqueried measurements, and for a queried
measurement the weighted multiplier

    theta3((k - k')/d - i (s/d) m, 2 i s/d) / theta3(0, 2 i s/d)
      * exp(2 pi i m k'/d - pi s m^2 / d)

(evaluated in the k'-phase form; the k-phase form with the opposite theta
shift is the same kernel and is checked against this one in the tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clock import Basis, ClockParams, StateVector, change_basis, indices
from .errors import (
    DegenerateDensity,
    DimensionTooLarge,
    InvalidParam,
    InvalidQuery,
)
from .theta import DEFAULT_CFG, ThetaEvalConfig, theta3

__all__ = [
    "MeasurementParams",
    "TrajectoryRecord",
    "DensityMatrix",
    "kraus_diag",
    "outcome_density",
    "sample_outcome",
    "run_chain",
    "dephasing_multiplier",
    "query_multiplier",
    "oracle_moment",
    "ORACLE_DIM_CAP",
]

ORACLE_DIM_CAP = 64
_GRID_METHOD_MAX_D = 512


@dataclass(frozen=True)
class MeasurementParams:
    """Squared imprecision sigma_m^2 (xi-tilde units) and grid refinement."""

    sigma_m_sq: float
    grid_oversample: int = 8

    def __post_init__(self):
        if self.sigma_m_sq < 0.0 or not math.isfinite(self.sigma_m_sq):
            raise InvalidParam(f"sigma_m_sq must be >= 0, got {self.sigma_m_sq}")
        if self.grid_oversample < 1:
            raise InvalidParam("grid_oversample must be a positive integer")

    def require_smearing(self):
        if self.sigma_m_sq == 0.0:
            raise InvalidParam(
                "sigma_m_sq = 0 is the projective limit; use the timebasis module"
            )


@dataclass
class TrajectoryRecord:
    """Outcomes of one measurement chain plus everything needed to redo it."""

    outcomes: np.ndarray
    deltas: np.ndarray
    seed: int
    d: int
    sigma_m_sq: float

    def __post_init__(self):
        self.outcomes = np.asarray(self.outcomes, dtype=float)
        self.deltas = np.asarray(self.deltas, dtype=float)
        if self.outcomes.shape != self.deltas.shape:
            raise InvalidParam("outcomes and deltas must have equal length")
        half = math.sqrt(self.d) / 2
        if self.outcomes.size and np.max(np.abs(self.outcomes)) > half + 1e-9:
            raise InvalidParam("outcome outside [-sqrt(d)/2, sqrt(d)/2]")

    def to_csv(self, path):
        rows = np.column_stack(
            [np.arange(1, self.outcomes.size + 1), self.deltas, self.outcomes]
        )
        header = "step,delta,outcome"
        with open(path, "w", newline="") as fh:
            fh.write(header + "\n")
            for step, delta, out in rows:
                fh.write(f"{int(step)},{delta:.17g},{out:.17g}\n")

    @classmethod
    def from_csv(cls, path, d, sigma_m_sq, seed=0):
        data = np.genfromtxt(path, delimiter=",", names=True)
        data = np.atleast_1d(data)
        return cls(
            outcomes=data["outcome"],
            deltas=data["delta"],
            seed=seed,
            d=d,
            sigma_m_sq=sigma_m_sq,
        )


@dataclass
class DensityMatrix:
    """d x d operator in the time eigenbasis (the oracle's working state)."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = self.entries.shape[0]
        if self.entries.shape != (d, d) or d % 2 == 0:
            raise InvalidParam("entries must be a d x d matrix with odd d")
        if np.max(np.abs(self.entries - self.entries.conj().T)) > 1e-10:
            raise InvalidParam("density matrix must be Hermitian")
        if abs(np.trace(self.entries).real - 1.0) > 1e-10:
            raise InvalidParam("density matrix must have unit trace")

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        psi = change_basis(state, Basis.TIME).amplitudes
        return cls(np.outer(psi, psi.conj()))


def kraus_diag(
    xi_tilde: float,
    d: int,
    params: MeasurementParams,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
) -> np.ndarray:
    """Diagonal of Omega(xi_tilde) over the time index window; all positive."""
    params.require_smearing()
    s = params.sigma_m_sq
    norm = theta3(0.0, 2.0 * s / d, cfg) ** -0.5 * d**-0.25
    k = indices(d)
    return norm * theta3((k - xi_tilde * math.sqrt(d)) / d, s / d, cfg)


def _canonical_bump(d, sigma_m_sq, cfg):
    """Squared Kraus bump for k = 0 on a fine periodic grid, as a sampler.

    Returns (grid, cdf) for the density Omega_0(xi)^2 over one period
    [-sqrt(d)/2, sqrt(d)/2); the bump for site k is the same table shifted
    by k/sqrt(d).
    """
    root_d = math.sqrt(d)
    sigma_m = math.sqrt(sigma_m_sq)
    n = 4096
    # resolve both the bump width and the lattice spacing
    span = min(max(8.0 * sigma_m, 8.0 / root_d), root_d)
    grid = np.linspace(-span / 2, span / 2, n, endpoint=False)
    norm = theta3(0.0, 2.0 * sigma_m_sq / d, cfg) ** -0.5 * d**-0.25
    vals = (norm * theta3(-grid * root_d / d, sigma_m_sq / d, cfg)) ** 2
    cdf = np.cumsum(vals)
    cdf /= cdf[-1]
    return grid, cdf


class _OutcomeSampler:
    """Caches per-(d, sigma_m^2) tables used by the chain simulator."""

    _cache: dict = {}

    def __init__(self, d, params, cfg=DEFAULT_CFG):
        params.require_smearing()
        self.d = d
        self.params = params
        self.cfg = cfg
        key = (d, params.sigma_m_sq, cfg.rel_tol)
        if key not in self._cache:
            self._cache[key] = _canonical_bump(d, params.sigma_m_sq, cfg)
        self.grid, self.cdf = self._cache[key]

    def draw(self, state: StateVector, rng: np.random.Generator):
        st = change_basis(state, Basis.TIME)
        weights = st.probabilities()
        total = weights.sum()
        if total < 1e-12:
            raise DegenerateDensity("time-basis weights carry no mass")
        cum = np.cumsum(weights / total)
        k = int(np.searchsorted(cum, rng.random())) - (self.d - 1) // 2
        u = rng.random()
        idx = int(np.searchsorted(self.cdf, u))
        cell = self.grid[1] - self.grid[0]
        lo = self.cdf[idx - 1] if idx > 0 else 0.0
        hi = self.cdf[min(idx, self.cdf.size - 1)]
        frac = (u - lo) / max(hi - lo, 1e-300)
        offset = float(self.grid[min(idx, self.grid.size - 1)]) + frac * cell
        root_d = math.sqrt(self.d)
        xi = k / root_d + offset
        # wrap into the fundamental outcome window
        xi = (xi + root_d / 2) % root_d - root_d / 2
        post = kraus_diag(xi, self.d, self.params, self.cfg) * st.amplitudes
        nrm = np.linalg.norm(post)
        if nrm < 1e-12:
            raise DegenerateDensity("post-measurement state has no mass")
        return xi, StateVector(post / nrm, Basis.TIME)


def outcome_density(
    state: StateVector,
    params: MeasurementParams,
    d: int,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
):
    """Outcome density f(xi) = sum_k Omega_k(xi)^2 |<theta_k|psi>|^2 on a grid.

    The grid resolves both the smearing width sigma_m and the time-lattice
    spacing 1/sqrt(d); trapezoid mass over the period is 1 to 1e-6.
    """
    params.require_smearing()
    root_d = math.sqrt(d)
    sigma_m = math.sqrt(params.sigma_m_sq)
    step = min(
        sigma_m * math.sqrt(2.0 * math.pi) / (8.0 * root_d),
        1.0 / (params.grid_oversample * root_d),
    )
    n = int(math.ceil(root_d / step))
    grid = -root_d / 2 + root_d * np.arange(n) / n
    weights = change_basis(state, Basis.TIME).probabilities()
    k = indices(d)
    norm_sq = 1.0 / (theta3(0.0, 2.0 * params.sigma_m_sq / d, cfg) * math.sqrt(d))
    args = (k[None, :] - grid[:, None] * root_d) / d
    dens = norm_sq * (theta3(args, params.sigma_m_sq / d, cfg) ** 2) @ weights
    return grid, dens


def sample_outcome(
    state: StateVector,
    params: MeasurementParams,
    d: int,
    rng: np.random.Generator,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
    method: str = "auto",
):
    """Draw one outcome and the renormalized post-measurement state.

    ``method="grid"`` inverts the trapezoid CDF of ``outcome_density`` with
    linear interpolation; ``method="mixture"`` draws the time site from the
    state's time-basis weights and the smearing offset from a cached bump
    table (the same density factored as a mixture, O(d) per draw).  ``auto``
    picks grid for small d and mixture above.
    """
    if method == "auto":
        method = "grid" if d <= _GRID_METHOD_MAX_D else "mixture"
    if method == "mixture":
        return _OutcomeSampler(d, params, cfg).draw(state, rng)
    if method != "grid":
        raise InvalidParam(f"unknown sampling method {method!r}")
    grid, dens = outcome_density(state, params, d, cfg)
    cell = grid[1] - grid[0]
    # trapezoid CDF on the periodic grid, inverted linearly per segment
    wrapped = np.concatenate([dens, dens[:1]])
    seg_mass = 0.5 * (wrapped[:-1] + wrapped[1:]) * cell
    cum = np.concatenate([[0.0], np.cumsum(seg_mass)])
    total = cum[-1]
    if total < 1e-12:
        raise DegenerateDensity("outcome density carries no mass")
    u = rng.random() * total
    idx = int(np.searchsorted(cum, u, side="right")) - 1
    idx = min(idx, seg_mass.size - 1)
    frac = (u - cum[idx]) / max(seg_mass[idx], 1e-300)
    root_d = math.sqrt(d)
    xi = grid[idx] + frac * cell
    xi = (xi + root_d / 2) % root_d - root_d / 2
    st = change_basis(state, Basis.TIME)
    post = kraus_diag(xi, d, params, cfg) * st.amplitudes
    nrm = np.linalg.norm(post)
    if nrm < 1e-12:
        raise DegenerateDensity("post-measurement state has no mass")
    return xi, StateVector(post / nrm, Basis.TIME)


def run_chain(
    state: StateVector,
    deltas,
    params: MeasurementParams,
    d: int,
    rng: np.random.Generator,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
    seed: int = 0,
) -> TrajectoryRecord:
    """Alternate free evolution by delta_j and one sampled measurement.

    Uses the mixture sampler throughout (O(d log d) per step).
    """
    deltas = np.asarray(deltas, dtype=float)
    sampler = _OutcomeSampler(d, params, cfg)
    outcomes = np.empty(deltas.size)
    current = state
    for j, delta in enumerate(deltas):
        evolved = _evolve_time_basis(current, delta)
        xi, current = sampler.draw(evolved, rng)
        outcomes[j] = xi
    return TrajectoryRecord(
        outcomes=outcomes, deltas=deltas, seed=seed, d=d, sigma_m_sq=params.sigma_m_sq
    )


def _evolve_time_basis(state: StateVector, dt_grid: float) -> StateVector:
    from .clock import evolve

    return change_basis(evolve(state, dt_grid), Basis.TIME)


def dephasing_multiplier(d, sigma_m_sq, cfg=DEFAULT_CFG) -> np.ndarray:
    """Elementwise time-basis multiplier of the nonselective measurement."""
    k = indices(d)
    diff = (k[:, None] - k[None, :]) / d
    return theta3(diff, 2.0 * sigma_m_sq / d, cfg) / theta3(
        0.0, 2.0 * sigma_m_sq / d, cfg
    )


def query_multiplier(d, sigma_m_sq, m, cfg=DEFAULT_CFG) -> np.ndarray:
    """Elementwise multiplier of a measurement weighted by exp(2 pi i m xi / sqrt(d))."""
    k = indices(d)
    diff = (k[:, None] - k[None, :]).astype(complex) / d
    shifted = diff - 1j * (sigma_m_sq / d) * m
    kernel = theta3(shifted, 2.0 * sigma_m_sq / d, cfg) / theta3(
        0.0, 2.0 * sigma_m_sq / d, cfg
    )
    phases = np.exp(2j * np.pi * m * k / d - math.pi * sigma_m_sq * m**2 / d)
    return kernel * phases[None, :]


def oracle_moment(
    params_clock: ClockParams,
    deltas,
    params_meas: MeasurementParams,
    queries,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
    dim_cap: int = ORACLE_DIM_CAP,
) -> complex:
    """< prod_k exp(2 pi i m_k xi_{I_k} / sqrt(d)) > by exact rho propagation.

    Brute force and convention-free: build rho, conjugate with the evolution
    unitary for each interval, multiply in the closed-form outcome integral
    of each measurement, read off the trace.  This is the referee for every
    factored formula in the correlations module.
    """
    from .clock import build_quasi_ideal_state

    d = params_clock.d
    if d > dim_cap:
        raise DimensionTooLarge(f"oracle limited to d <= {dim_cap}, got {d}")
    params_meas.require_smearing()
    deltas = np.asarray(deltas, dtype=float)
    j_count = deltas.size
    query_map = {}
    last = 0
    for m, i in queries:
        if i <= last:
            raise InvalidQuery("query indices must be strictly increasing")
        if not (1 <= i <= j_count):
            raise InvalidQuery(f"query index {i} outside 1..{j_count}")
        query_map[int(i)] = int(m)
        last = i
    suffix = 0
    for m, _ in reversed(list(queries)):
        suffix += m
        if abs(suffix) >= d:
            raise InvalidQuery("|suffix sum of m| must stay below d")

    state = build_quasi_ideal_state(params_clock, cfg)
    rho = DensityMatrix.from_state(state).entries
    j_idx = indices(d)
    c = np.exp(2j * np.pi * np.multiply.outer(j_idx, j_idx) / d) / math.sqrt(d)
    c_dag = c.conj().T
    deph = dephasing_multiplier(d, params_meas.sigma_m_sq, cfg)
    for j, delta in enumerate(deltas, start=1):
        phases = np.exp(-2j * np.pi * j_idx * delta / d)
        u = (c * phases) @ c_dag
        rho = u @ rho @ u.conj().T
        if j in query_map:
            rho = rho * query_multiplier(d, params_meas.sigma_m_sq, query_map[j], cfg)
        else:
            rho = rho * deph
    return complex(np.trace(rho))
