"""Clock states on the d-dimensional ring and their free evolution.

Conventions (fixed package-wide):

* energy indices k and time indices j both run over the centered window
  ``-(d-1)/2 .. (d-1)/2`` of odd ``d``, stored ascending;
* the time eigenstates are ``|theta_j> = d**-0.5 sum_k exp(-2 pi i j k / d)
  |k>``, i.e. ``<theta_j|k> = d**-0.5 exp(+2 pi i j k / d)``;
* the Hamiltonian is ``(2 pi / sqrt(d)) sum_k k |k><k|`` and times are
  quoted in grid units (one grid unit = physical time ``1/sqrt(d)``), so
  evolving by one grid unit maps ``|theta_j>`` to ``|theta_{j+1 mod d}>``
  exactly.

The reference state is a theta-function envelope over time eigenstates,

    <theta_k|Psi0> = N theta3(k/d, i xi^2 / d) exp(2 pi i n0 k / d),

whose energy amplitudes come out as ``N' theta3((p - n0)/d, i/(xi^2 d))``:
time spread ``xi^2 d / (4 pi)``, mean energy index ``n0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, IndexOutOfRange, InvalidParam
from .theta import DEFAULT_CFG, ThetaEvalConfig, theta3

__all__ = [
    "Basis",
    "ClockParams",
    "StateVector",
    "indices",
    "build_quasi_ideal_state",
    "quasi_ideal_energy_amplitudes",
    "time_eigenstate",
    "evolve",
    "change_basis",
    "qnd_commutator_element",
]

_DIRECT_DFT_MAX = 512
_DENSE_DIM_CAP = 2049


class Basis(enum.Enum):
    ENERGY = "energy"
    TIME = "time"


def _require_odd(d: int) -> int:
    d = int(d)
    if d < 3 or d % 2 == 0:
        raise InvalidParam(f"dimension must be odd and >= 3, got {d}")
    return d


def indices(d: int) -> np.ndarray:
    """Centered index window -(d-1)/2 .. (d-1)/2, ascending."""
    d = _require_odd(d)
    return np.arange(d) - (d - 1) // 2


@dataclass(frozen=True)
class ClockParams:
    """Dimension, squared envelope width xi^2, and mean energy index n0."""

    d: int
    width_sq: float
    n0: int = 0

    def __post_init__(self):
        _require_odd(self.d)
        if not (self.width_sq > 0.0 and math.isfinite(self.width_sq)):
            raise InvalidParam(f"width_sq must be positive, got {self.width_sq}")
        if abs(self.n0) > (self.d - 1) // 2:
            raise InvalidParam(f"n0={self.n0} outside index window for d={self.d}")


@dataclass(frozen=True)
class StateVector:
    """Unit vector on the ring, tagged with the basis its amplitudes use."""

    amplitudes: np.ndarray
    basis: Basis

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        d = amps.shape[0]
        _require_odd(d)
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-10:
            raise InvalidParam(f"state norm^2 = {norm_sq} deviates from 1")

    @property
    def d(self) -> int:
        return self.amplitudes.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _dft_energy_to_time(psi: np.ndarray) -> np.ndarray:
    """c_j = d**-0.5 sum_k exp(2 pi i j k / d) psi_k on centered windows."""
    d = psi.shape[0]
    s = (d - 1) // 2
    if d <= _DIRECT_DFT_MAX:
        j = indices(d)
        w = np.exp(2j * np.pi * np.multiply.outer(j, j) / d) / math.sqrt(d)
        return w @ psi
    std = np.roll(psi, -s)
    out = math.sqrt(d) * np.fft.ifft(std)
    return np.roll(out, s)


def _dft_time_to_energy(c: np.ndarray) -> np.ndarray:
    d = c.shape[0]
    s = (d - 1) // 2
    if d <= _DIRECT_DFT_MAX:
        j = indices(d)
        w = np.exp(-2j * np.pi * np.multiply.outer(j, j) / d) / math.sqrt(d)
        return w @ c
    std = np.roll(c, -s)
    out = np.fft.fft(std) / math.sqrt(d)
    return np.roll(out, s)


def change_basis(state: StateVector, target: Basis) -> StateVector:
    """Unitary basis change; the round trip is the identity to 1e-12."""
    if state.basis == target:
        return state
    if target == Basis.TIME:
        return StateVector(_dft_energy_to_time(state.amplitudes), Basis.TIME)
    return StateVector(_dft_time_to_energy(state.amplitudes), Basis.ENERGY)


def build_quasi_ideal_state(
    params: ClockParams, cfg: ThetaEvalConfig = DEFAULT_CFG
) -> StateVector:
    """Theta-envelope clock state, returned in the time basis.

    The normalizer is the closed-form theta product, not a numerical
    renormalization, so unit norm to 1e-10 is itself a correctness check.
    """
    d, xi_sq, n0 = params.d, params.width_sq, params.n0
    norm_denom = theta3(0.0, xi_sq / (2 * d), cfg) * theta3(0.0, d * xi_sq / 2, cfg)
    # d odd: theta3(d/2, .) == theta3(1/2, .) by 1-periodicity.
    norm_denom += theta3(0.5, xi_sq / (2 * d), cfg) * theta3(0.5, d * xi_sq / 2, cfg)
    norm = math.sqrt(2.0 / d) / math.sqrt(norm_denom)
    k = indices(d)
    amps = norm * theta3(k / d, xi_sq / d, cfg) * np.exp(2j * np.pi * n0 * k / d)
    return StateVector(amps, Basis.TIME)


def quasi_ideal_energy_amplitudes(
    params: ClockParams, cfg: ThetaEvalConfig = DEFAULT_CFG
) -> np.ndarray:
    """Closed-form energy amplitudes N' theta3((p - n0)/d, i/(xi^2 d)).

    Same state as ``build_quasi_ideal_state`` after a basis change; kept
    separate so the transform can be tested against the closed form.
    """
    d, xi_sq, n0 = params.d, params.width_sq, params.n0
    inv = 1.0 / xi_sq
    norm_denom = theta3(0.0, inv / (2 * d), cfg) * theta3(0.0, d * inv / 2, cfg)
    norm_denom += theta3(0.5, inv / (2 * d), cfg) * theta3(0.5, d * inv / 2, cfg)
    norm = math.sqrt(2.0 / d) / math.sqrt(norm_denom)
    p = indices(d)
    return norm * theta3((p - n0) / d, 1.0 / (xi_sq * d), cfg) + 0j


def time_eigenstate(d: int, j: int) -> StateVector:
    """|theta_j> expressed in the energy basis."""
    d = _require_odd(d)
    if abs(j) > (d - 1) // 2:
        raise IndexOutOfRange(f"time index {j} outside window for d={d}")
    k = indices(d)
    amps = np.exp(-2j * np.pi * j * k / d) / math.sqrt(d)
    return StateVector(amps, Basis.ENERGY)


def evolve(state: StateVector, dt_grid: float) -> StateVector:
    """Free evolution by dt_grid grid units; returns an energy-basis state."""
    st = change_basis(state, Basis.ENERGY)
    k = indices(st.d)
    phases = np.exp(-2j * np.pi * k * dt_grid / st.d)
    return StateVector(st.amplitudes * phases, Basis.ENERGY)


def _time_basis_propagator(d: int, t: float) -> np.ndarray:
    """U(t) in the time basis: C diag(exp(-2 pi i k t / d)) C^dagger."""
    j = indices(d)
    c = np.exp(2j * np.pi * np.multiply.outer(j, j) / d) / math.sqrt(d)
    phases = np.exp(-2j * np.pi * j * t / d)
    return (c * phases) @ c.conj().T


def qnd_commutator_element(
    params: ClockParams,
    t0: float,
    t1: float,
    k: int,
    periodic: bool = False,
    mn: tuple[int, int] = (1, 1),
    dim_cap: int = _DENSE_DIM_CAP,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
) -> complex:
    """<theta_k| [A(t1), B(t0)] |Psi0> by dense linear algebra.

    A, B are the Heisenberg time operator at the two times (eigenvalue
    labels j, i.e. grid units), or its d-periodized exponentials
    exp(2 pi i n T(t1) / d), exp(2 pi i m T(t0) / d) when ``periodic``.
    No asymptotics anywhere: O(d^3) matrix products, hence the cap.
    """
    d = params.d
    if d > dim_cap:
        raise DimensionTooLarge(f"d={d} exceeds dense cap {dim_cap}")
    if abs(k) > (d - 1) // 2:
        raise IndexOutOfRange(f"time index {k} outside window for d={d}")
    if max(abs(t0), abs(t1)) >= (d - 1) / 2:
        raise InvalidParam("|t0|, |t1| must be below (d-1)/2")
    j = indices(d).astype(float)
    u0 = _time_basis_propagator(d, t0)
    u1 = _time_basis_propagator(d, t1)
    if periodic:
        m, n = mn
        diag1 = np.exp(2j * np.pi * n * j / d)
        diag0 = np.exp(2j * np.pi * m * j / d)
    else:
        diag1 = j
        diag0 = j
    op1 = u1.conj().T @ (diag1[:, None] * u1)
    op0 = u0.conj().T @ (diag0[:, None] * u0)
    comm = op1 @ op0 - op0 @ op1
    psi = change_basis(build_quasi_ideal_state(params, cfg), Basis.TIME).amplitudes
    vec = comm @ psi
    return complex(vec[k + (d - 1) // 2])
