"""Projective measurement in the time eigenbasis (the sharp limit).

Starting from a time eigenstate and measuring in the time basis after every
free-evolution interval delta/sqrt(d) collapses the clock to a time
eigenstate each round, so the record is a Markov chain on the time index
ring.  The transition matrix is circulant with Fourier multipliers

    g(r) = exp(-2 pi i delta r / d) (1 - (1 - exp(2 pi i delta sign(r))) |r| / d)

over the centered index window, which also gives the closed-form moments:
for queries (m_k, I_k) with suffix sums s_k = m_k + ... + m_n,

    < prod_k exp(2 pi i m_k l_{I_k} / d) >
        = exp(2 pi i sum_k m_k (k0 + delta I_k) / d)
          * prod_k (1 - (1 - exp(-2 pi i delta sign(s_k))) |s_k| / d)^(I_k - I_{k-1})

The suffix-sum placement and damping sign follow from the eigen
decomposition (each query shifts the active Fourier index by its m_k) and
are pinned by the exact-matrix-power tests.

Scaled to continuous time by sampling the chain at measurement number
floor(2 t sqrt(d)) with delta = 1/2, the record converges to a Cauchy
process with drift; with theta-smeared measurement of moderate sharpness it
converges to uniform motion instead.  The limiting characteristic functions
live here; the Cauchy damping rate is 4 (two damped boundary crossings per
unit time at delta = 1/2), fixed against exact chain marginals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam, InvalidQuery
from .rng import substream

__all__ = [
    "TimeBasisChainParams",
    "transition_matrix",
    "transition_eigenvalue",
    "analytic_moment",
    "sample_chain",
    "sample_chains",
    "chain_marginal",
    "cauchy_limit_cf",
    "uniform_limit_cf",
    "CAUCHY_DAMPING_RATE",
]

CAUCHY_DAMPING_RATE = 4.0
_CHAIN_EXPERIMENT_ID = 23


def _window(d: int) -> np.ndarray:
    # centered index window; unlike the clock states, the chain also
    # supports even d (the scaled process uses d = 4**p)
    return np.arange(d) - d // 2


@dataclass(frozen=True)
class TimeBasisChainParams:
    """Ring dimension, interval in grid units, and the initial time index."""

    d: int
    delta: float
    k0: int = 0

    def __post_init__(self):
        if self.d < 3:
            raise InvalidParam(f"d must be >= 3, got {self.d}")
        if not (-(self.d // 2) <= self.k0 <= (self.d - 1) // 2):
            raise InvalidParam(f"k0={self.k0} outside index window")


def transition_eigenvalue(d: int, delta: float, r: int) -> complex:
    """Fourier multiplier of the chain at (wrapped) index r."""
    half = d // 2
    r = (r + half) % d - half
    damp = 1.0 - (1.0 - np.exp(2j * np.pi * delta * np.sign(r))) * abs(r) / d
    return complex(np.exp(-2j * np.pi * delta * r / d) * damp)


def transition_matrix(d: int, delta: float) -> np.ndarray:
    """M[l, k] = probability of landing on l when measured from |theta_k>."""
    r = _window(d)
    g = np.array([transition_eigenvalue(d, delta, int(x)) for x in r])
    # first column: M[l, 0] = (1/d) sum_r g(r) e^{2 pi i r l / d}
    col = ((np.exp(2j * np.pi * np.multiply.outer(r, r) / d) @ g) / d).real
    half = d // 2
    m = np.empty((d, d))
    for pos in range(d):
        m[:, pos] = np.roll(col, pos - half)
    return m


def _wrap(r, d):
    half = d // 2
    return (r + half) % d - half


def analytic_moment(d: int, delta: float, k0: int, queries) -> complex:
    """Closed-form < prod_k exp(2 pi i m_k l_{I_k} / d) > for the chain."""
    queries = [(int(m), int(i)) for m, i in queries]
    last = 0
    for _, i in queries:
        if i <= last:
            raise InvalidQuery("query indices must be strictly increasing")
        last = i
    total = sum(m for m, _ in queries)
    out = complex(np.exp(2j * np.pi * total * k0 / d))
    acc = 0
    suffixes = []
    for m, _ in reversed(queries):
        acc += m
        suffixes.append(acc)
    suffixes.reverse()
    prev_i = 0
    for (m, i), s in zip(queries, suffixes):
        lam = transition_eigenvalue(d, delta, _wrap(-s, d))
        out *= lam ** (i - prev_i)
        prev_i = i
    return complex(out)


def chain_marginal(params: TimeBasisChainParams, steps: int) -> np.ndarray:
    """Exact distribution after `steps` measurements by repeated mat-vec."""
    m = transition_matrix(params.d, params.delta)
    v = np.zeros(params.d)
    v[params.k0 + params.d // 2] = 1.0
    for _ in range(steps):
        v = m @ v
    return v


def sample_chain(
    params: TimeBasisChainParams,
    steps: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """One trajectory of time indices (length `steps`)."""
    return sample_chains(params, steps, 1, rng=rng)[0]


def sample_chains(
    params: TimeBasisChainParams,
    steps: int,
    n_chains: int,
    rng: np.random.Generator | None = None,
    seed: int = 0,
    block_size: int = 8192,
) -> np.ndarray:
    """Vectorized trajectories, shape (n_chains, steps).

    With an explicit rng all uniforms come from it in a fixed order; with a
    seed, blocks of chains use counter-keyed substreams so the ensemble is
    reproducible under any parallel split.
    """
    d, delta, k0 = params.d, params.delta, params.k0
    half = d // 2
    r = _window(d)
    g = np.array([transition_eigenvalue(d, delta, int(x)) for x in r])
    jump = ((np.exp(2j * np.pi * np.multiply.outer(r, r) / d) @ g) / d).real
    jump = np.clip(jump, 0.0, None)
    cdf = np.cumsum(jump)
    cdf /= cdf[-1]
    out = np.empty((n_chains, steps), dtype=np.int64)
    done = 0
    block = 0
    while done < n_chains:
        n = min(block_size, n_chains - done)
        gen = rng if rng is not None else substream(seed, _CHAIN_EXPERIMENT_ID, block)
        u = gen.random((n, steps))
        pos = np.full(n, k0, dtype=np.int64)
        for j in range(steps):
            jumps = np.searchsorted(cdf, u[:, j]) - half
            pos = (pos + jumps + half) % d - half
            out[done : done + n, j] = pos
        done += n
        block += 1
    return out


def cauchy_limit_cf(thetas, times) -> complex:
    """Limit CF of the sharp-measurement record sampled at floor(2 t sqrt d).

    e^{2 pi i sum theta_k t_k} e^{-4 sum_k |suffix_k| (t_k - t_{k-1})} with
    suffix_k = theta_k + ... + theta_n and t_0 = 0.
    """
    thetas = list(thetas)
    times = list(times)
    if len(thetas) != len(times):
        raise InvalidParam("thetas and times must pair up")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise InvalidParam("times must be increasing")
    drift = sum(th * t for th, t in zip(thetas, times))
    acc = 0.0
    suffixes = []
    for th in reversed(thetas):
        acc += th
        suffixes.append(acc)
    suffixes.reverse()
    decay = 0.0
    prev = 0.0
    for s, t in zip(suffixes, times):
        decay += abs(s) * (t - prev)
        prev = t
    return complex(np.exp(2j * np.pi * drift - CAUCHY_DAMPING_RATE * decay))


def uniform_limit_cf(thetas, times) -> complex:
    """Limit CF of the moderately-sharp record: pure drift e^{2 pi i sum theta t}."""
    thetas = list(thetas)
    times = list(times)
    if len(thetas) != len(times):
        raise InvalidParam("thetas and times must pair up")
    drift = sum(th * t for th, t in zip(thetas, times))
    return complex(np.exp(2j * np.pi * drift))
