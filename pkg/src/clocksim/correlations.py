"""Exact factored pseudo-correlations: phase * C1 * C2 * C3.

For query integers m_1..m_n at strictly increasing measurement indices
I_1..I_n with inter-measurement intervals delta_j (grid units),

    < prod_k exp(2 pi i m_k xi_{I_k} / sqrt(d)) >
        = exp(+(2 pi i / d) sum_k m_k sum_{j <= I_k} delta_j)
          * C1(sum m_k) * prod_k C2(m_k) * C3

C1 is the wavefunction theta ratio at the total query weight, C2 the
measurement-imprecision theta ratio, and C3 the expectation of a complex
weight over a random walk on the centered energy window: the walk starts
from the state-induced distribution, steps by the theta kernel (the kernel
is mean-shifted at queried steps), and each visit j multiplies the weight by
exp(-2 pi i delta_j sign(s_j)) on the |s_j| sites with |p - s_j| > (d-1)/2,
where s_j is the suffix sum of the query integers still pending at step j.

The phase and damping signs were fixed against the dense density-matrix
oracle (see measurement.oracle_moment); agreement is at rounding level for
asymmetric delta, which pins both signs uniquely.

C3 is evaluated either exactly, by propagating the full complex distribution
vector with circular convolutions, or by Monte Carlo over sampled walks
(this is the only stochastic estimator in the module).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clock import ClockParams, indices
from .errors import InvalidParam, InvalidQuery, NormalizationDrift
from .measurement import MeasurementParams
from .rng import substream
from .theta import DEFAULT_CFG, ThetaEvalConfig, theta3

__all__ = [
    "CorrelationQuery",
    "FactorBreakdown",
    "step_distribution",
    "initial_distribution",
    "circular_convolve",
    "c3_transfer_matrix",
    "c3_monte_carlo",
    "factors_exact",
    "asymptotic_c1",
    "asymptotic_c2",
    "sharp_bound",
]

_DIRECT_CONV_MAX = 256
_MC_EXPERIMENT_ID = 11


@dataclass(frozen=True)
class CorrelationQuery:
    """Clock state, measurement smearing, interval schedule, and the queries.

    queries is a sequence of (m_k, I_k) with 1 <= I_1 < ... < I_n <=
    len(deltas) and every suffix sum of the m_k below d in magnitude.
    """

    clock: ClockParams
    meas: MeasurementParams
    deltas: tuple
    queries: tuple

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(x) for x in self.deltas))
        object.__setattr__(
            self, "queries", tuple((int(m), int(i)) for m, i in self.queries)
        )
        self.meas.require_smearing()
        last = 0
        for _, i in self.queries:
            if i <= last:
                raise InvalidQuery("query indices must be strictly increasing")
            last = i
        if self.queries and self.queries[-1][1] > len(self.deltas):
            raise InvalidQuery("last query index exceeds the delta schedule")
        suffix = 0
        for m, _ in reversed(self.queries):
            suffix += m
            if abs(suffix) >= self.clock.d:
                raise InvalidQuery("|suffix sum of m| must stay below d")

    @property
    def total_m(self) -> int:
        return sum(m for m, _ in self.queries)

    def suffix_sums(self) -> np.ndarray:
        """sums[j] for 1 <= j <= I_n: total m_k over queries with I_k >= j."""
        i_last = self.queries[-1][1] if self.queries else 0
        return _suffix_sums(self.queries, i_last)


def _suffix_sums(queries, i_last):
    sums = np.zeros(i_last + 1, dtype=int)
    for m, i in queries:
        sums[1 : i + 1] += m
    return sums  # sums[j] = sum of m_k with I_k >= j


@dataclass(frozen=True)
class FactorBreakdown:
    """phase * c1 * c2 * c3 decomposition of one pseudo-correlation."""

    phase: complex
    c1: float
    c2: float
    c3: complex
    product: complex

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-9:
            raise InvalidParam("phase must be unit modulus")
        if not (0.0 < self.c1 <= 1.0 + 1e-9 and 0.0 < self.c2 <= 1.0 + 1e-9):
            raise InvalidParam("c1, c2 must lie in (0, 1]")
        if abs(self.c3) > 1.0 + 1e-9:
            raise InvalidParam(f"|c3| = {abs(self.c3)} exceeds 1")
        if abs(self.product - self.phase * self.c1 * self.c2 * self.c3) > 1e-12:
            raise InvalidParam("product does not match its factors")


def step_distribution(
    d: int, sigma_m_sq: float, shift_m: int = 0, cfg: ThetaEvalConfig = DEFAULT_CFG
) -> np.ndarray:
    """Jump distribution of the walk over q in -(d-1)/2 .. (d-1)/2.

    Unshifted jumps have mean zero; the kernel of a step queried with
    integer m is shifted by m/(2d) in its theta argument (mean -m/2).  The
    closed-form normalizer makes the lattice sum exactly 1.
    """
    if sigma_m_sq <= 0.0:
        raise InvalidParam("sigma_m_sq must be positive")
    q = indices(d)
    num = theta3(q / d + shift_m / (2 * d), 1.0 / (2 * sigma_m_sq * d), cfg)
    den = (
        math.sqrt(2 * sigma_m_sq * d)
        * math.exp(-math.pi * sigma_m_sq * shift_m**2 / (2 * d))
        * theta3(1j * (sigma_m_sq / d) * shift_m, 2 * sigma_m_sq / d, cfg).real
    )
    dist = num / den
    total = float(dist.sum())
    if abs(total - 1.0) > 1e-8:
        raise NormalizationDrift(f"step kernel sums to {total}")
    return dist


def _c1_normalizer(d, xi_sq, r, cfg):
    return theta3(r / (2 * d), 1.0 / (2 * xi_sq * d), cfg) * theta3(
        r / 2, d / (2 * xi_sq), cfg
    ) + theta3(0.5 - r / (2 * d), 1.0 / (2 * xi_sq * d), cfg) * theta3(
        r / 2 + 0.5, d / (2 * xi_sq), cfg
    )


def initial_distribution(
    clock: ClockParams, msum: int = 0, cfg: ThetaEvalConfig = DEFAULT_CFG
) -> np.ndarray:
    """State-induced start distribution of the walk (energy index window)."""
    d, xi_sq, n0 = clock.d, clock.width_sq, clock.n0
    if abs(msum) >= d:
        raise InvalidQuery("|msum| must be below d")
    p = indices(d)
    num = theta3((p - n0 - msum) / d, 1.0 / (xi_sq * d), cfg) * theta3(
        (p - n0) / d, 1.0 / (xi_sq * d), cfg
    )
    den = (d / 2) * _c1_normalizer(d, xi_sq, msum, cfg)
    dist = num / den
    if np.any(dist < -1e-15) or den <= 0.0:
        raise NormalizationDrift("initial distribution lost positivity")
    total = float(dist.sum())
    if abs(total - 1.0) > 1e-8:
        raise NormalizationDrift(f"initial distribution sums to {total}")
    return dist


def circular_convolve(a: np.ndarray, b: np.ndarray, method: str = "auto") -> np.ndarray:
    """Circular convolution on the centered window.

    Direct O(d^2) for small d, FFT above; both paths agree to 1e-10 and the
    dispatch point is fixed so results are reproducible.
    """
    d = a.size
    if b.size != d:
        raise InvalidParam("arrays must share a length")
    if method == "auto":
        method = "direct" if d < _DIRECT_CONV_MAX else "fft"
    s = (d - 1) // 2
    a_std = np.roll(a, -s)
    b_std = np.roll(b, -s)
    if method == "direct":
        out = np.array(
            [np.dot(a_std, np.roll(b_std[::-1], r + 1)) for r in range(d)]
        )
    elif method == "fft":
        out = np.fft.ifft(np.fft.fft(a_std) * np.fft.fft(b_std))
        if not np.iscomplexobj(a) and not np.iscomplexobj(b):
            out = out.real
    else:
        raise InvalidParam(f"unknown convolution method {method!r}")
    return np.roll(out, s)


def _damping_multipliers(query: CorrelationQuery):
    """Per-step (multiplier, damped-site mask) pairs, or None when trivial."""
    d = query.clock.d
    p = indices(d)
    if not query.queries:
        return []
    i_last = query.queries[-1][1]
    sums = _suffix_sums(query.queries, i_last)
    out = []
    for j in range(1, i_last + 1):
        s = int(sums[j])
        delta = query.deltas[j - 1]
        # integer delta: the per-visit multiplier is exactly 1
        if s == 0 or delta == round(delta):
            out.append(None)
            continue
        mult = complex(np.exp(-2j * np.pi * delta * np.sign(s)))
        mask = np.abs(p - s) > (d - 1) / 2
        out.append((mult, mask))
    return out


def c3_transfer_matrix(query: CorrelationQuery, cfg: ThetaEvalConfig = DEFAULT_CFG) -> complex:
    """Exact walk expectation by forward propagation of the weighted vector."""
    if not query.queries:
        return 1.0 + 0j
    d = query.clock.d
    i_last = query.queries[-1][1]
    qmap = {i: m for m, i in query.queries}
    v = initial_distribution(query.clock, query.total_m, cfg).astype(complex)
    plain = step_distribution(d, query.meas.sigma_m_sq, 0, cfg)
    steps = _damping_multipliers(query)
    for j in range(1, i_last + 1):
        entry = steps[j - 1]
        if entry is not None:
            mult, mask = entry
            v[mask] *= mult
        if j < i_last:
            shift = qmap.get(j, 0)
            kern = plain if shift == 0 else step_distribution(
                d, query.meas.sigma_m_sq, shift, cfg
            )
            v = circular_convolve(v, kern.astype(complex))
    c3 = complex(v.sum())
    if abs(c3) > 1.0 + 1e-9:
        raise NormalizationDrift(f"|C3| = {abs(c3)} exceeds 1")
    return c3


def c3_monte_carlo(
    query: CorrelationQuery,
    samples: int,
    seed: int,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
    n_workers: int = 1,
    block_size: int = 4096,
):
    """Monte-Carlo walk estimate of C3 with componentwise standard errors.

    Walks are sampled in fixed blocks; block b draws from the counter-keyed
    stream (seed, experiment, b), and block partial sums are combined with
    compensated summation in block order, so the estimate is bit-identical
    for any worker count.
    """
    if samples < 1:
        raise InvalidQuery("samples must be positive")
    if not query.queries:
        return 1.0 + 0j, 0.0
    d = query.clock.d
    i_last = query.queries[-1][1]
    qmap = {i: m for m, i in query.queries}
    half = (d - 1) // 2

    init_cdf = np.cumsum(initial_distribution(query.clock, query.total_m, cfg))
    plain_cdf = np.cumsum(step_distribution(d, query.meas.sigma_m_sq, 0, cfg))
    shift_cdfs = {
        j: np.cumsum(step_distribution(d, query.meas.sigma_m_sq, m, cfg))
        for j, m in ((i, m) for m, i in query.queries)
        if m != 0 and j < i_last
    }
    steps = _damping_multipliers(query)
    sums = _suffix_sums(query.queries, i_last)

    def run_block(b):
        lo = b * block_size
        n = min(block_size, samples - lo)
        rng = substream(seed, _MC_EXPERIMENT_ID, b)
        u = rng.random((n, i_last))
        pos = np.searchsorted(init_cdf, u[:, 0]) - half
        w = np.ones(n, dtype=complex)
        for j in range(1, i_last + 1):
            entry = steps[j - 1]
            if entry is not None:
                mult, _ = entry
                hit = np.abs(pos - sums[j]) > half
                w[hit] *= mult
            if j < i_last:
                cdf = shift_cdfs.get(j, plain_cdf)
                jump = np.searchsorted(cdf, u[:, j]) - half
                pos = (pos + jump + half) % d - half
        return w.sum(), (w.real**2).sum(), (w.imag**2).sum(), w.real.sum(), w.imag.sum()

    n_blocks = (samples + block_size - 1) // block_size
    if n_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            parts = list(ex.map(run_block, range(n_blocks)))
    else:
        parts = [run_block(b) for b in range(n_blocks)]

    total = complex(math.fsum(p[0].real for p in parts), math.fsum(p[0].imag for p in parts))
    sum_re2 = math.fsum(p[1] for p in parts)
    sum_im2 = math.fsum(p[2] for p in parts)
    sum_re = math.fsum(p[3] for p in parts)
    sum_im = math.fsum(p[4] for p in parts)
    mean = total / samples
    if samples > 1:
        var_re = max(sum_re2 / samples - (sum_re / samples) ** 2, 0.0)
        var_im = max(sum_im2 / samples - (sum_im / samples) ** 2, 0.0)
        stderr = math.sqrt((var_re + var_im) / (samples - 1))
    else:
        stderr = float("inf")
    return mean, stderr


def c2_factor(d, sigma_m_sq, ms, cfg=DEFAULT_CFG) -> float:
    # real-argument form of theta3(i s m / d, 2 i s / d) e^{-pi s m^2 / d}
    # / theta3(0, 2 i s / d); equivalent and safe for any sigma_m_sq / d
    out = 1.0
    for m in ms:
        out *= (
            theta3(m / 2.0, d / (2 * sigma_m_sq), cfg)
            / theta3(0.0, d / (2 * sigma_m_sq), cfg)
            * math.exp(-math.pi * sigma_m_sq * m**2 / (2 * d))
        )
    return out


def c1_factor(d, xi_sq, msum, cfg=DEFAULT_CFG) -> float:
    return float(
        _c1_normalizer(d, xi_sq, msum, cfg) / _c1_normalizer(d, xi_sq, 0, cfg)
    )


def factors_exact(
    query: CorrelationQuery,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
    mc_samples: int = 0,
    seed: int = 0,
) -> FactorBreakdown:
    """Full factor breakdown; C3 exact unless mc_samples > 0."""
    d = query.clock.d
    deltas = np.asarray(query.deltas)
    phase = complex(
        np.exp(
            2j * np.pi / d * sum(m * deltas[:i].sum() for m, i in query.queries)
        )
    )
    c1 = c1_factor(d, query.clock.width_sq, query.total_m, cfg)
    c2 = c2_factor(d, query.meas.sigma_m_sq, [m for m, _ in query.queries], cfg)
    if mc_samples > 0:
        c3, _ = c3_monte_carlo(query, mc_samples, seed, cfg)
    else:
        c3 = c3_transfer_matrix(query, cfg)
    return FactorBreakdown(phase=phase, c1=c1, c2=c2, c3=c3, product=phase * c1 * c2 * c3)


def asymptotic_c1(d, alpha, c_const, r: int) -> float:
    """Large-d wavefunction factor for xi^2 = c d^alpha and total weight r."""
    return math.exp(-math.pi * c_const * r**2 * d ** (alpha - 1.0) / 2.0)


def asymptotic_c2(d, beta, c_const, ms) -> float:
    """Large-d imprecision factor for sigma_m^2 = c d^beta (beta < 1 branch)."""
    total = sum(m**2 for m in ms)
    return math.exp(-math.pi * c_const * total * d ** (beta - 1.0) / 2.0)


def sharp_bound(d, t) -> float:
    """Leading upper bound 1 - t/sqrt(d) on |<e^{2 pi i xi_I/sqrt d}>| for
    sharp measurement (sigma_m^2 well below 1/sqrt(d)), I = ceil(t sqrt d)."""
    return 1.0 - t / math.sqrt(d)
