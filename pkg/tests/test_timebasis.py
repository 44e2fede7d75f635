"""Sharp-limit Markov chain: matrix structure, closed moments, scaled limits."""

import math

import numpy as np
import pytest

from clocksim.clock import evolve, indices, time_eigenstate
from clocksim.errors import InvalidParam, InvalidQuery
from clocksim.timebasis import (
    TimeBasisChainParams,
    analytic_moment,
    cauchy_limit_cf,
    chain_marginal,
    sample_chain,
    sample_chains,
    transition_eigenvalue,
    transition_matrix,
    uniform_limit_cf,
)


def exact_moment_by_matrix_powers(d, delta, k0, queries):
    m = transition_matrix(d, delta)
    v = np.zeros(d, dtype=complex)
    v[k0 + d // 2] = 1.0
    idx = np.arange(d) - d // 2
    prev = 0
    for q, i in queries:
        v = np.linalg.matrix_power(m, i - prev).astype(complex) @ v
        v *= np.exp(2j * np.pi * q * idx / d)
        prev = i
    return complex(v.sum())


class TestTransitionMatrix:
    def test_stochastic(self):
        m = transition_matrix(31, 0.37)
        assert np.max(np.abs(m.sum(axis=0) - 1.0)) < 1e-10
        assert m.min() > -1e-12

    def test_integer_delta_is_cyclic_permutation(self):
        d = 11
        m = transition_matrix(d, 3.0)
        perm = np.zeros((d, d))
        for pos in range(d):
            perm[(pos + 3) % d, pos] = 1.0
        assert np.max(np.abs(m - perm)) < 1e-12

    def test_matches_state_vector_overlaps(self):
        d, delta = 31, 0.37
        m = transition_matrix(d, delta)
        half = (d - 1) // 2
        for k in indices(d):
            ev = evolve(time_eigenstate(d, int(k)), delta)
            for l in indices(d):
                amp = np.vdot(time_eigenstate(d, int(l)).amplitudes, ev.amplitudes)
                assert abs(m[l + half, k + half] - abs(amp) ** 2) < 1e-12

    def test_eigenvector_identity(self):
        d, delta = 101, 0.5
        m = transition_matrix(d, delta)
        r = indices(d)
        for n in (-50, -7, 1, 13, 50):
            v = np.exp(2j * np.pi * n * r / d) / math.sqrt(d)
            lam = transition_eigenvalue(d, delta, n)
            assert np.max(np.abs(m @ v - lam * v)) < 1e-10

    def test_uniform_is_stationary(self):
        m = transition_matrix(31, 0.81)
        u = np.full(31, 1.0 / 31)
        assert np.max(np.abs(m @ u - u)) < 1e-12
        assert abs(np.max(np.abs(np.linalg.eigvals(m)))) <= 1.0 + 1e-10


class TestAnalyticMoment:
    def test_all_zero_queries(self):
        assert analytic_moment(11, 0.5, 0, [(0, 3)]) == 1.0

    def test_integer_delta_pure_phase(self):
        d, k0 = 31, 2
        val = analytic_moment(d, 2.0, k0, [(1, 4)])
        expected = np.exp(2j * np.pi * (k0 + 2.0 * 4) / d)
        assert abs(val - expected) < 1e-12
        assert abs(abs(val) - 1.0) < 1e-12

    @pytest.mark.parametrize(
        "d,delta,k0,queries",
        [
            (11, 0.5, 0, [(1, 5), (-2, 9)]),
            (11, 0.37, 3, [(1, 2), (1, 4), (-3, 7)]),
            (101, 0.5, 0, [(1, 5), (-2, 9)]),
            (31, 0.81, -4, [(-2, 3), (5, 6)]),
            (15, 0.5, 2, [(7, 3), (-3, 5), (1, 8)]),  # suffix beyond half: wraps
            (12, 0.37, 3, [(1, 2), (-3, 7)]),  # even d
        ],
    )
    def test_matches_matrix_powers(self, d, delta, k0, queries):
        ana = analytic_moment(d, delta, k0, queries)
        exact = exact_moment_by_matrix_powers(d, delta, k0, queries)
        assert abs(ana - exact) < 1e-12

    def test_modulus_bounded(self):
        val = analytic_moment(101, 0.37, 0, [(1, 4), (2, 9)])
        assert abs(val) <= 1.0 + 1e-12

    def test_rejects_unordered(self):
        with pytest.raises(InvalidQuery):
            analytic_moment(11, 0.5, 0, [(1, 4), (1, 2)])

    def test_matches_sampled_chains(self):
        d = 101
        queries = [(1, 5), (-2, 9)]
        chains = sample_chains(TimeBasisChainParams(d=d, delta=0.5, k0=0), 9, 200000, seed=3)
        w = np.exp(2j * np.pi * (chains[:, 4] - 2 * chains[:, 8]) / d)
        se = w.std() / math.sqrt(w.size)
        assert abs(w.mean() - analytic_moment(d, 0.5, 0, queries)) < 4 * se


class TestChains:
    def test_integer_delta_deterministic(self):
        params = TimeBasisChainParams(d=11, delta=3.0, k0=1)
        traj = sample_chain(params, 6, np.random.default_rng(0))
        expected = [((1 + 3 * (j + 1)) + 5) % 11 - 5 for j in range(6)]
        assert list(traj) == expected

    def test_block_reproducibility(self):
        params = TimeBasisChainParams(d=31, delta=0.5, k0=0)
        a = sample_chains(params, 5, 10000, seed=9, block_size=1024)
        b = sample_chains(params, 5, 10000, seed=9, block_size=1024)
        assert np.array_equal(a, b)

    def test_marginal_mixes_to_uniform(self):
        # the record chain mixes on the (slow) Theta(d log d) scale; the
        # marginal TV distance must shrink monotonically along the way
        d = 301
        params = TimeBasisChainParams(d=d, delta=0.5, k0=0)
        m = transition_matrix(d, 0.5)
        v = np.zeros(d)
        v[d // 2] = 1.0
        tvs = []
        checkpoints = [int(3 * math.sqrt(d)), 4 * d, 12 * d]
        step = 0
        for target in checkpoints:
            for _ in range(target - step):
                v = m @ v
            step = target
            tvs.append(0.5 * float(np.sum(np.abs(v - 1.0 / d))))
        assert tvs[0] > tvs[1] > tvs[2]
        assert tvs[-1] < 0.05


class TestLimitCfs:
    def test_trivial(self):
        assert cauchy_limit_cf([0.0], [1.0]) == 1.0
        assert uniform_limit_cf([0.0], [1.0]) == 1.0

    def test_single_time_forms(self):
        th, t = 1.5, 0.8
        val = cauchy_limit_cf([th], [t])
        assert abs(val - np.exp(2j * np.pi * th * t - 4.0 * th * t)) < 1e-15
        assert abs(uniform_limit_cf([1.0], [t]) - np.exp(2j * np.pi * t)) < 1e-15

    def test_input_validation(self):
        with pytest.raises(InvalidParam):
            cauchy_limit_cf([1.0], [0.5, 0.7])
        with pytest.raises(InvalidParam):
            cauchy_limit_cf([1.0, 1.0], [0.7, 0.5])

    def test_exact_chain_matches_cauchy_cf(self):
        # exact moment of the scaled chain (d = 4^p) against the limit CF
        p = 5
        d = 4**p
        for theta, t in [(1.0, 1.0), (2.0, 0.5), (-1.0, 0.7)]:
            i = int(np.floor(2 * t * math.sqrt(d)))
            m = int(theta * 2**p)
            exact = analytic_moment(d, 0.5, 0, [(m, i)])
            assert abs(exact - cauchy_limit_cf([theta], [t])) < 0.02

    def test_empirical_chains_match_cauchy_cf(self):
        p = 5
        d = 4**p
        params = TimeBasisChainParams(d=d, delta=0.5, k0=0)
        theta, t = -2.0, 1.0
        i = int(np.floor(2 * t * math.sqrt(d)))
        chains = sample_chains(params, i, 30000, seed=21)
        vals = np.exp(2j * np.pi * theta * chains[:, -1] / math.sqrt(d))
        assert abs(vals.mean() - cauchy_limit_cf([theta], [t])) < 0.05
