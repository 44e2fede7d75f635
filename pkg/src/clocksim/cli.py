"""Command-line harness for the simulation experiments.

Every run is reproducible from (arguments, --seed); stochastic estimators
use counter-keyed substreams so --threads never changes results.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__
from .clock import ClockParams, qnd_commutator_element
from .correlations import CorrelationQuery, factors_exact
from .errors import ClockSimError
from .experiments import (
    PRESETS,
    SweepConfig,
    fit_loglog_slope,
    preset_config,
    run_figure1_sweep,
    write_csv,
)
from .measurement import MeasurementParams, oracle_moment, run_chain
from .oscillator import ForceEstimatorSpec, fd_estimator_variance, variance_floor
from .rng import substream
from .timebasis import TimeBasisChainParams, analytic_moment, sample_chains
from .waveform import WaveformExperimentConfig, estimation_error_samples

# The sign conventions every formula in the package resolved against the
# dense oracle; hashed into --version so outputs are traceable to them.
_CONVENTIONS = (
    "phase=+2pi/d sum m_k sum_{j<=I_k} delta_j;"
    "damping=exp(-2pi i delta sign(suffix));"
    "moment-kernel=k'-phase;"
    "timebasis=suffix-sums;"
    "cauchy-rate=4;"
    "random-phase-damping=1-exp(-2pi^2 sigma^2)"
)


def convention_hash() -> str:
    return hashlib.sha256(_CONVENTIONS.encode()).hexdigest()[:12]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="clocksim",
        description="Measured-clock backaction experiments",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"clocksim {__version__} (conventions {convention_hash()})",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--config", type=str, default=None)
    parser.add_argument("--out", type=str, default=None)
    parser.add_argument("--tol", type=float, default=1e-8)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="factor scaling scan over dimension")
    p_sweep.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p_sweep.add_argument("--exact-c3", action="store_true")
    p_sweep.add_argument("--samples", type=int, default=None)
    p_sweep.add_argument("--d-grid", type=int, nargs="+", default=None)

    p_corr = sub.add_parser("correlate", help="single factored query as JSON")
    p_corr.add_argument("--d", type=int, required=True)
    p_corr.add_argument("--xi-sq", type=float, required=True)
    p_corr.add_argument("--sigma-m-sq", type=float, required=True)
    p_corr.add_argument("--n0", type=int, default=0)
    p_corr.add_argument("--delta", type=float, default=0.5)
    p_corr.add_argument("--steps", type=int, required=True)
    p_corr.add_argument(
        "--query", type=int, nargs=2, action="append", required=True,
        metavar=("M", "I"),
    )

    p_chain = sub.add_parser("chain", help="sample one measurement chain to CSV")
    p_chain.add_argument("--d", type=int, required=True)
    p_chain.add_argument("--xi-sq", type=float, required=True)
    p_chain.add_argument("--sigma-m-sq", type=float, required=True)
    p_chain.add_argument("--delta", type=float, default=0.5)
    p_chain.add_argument("--steps", type=int, required=True)

    p_oracle = sub.add_parser(
        "oracle-check", help="factored formula vs dense oracle on a built-in grid"
    )
    p_oracle.add_argument("--quick", action="store_true")

    p_osc = sub.add_parser("oscillator", help="force-estimator variance floor scan")
    p_osc.add_argument("--tau-min", type=float, default=0.02)
    p_osc.add_argument("--tau-max", type=float, default=1.0)
    p_osc.add_argument("--tau-points", type=int, default=10)

    p_wave = sub.add_parser("waveform", help="drive estimation error scan")
    p_wave.add_argument("--d-grid", type=int, nargs="+",
                        default=[501, 1001, 2001, 4001, 8001])
    p_wave.add_argument("--sigma-m-exponent", type=float, default=-0.4)
    p_wave.add_argument("--noise-sigma", type=float, default=0.1)
    p_wave.add_argument("--trials", type=int, default=60)
    p_wave.add_argument("--steps", type=int, default=12)

    p_tb = sub.add_parser("timebasis", help="sharp-limit chain vs closed form")
    p_tb.add_argument("--d", type=int, default=101)
    p_tb.add_argument("--delta", type=float, default=0.5)
    p_tb.add_argument("--chains", type=int, default=100000)

    p_qnd = sub.add_parser("qnd-decay", help="commutator magnitude vs dimension")
    p_qnd.add_argument("--d-grid", type=int, nargs="+",
                       default=[11, 21, 41, 81, 161])
    p_qnd.add_argument("--t0", type=float, default=1.5)
    p_qnd.add_argument("--t1", type=float, default=2.0)
    return parser


def _cmd_sweep(args):
    if args.config:
        cfg = SweepConfig.from_json(args.config)
    elif args.preset:
        cfg = preset_config(args.preset, seed=args.seed)
    else:
        cfg = SweepConfig(seed=args.seed)
    overrides = {}
    if args.exact_c3:
        overrides["exact_c3"] = True
    if args.samples is not None:
        overrides["samples"] = args.samples
    if args.d_grid is not None:
        overrides["d_grid"] = tuple(args.d_grid)
    if overrides:
        import dataclasses

        cfg = dataclasses.replace(cfg, **overrides)
    rows = run_figure1_sweep(cfg, n_workers=args.threads)
    if args.out:
        write_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        from .experiments import sweep_rows_to_csv

        sys.stdout.write(sweep_rows_to_csv(rows))
    return 0


def _cmd_correlate(args):
    query = CorrelationQuery(
        clock=ClockParams(d=args.d, width_sq=args.xi_sq, n0=args.n0),
        meas=MeasurementParams(sigma_m_sq=args.sigma_m_sq),
        deltas=(args.delta,) * args.steps,
        queries=tuple((m, i) for m, i in args.query),
    )
    fb = factors_exact(query)
    payload = dict(
        phase_re=fb.phase.real,
        phase_im=fb.phase.imag,
        c1=fb.c1,
        c2=fb.c2,
        c3_re=fb.c3.real,
        c3_im=fb.c3.imag,
        product_re=fb.product.real,
        product_im=fb.product.imag,
    )
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_chain(args):
    from .clock import build_quasi_ideal_state

    state = build_quasi_ideal_state(ClockParams(d=args.d, width_sq=args.xi_sq))
    rng = substream(args.seed, "cli-chain", 0)
    record = run_chain(
        state,
        [args.delta] * args.steps,
        MeasurementParams(sigma_m_sq=args.sigma_m_sq),
        args.d,
        rng,
        seed=args.seed,
    )
    if args.out:
        record.to_csv(args.out)
        print(f"wrote {args.steps} outcomes to {args.out}")
    else:
        print("step,delta,outcome")
        for j, (dlt, out) in enumerate(zip(record.deltas, record.outcomes), 1):
            print(f"{j},{dlt:.17g},{out:.17g}")
    return 0


def _oracle_grid(quick: bool):
    ds = (5, 11) if quick else (3, 5, 11, 31)
    deltas_opts = ((0.5, 0.3, 1.0, 0.5, 0.3),)
    sigma_opts = (0.5,) if quick else (0.05, 0.5, 5.0)
    xi_opts = (1.0,) if quick else (0.2, 1.0, 5.0)
    for d in ds:
        for sigma in sigma_opts:
            for xi in xi_opts:
                for n0 in (0, 2):
                    for queries in (((-1, 4),), ((2, 1), (-1, 3)), ((1, 2), (1, 5))):
                        yield d, xi, n0, sigma, deltas_opts[0], queries


def _cmd_oracle_check(args):
    worst = 0.0
    count = 0
    for d, xi, n0, sigma, deltas, queries in _oracle_grid(args.quick):
        query = CorrelationQuery(
            clock=ClockParams(d=d, width_sq=xi, n0=n0),
            meas=MeasurementParams(sigma_m_sq=sigma),
            deltas=deltas,
            queries=queries,
        )
        fb = factors_exact(query)
        ref = oracle_moment(query.clock, deltas, query.meas, queries)
        worst = max(worst, abs(fb.product - ref))
        count += 1
    print(f"checked {count} queries; max |factored - oracle| = {worst:.3e}")
    if worst >= args.tol:
        print(f"FAIL: deviation exceeds tol {args.tol:g}")
        return 1
    return 0


def _cmd_oscillator(args):
    taus = np.geomspace(args.tau_min, args.tau_max, args.tau_points)
    print("tau,min_variance,floor,ratio")
    mins = []
    for tau in taus:
        spec = ForceEstimatorSpec(tau=float(tau), center_index=4)
        sig2s = np.geomspace(0.01 / tau, 100.0 / tau, 200)
        best = min(fd_estimator_variance(spec, math.sqrt(s)) for s in sig2s)
        mins.append(best)
        print(f"{tau:.17g},{best:.17g},{variance_floor(tau):.17g},"
              f"{best / variance_floor(tau):.17g}")
    slope, _, r2 = fit_loglog_slope(list(zip(taus, mins)))
    print(f"# min-variance slope {slope:.4f} (r2={r2:.4f})")
    return 0


def _cmd_waveform(args):
    print("d,sigma_m_sq,error_std,n_samples")
    points = []
    for d in args.d_grid:
        cfg = WaveformExperimentConfig(
            clock=ClockParams(d=d, width_sq=1.0),
            meas=MeasurementParams(sigma_m_sq=float(d) ** args.sigma_m_exponent),
            noise_sigma=args.noise_sigma,
            gamma=0.5,
            n_measurements=args.steps,
            seed=args.seed,
        )
        errs = estimation_error_samples(cfg, args.trials)
        points.append((d, float(np.std(errs))))
        print(f"{d},{cfg.meas.sigma_m_sq:.17g},{points[-1][1]:.17g},{errs.size}")
    slope, _, r2 = fit_loglog_slope(points)
    print(f"# error-std slope {slope:.4f} (r2={r2:.4f})")
    return 0


def _cmd_timebasis(args):
    params = TimeBasisChainParams(d=args.d, delta=args.delta, k0=0)
    queries = [(1, 5), (-2, 9)]
    chains = sample_chains(params, 9, args.chains, seed=args.seed)
    weights = np.exp(
        2j * np.pi * (chains[:, 4] * 1 + chains[:, 8] * -2) / args.d
    )
    emp = weights.mean()
    se = weights.std() / math.sqrt(args.chains)
    ref = analytic_moment(args.d, args.delta, 0, queries)
    dev = abs(emp - ref)
    print(f"chains={args.chains} empirical={emp:.6f} analytic={ref:.6f}")
    print(f"deviation {dev:.3e} = {dev / se:.2f} stderr")
    return 0 if dev < 6 * se else 1


def _cmd_qnd_decay(args):
    print("d,magnitude")
    mags = []
    for d in args.d_grid:
        params = ClockParams(d=d, width_sq=math.sqrt(d), n0=0)
        val = abs(qnd_commutator_element(params, args.t0, args.t1, 0))
        mags.append((d, val))
        print(f"{d},{val:.17g}")
    slope, _, r2 = fit_loglog_slope(mags)
    print(f"# log|element| vs log d slope {slope:.3f} (r2={r2:.3f})")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "correlate": _cmd_correlate,
    "chain": _cmd_chain,
    "oracle-check": _cmd_oracle_check,
    "oscillator": _cmd_oscillator,
    "waveform": _cmd_waveform,
    "timebasis": _cmd_timebasis,
    "qnd-decay": _cmd_qnd_decay,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ClockSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
