#!/usr/bin/env python3
"""Drive-estimation error vs dimension at sigma_m^2 = d^-0.4.

The pooled stdev of (estimate - true interval integral) should grow like
d^0.30: the measurement gets sharper with d but the estimator rescales the
increments by sqrt(d).
"""

import argparse

import numpy as np

from clocksim.clock import ClockParams
from clocksim.experiments import fit_loglog_slope
from clocksim.measurement import MeasurementParams
from clocksim.waveform import WaveformExperimentConfig, estimation_error_samples


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d-grid", type=int, nargs="+",
                    default=[501, 1001, 2001, 4001, 8001])
    ap.add_argument("--trials", type=int, default=60)
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    points = []
    for d in args.d_grid:
        cfg = WaveformExperimentConfig(
            clock=ClockParams(d=d, width_sq=1.0, n0=0),
            meas=MeasurementParams(sigma_m_sq=float(d) ** -0.4),
            noise_sigma=0.1,
            gamma=0.5,
            n_measurements=args.steps,
            seed=args.seed,
        )
        errs = estimation_error_samples(cfg, args.trials)
        points.append((d, float(np.std(errs))))
        print(f"d={d:5d}  error std = {points[-1][1]:.4f}  ({errs.size} samples)")
    slope, _, r2 = fit_loglog_slope(points)
    print(f"log-log slope: {slope:.4f} (r^2 = {r2:.4f}); expected ~0.30")


if __name__ == "__main__":
    main()
