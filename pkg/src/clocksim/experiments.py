"""Sweep orchestration, log-log fitting, and CSV emission.

The headline experiment scans dimension with power-law parameter schedules
sigma_m^2 = c2 d^beta and xi^2 = c1 d^alpha, runs n = ceil(2 t sqrt(d))
measurements at interval delta, and tabulates the factors of the
pseudo-variance query (m = -1 at the final measurement).  Two presets pin
the published regimes: ``fig1-top`` (beta = -0.12, alpha = -0.5), where the
backaction factor stays at 1 up to exponentially small error, and
``fig1-bottom`` (beta = -0.65, alpha = 0), where 1 - C3 decays only like
1/sqrt(d).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .clock import ClockParams
from .correlations import CorrelationQuery, c3_monte_carlo, c3_transfer_matrix, factors_exact
from .errors import InvalidParam
from .measurement import MeasurementParams

__all__ = [
    "SweepConfig",
    "PRESETS",
    "preset_config",
    "run_figure1_sweep",
    "sweep_rows_to_csv",
    "write_csv",
    "fit_loglog_slope",
    "CSV_HEADER",
]

DEFAULT_D_GRID = (501, 707, 1001, 1415, 2001, 2829, 4001, 5657, 8001)

CSV_HEADER = (
    "d,sigma_m_sq,xi_sq,c1,c2,c3_re,c3_im,c3_stderr,one_minus_c1c2,one_minus_c1c2c3"
)


@dataclass(frozen=True)
class SweepConfig:
    """Dimension grid, parameter schedules, and sampling controls."""

    d_grid: tuple = DEFAULT_D_GRID
    sigma_m_exponent: float = -0.12
    sigma_m_const: float = 1.0
    width_exponent: float = -0.5
    width_const: float = 1.0
    t: float = 1.0
    delta: float = 0.5
    samples: int = 5000
    seed: int = 0
    exact_c3: bool = False
    output_path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "d_grid", tuple(int(d) for d in self.d_grid))
        for d in self.d_grid:
            if d % 2 == 0 or d < 3:
                raise InvalidParam(f"d_grid entries must be odd and >= 3, got {d}")
        if self.samples < 1:
            raise InvalidParam("samples must be positive")
        if self.t <= 0:
            raise InvalidParam("t must be positive")

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidParam(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_json(self, path):
        data = dataclasses.asdict(self)
        data["d_grid"] = list(data["d_grid"])
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")


PRESETS = {
    "fig1-top": dict(sigma_m_exponent=-0.12, width_exponent=-0.5),
    "fig1-bottom": dict(sigma_m_exponent=-0.65, width_exponent=0.0),
}


def preset_config(name: str, **overrides) -> SweepConfig:
    if name not in PRESETS:
        raise InvalidParam(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    params = dict(PRESETS[name])
    params.update(overrides)
    return SweepConfig(**params)


def run_figure1_sweep(cfg: SweepConfig, n_workers: int = 1):
    """One row per dimension; deterministic for fixed (cfg, seed)."""
    rows = []
    for d in cfg.d_grid:
        sigma_m_sq = cfg.sigma_m_const * d**cfg.sigma_m_exponent
        xi_sq = cfg.width_const * d**cfg.width_exponent
        n = math.ceil(2.0 * cfg.t * math.sqrt(d))
        query = CorrelationQuery(
            clock=ClockParams(d=d, width_sq=xi_sq, n0=0),
            meas=MeasurementParams(sigma_m_sq=sigma_m_sq),
            deltas=(cfg.delta,) * n,
            queries=((-1, n),),
        )
        fb = factors_exact(query)  # phase, c1, c2 cheap; c3 recomputed below
        if cfg.exact_c3:
            c3 = c3_transfer_matrix(query)
            stderr = 0.0
        else:
            c3, stderr = c3_monte_carlo(
                query, cfg.samples, cfg.seed, n_workers=n_workers
            )
        c1c2 = fb.c1 * fb.c2
        rows.append(
            dict(
                d=d,
                sigma_m_sq=sigma_m_sq,
                xi_sq=xi_sq,
                c1=fb.c1,
                c2=fb.c2,
                c3_re=c3.real,
                c3_im=c3.imag,
                c3_stderr=stderr,
                one_minus_c1c2=1.0 - c1c2,
                one_minus_c1c2c3=1.0 - c1c2 * c3.real,
            )
        )
    return rows


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def sweep_rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    keys = CSV_HEADER.split(",")
    for row in rows:
        lines.append(",".join(_fmt(row[k]) for k in keys))
    return "\n".join(lines) + "\n"


def write_csv(rows, path):
    text = sweep_rows_to_csv(rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def fit_loglog_slope(points):
    """Ordinary least squares of ln y on ln x; returns (slope, intercept, r2)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise InvalidParam("need at least two points to fit")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise InvalidParam("log-log fit needs positive coordinates")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    design = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    predicted = design @ np.array([slope, intercept])
    ss_res = float(np.sum((ly - predicted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2
