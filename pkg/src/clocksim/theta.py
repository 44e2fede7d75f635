"""Jacobi theta_3 evaluation for purely imaginary modular parameter.

Everything in this package needs ``theta3(z, i*tau)`` with real ``tau > 0``
and real or complex ``z``.  Two series are used, switched at ``tau = 1`` so
that the effective Gaussian decay parameter is always >= 1:

    tau >= 1 (lattice series)   sum_m exp(-pi tau m^2 + 2 pi i m z)
    tau <  1 (Gaussian comb)    tau**-0.5 * sum_m exp(-pi (z + m)^2 / tau)

The comb is the modular transform
``theta3(z, i tau) = tau**-0.5 exp(-pi z^2 / tau) theta3(i z / tau, i / tau)``
written out term by term.  Using it directly (rather than reducing complex
arguments through quasi-periodicity) keeps every summand's exponent near the
peak term, which avoids overflow of the ``exp(pi tau b^2)`` reduction
prefactor for large ``|Im z| / tau``.

Each series is summed over a window centered on its largest term; the window
half-width follows the Gaussian tail bound, ``M = ceil(sqrt(ln(1/rel_tol) /
(pi tau_eff))) + 2`` with ``tau_eff >= 1`` the post-switch decay parameter.

Real input follows a separate path that folds the argument into ``[0, 1/2]``
using the exact 1-periodicity and evenness of the series, so that
``theta3(-x) == theta3(x)`` holds bit for bit and the result is a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam, NonConvergent

__all__ = [
    "ThetaEvalConfig",
    "DEFAULT_CFG",
    "theta3",
    "theta3_normalized",
    "theta3_multiplication_rhs",
]


@dataclass(frozen=True)
class ThetaEvalConfig:
    """Accuracy knobs for the theta series.

    rel_tol is the target relative truncation error; max_terms caps the
    window size as a safety net (the Gaussian rule never comes close).
    """

    rel_tol: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise InvalidParam(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_terms < 3:
            raise InvalidParam(f"max_terms must be >= 3, got {self.max_terms}")


DEFAULT_CFG = ThetaEvalConfig()


def _window_halfwidth(tau_eff: float, cfg: ThetaEvalConfig) -> int:
    m = math.ceil(math.sqrt(math.log(1.0 / cfg.rel_tol) / (math.pi * tau_eff))) + 2
    if 2 * m + 1 > cfg.max_terms:
        raise NonConvergent(
            f"theta series needs {2 * m + 1} terms, cap is {cfg.max_terms}"
        )
    return m


def _validate_tau(tau: float) -> float:
    tau = float(tau)
    if not math.isfinite(tau) or tau <= 0.0:
        raise InvalidParam(f"tau must be positive and finite, got {tau}")
    return tau


def _theta3_real(x: np.ndarray, tau: float, cfg: ThetaEvalConfig) -> np.ndarray:
    # Fold into [0, 1/2]: abs() and the mod are exact, so evenness and
    # integer periodicity hold exactly for representable arguments.
    x = np.mod(np.abs(x), 1.0)
    x = np.where(x > 0.5, 1.0 - x, x)
    if tau >= 1.0:
        m = _window_halfwidth(tau, cfg)
        ms = np.arange(1, m + 1)
        terms = np.exp(-math.pi * tau * ms**2) * np.cos(
            2.0 * math.pi * np.multiply.outer(x, ms)
        )
        return 1.0 + 2.0 * terms.sum(axis=-1)
    m = _window_halfwidth(1.0 / tau, cfg)
    ms = np.arange(-m, m + 1)
    shifted = np.add.outer(x, ms.astype(float))
    return np.exp(-math.pi * shifted**2 / tau).sum(axis=-1) / math.sqrt(tau)


def _theta3_complex(z: np.ndarray, tau: float, cfg: ThetaEvalConfig) -> np.ndarray:
    # Reduce the real part mod 1 (exact periodicity) for trig accuracy.
    zr = np.mod(z.real, 1.0)
    zr = np.where(zr >= 0.5, zr - 1.0, zr)
    z = zr + 1j * z.imag
    if tau >= 1.0:
        m = _window_halfwidth(tau, cfg)
        m0 = np.round(-z.imag / tau).astype(np.int64)
        ms = np.add.outer(m0, np.arange(-m, m + 1))
        expo = -math.pi * tau * ms.astype(float) ** 2 + 2j * math.pi * ms * z[..., None]
        return np.exp(expo).sum(axis=-1)
    m = _window_halfwidth(1.0 / tau, cfg)
    m0 = np.round(-z.real).astype(np.int64)
    ms = np.add.outer(m0, np.arange(-m, m + 1))
    shifted = z[..., None] + ms
    return np.exp(-math.pi * shifted**2 / tau).sum(axis=-1) / math.sqrt(tau)


def theta3(z, tau, cfg: ThetaEvalConfig = DEFAULT_CFG):
    """theta_3(z, i tau) = sum_m exp(-pi tau m^2 + 2 pi i m z).

    z may be a scalar or an ndarray (real or complex); tau is a positive
    real shared by all elements.  Real input yields a float result, complex
    input a complex one.
    """
    tau = _validate_tau(tau)
    arr = np.asarray(z)
    if not np.all(np.isfinite(arr)):
        raise InvalidParam("theta3 argument must be finite")
    scalar = arr.ndim == 0
    if np.iscomplexobj(arr):
        if np.all(arr.imag == 0.0):
            out = _theta3_real(arr.real.astype(float), tau, cfg)
            out = out.astype(complex)
        else:
            out = _theta3_complex(arr.astype(complex), tau, cfg)
    else:
        out = _theta3_real(arr.astype(float), tau, cfg)
    if scalar:
        return out[()].item()
    return out


def theta3_normalized(z, tau, cfg: ThetaEvalConfig = DEFAULT_CFG):
    """theta_3(z, i tau) / theta_3(0, i tau).

    For real z the value is real, in (0, 1], and equals 1 exactly at
    integer z.
    """
    return theta3(z, tau, cfg) / theta3(0.0, tau, cfg)


def theta3_multiplication_rhs(
    a: int,
    b: int,
    z,
    w,
    tau,
    cfg: ThetaEvalConfig = DEFAULT_CFG,
):
    """Right-hand side of the theta multiplication identity.

    Evaluates

        (a+b)^-1 sum_{0 <= r < a+b} theta3((a w + z + r)/(a+b), i a tau/(a+b))
                                  * theta3((z - b w + r)/(a+b), i b tau/(a+b))

    which equals theta3(z, i a b tau) * theta3(w, i tau).
    """
    if int(a) != a or int(b) != b or a < 1 or b < 1:
        raise InvalidParam(f"a, b must be positive integers, got {a}, {b}")
    a, b = int(a), int(b)
    tau = _validate_tau(tau)
    n = a + b
    rs = np.arange(n)
    left = theta3((a * w + z + rs) / n, a * tau / n, cfg)
    right = theta3((z - b * w + rs) / n, b * tau / n, cfg)
    total = np.sum(left * right) / n
    return complex(total)
