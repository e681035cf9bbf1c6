"""Sample-by-sample verification of the three substitutions of the reduction chain.

Coordinates at each stage::

    tube      (v1, w1, v2, w2, x, y)
    r         (v1, w1, r,  w2, x, y)    r  = v2 - sum x^2 / v1
    whitened  (v1, w1, r,  w2, p, q)    (p, q) = (x, y) S^{1/2}
    reduced   (v1, w1, r,  h,  p, q)    h  = w2 + Q,  Q = -Im(sum z^2 / (1+u1))

Each stage has its own integrand, written out in that stage's coordinates.
For a step ``A -> B`` the points are drawn in ``B``, pulled back to ``A``,
and ``f_A(pullback) * jac / density`` is compared with ``f_B / density``
sample by sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    BetaParams,
    _sq,
    integrand_lhs_arrays,
    integrand_separated_arrays,
    kernel_shift,
    log_jacobian_arrays,
    s_matrix,
    validate_params,
)
from .errors import ParameterError
from .montecarlo import partition_streams
from .sampling import SamplerConfig
from .special import log_power_pair

__all__ = ["STEPS", "StepReport", "verify_step", "probe_points"]

STEPS = ("r-substitution", "whitening", "h-shift")
STEP_RTOL = 1e-10


@dataclass(frozen=True)
class StepReport:
    step: str
    n: int
    passed: bool
    n_samples: int
    max_rel_error: float
    worst_index: int
    worst_point: dict
    before_mean: complex
    after_mean: complex
    rtol: float = STEP_RTOL
    fault: str = ""

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" [fault: {self.fault}]" if self.fault else ""
        return (
            f"{status} {self.step} n={self.n} samples={self.n_samples} "
            f"max_rel_err={self.max_rel_error:.3e} (tol {self.rtol:g}){extra}"
        )


# ------------------------------------------------------------ stage integrands


def _f_r(v1, w1, r, w2, x, y, p: BetaParams):
    """Integrand after ``v2 -> r``: the inner kernel is still in ``(x, y)``."""
    n = p.n
    one_u1 = 1.0 + v1 + 1j * w1
    big_h = 1.0 + r + 1j * w2 + _sq(x) / v1 - kernel_shift(v1, w1, x, y)
    log_val = (p.lambda1 - n - 1) * np.log(v1) + (p.lambda2 - n - 1) * np.log(r)
    log_val = log_val - log_power_pair(one_u1, (p.sigma1, p.tau1))
    log_val = log_val - log_power_pair(big_h, (p.sigma2, p.tau2))
    return np.exp(log_val)


def _f_whitened(v1, w1, r, w2, pp, qq, p: BetaParams):
    """Integrand after whitening, Jacobian absorbed into the ``v1``/``1+u1`` powers.

    The real part of the kernel is ``1 + r + sum(p^2 + q^2)`` directly; only
    the imaginary correction ``Q`` needs the original ``(x, y)``.
    """
    n = p.n
    c = 0.5 * (n - 1)
    one_u1 = 1.0 + v1 + 1j * w1
    x, y = _unwhiten(v1, w1, pp, qq)
    q_corr = -np.imag(kernel_shift(v1, w1, x, y))
    big_h = 1.0 + r + _sq(pp) + _sq(qq) + 1j * (w2 + q_corr)
    log_val = (p.lambda1 - 0.5 * n - 1.5) * np.log(v1) + (p.lambda2 - n - 1) * np.log(r)
    log_val = log_val - log_power_pair(one_u1, (p.sigma1 - c, p.tau1 - c))
    log_val = log_val - log_power_pair(big_h, (p.sigma2, p.tau2))
    return np.exp(log_val)


def _unwhiten(v1, w1, pp, qq):
    if pp.shape[-1] == 0:
        return pp, qq
    return s_matrix(v1, w1).inv_sqrt().apply_right(pp, qq)


# ---------------------------------------------------------------- probe stream


def probe_points(rng, n, size):
    """Well-conditioned reduced points with their log density.

    Log-normal ``v1``, ``r``; normal ``w1``, ``h``, ``p``, ``q``. Keeping
    ``r`` away from 0 relative to ``sum x^2 / v1`` avoids the cancellation in
    ``v1 v2 - sum x^2`` that would otherwise dominate a 1e-10 comparison.
    """
    v1 = np.exp(0.75 * rng.standard_normal(size))
    w1 = 1.5 * rng.standard_normal(size)
    r = np.exp(0.75 * rng.standard_normal(size))
    h = 2.0 * rng.standard_normal(size)
    pq = rng.standard_normal((size, 2 * (n - 1)))
    pp, qq = pq[:, : n - 1], pq[:, n - 1 :]
    half_log_2pi = 0.5 * math.log(2 * math.pi)

    def lognormal(x, s):
        return -np.log(x) - math.log(s) - half_log_2pi - 0.5 * (np.log(x) / s) ** 2

    def normal(x, s):
        return -math.log(s) - half_log_2pi - 0.5 * (x / s) ** 2

    log_q = lognormal(v1, 0.75) + normal(w1, 1.5) + lognormal(r, 0.75) + normal(h, 2.0)
    log_q = log_q + np.sum(normal(pq, 1.0), axis=-1)
    return (v1, w1, r, h, pp, qq), log_q


def verify_step(step: str, params: BetaParams, cfg: SamplerConfig = None, *, fault=None) -> StepReport:
    """Check one substitution sample by sample (relative tolerance 1e-10).

    ``fault="unit-jacobian"`` replaces the whitening Jacobian by 1; this is a
    negative control and should fail for ``n >= 2``.
    """
    if step not in STEPS:
        raise ValueError(f"unknown step {step!r}; expected one of {STEPS}")
    if fault not in (None, "unit-jacobian"):
        raise ValueError(f"unknown fault {fault!r}")
    report = validate_params(params)
    if not report.ok:
        raise ParameterError("invalid parameters: violated " + ", ".join(report.failures), report.failures)
    cfg = cfg or SamplerConfig(budget=1000)
    n = params.n
    rng = partition_streams(cfg.seed, 1)[0]
    (v1, w1, r, h, pp, qq), log_q = probe_points(rng, n, cfg.budget)
    dens = np.exp(log_q)

    x, y = _unwhiten(v1, w1, pp, qq)
    w2 = h + np.imag(kernel_shift(v1, w1, x, y))  # undo h = w2 + Q

    if step == "r-substitution":
        v2 = r + _sq(x) / v1
        before = integrand_lhs_arrays(v1, w1, v2, w2, x, y, params)
        after = _f_r(v1, w1, r, w2, x, y, params)
    elif step == "whitening":
        jac = np.ones_like(v1) if fault else np.exp(log_jacobian_arrays(v1, w1, n))
        before = _f_r(v1, w1, r, w2, x, y, params) * jac
        after = _f_whitened(v1, w1, r, w2, pp, qq, params)
    else:
        before = _f_whitened(v1, w1, r, w2, pp, qq, params)
        after = integrand_separated_arrays(v1, w1, r, h, pp, qq, params)

    before = before / dens
    after = after / dens
    rel = np.abs(before - after) / np.abs(after)
    worst = int(np.argmax(rel))
    worst_point = {
        "v1": float(v1[worst]),
        "w1": float(w1[worst]),
        "r": float(r[worst]),
        "h": float(h[worst]),
        "p": [float(v) for v in pp[worst]],
        "q": [float(v) for v in qq[worst]],
    }
    max_rel = float(rel[worst])
    return StepReport(
        step=step,
        n=n,
        passed=bool(max_rel <= STEP_RTOL),
        n_samples=int(v1.size),
        max_rel_error=max_rel,
        worst_index=worst,
        worst_point=worst_point,
        before_mean=complex(np.mean(before)),
        after_mean=complex(np.mean(after)),
        fault=fault or "",
    )
