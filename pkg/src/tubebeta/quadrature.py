"""Deterministic quadrature for the auxiliary 2D integral and the reduced J-integral.

Unbounded coordinates are compactified to ``(0, 1)`` with ``t/(1-t)`` on
half-lines and ``tan(pi (t - 1/2))`` on lines. :func:`quad_aux` then runs
nested adaptive Gauss-Kronrod (QUADPACK); :func:`quad_J_reduced` uses a
tensor tanh-sinh rule whose step is halved until two successive levels agree.
All integrands are evaluated as ``exp(complex log)`` so that the far ends of
the compactified intervals neither overflow nor produce ``0 * inf``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .domain import BetaParams
from .errors import ConvergenceError, ParameterError

__all__ = ["QuadratureResult", "quad_aux", "quad_J_reduced", "tanh_sinh_rule"]

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error: float
    n_eval: int

    def __complex__(self):
        return complex(self.value)


# ----------------------------------------------------------------- quad_aux


def _aux_region(alpha, beta, gamma_):
    violated = []
    if not alpha.real > 0:
        violated.append("Re(alpha) > 0")
    if not (beta + gamma_ - alpha - 1).real > 0:
        violated.append("Re(beta+gamma-alpha-1) > 0")
    if violated:
        raise ParameterError("aux integral diverges: violated " + ", ".join(violated), violated)


def _cquad(f, epsabs, epsrel, limit):
    """QUADPACK on ``(0, 1)`` for a complex integrand; ``(value, abserr, neval, ok)``."""
    cache = {}

    def g(t):
        v = cache.get(t)
        if v is None:
            v = cache[t] = f(t)
        return v

    out = []
    neval = 0
    ok = True
    for part in (lambda t: g(t).real, lambda t: g(t).imag):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err, info, *msg = integrate.quad(
                part, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=True
            )
        ok = ok and not msg
        neval += info["neval"]
        out.append((val, err))
    (re_v, re_e), (im_v, im_e) = out
    return complex(re_v, im_v), math.hypot(re_e, im_e), neval, ok


def quad_aux(alpha, beta, gamma_, tol=1e-8, *, full_output=False, limit=200):
    """Numerically integrate ``x^(alpha-1) (1+x+iy)^{-{beta|gamma}}`` over ``x>0, y in R``.

    ``x = t/(1-t)``; ``y = (1+x) tan(pi (s - 1/2))`` (scaled by the width of
    the inner peak). Raises :class:`ConvergenceError` if QUADPACK reports a
    failure or the error estimate exceeds ``tol * (1 + |value|)``.
    """
    alpha, beta, gamma_ = complex(alpha), complex(beta), complex(gamma_)
    _aux_region(alpha, beta, gamma_)
    stats = {"neval": 0, "rel": 0.0}
    inner_cache = {}

    def inner(t):
        if t in inner_cache:
            return inner_cache[t]
        log_x = math.log(t) - math.log1p(-t)
        a = 1.0 + math.exp(log_x)
        log_outer = (alpha - 1.0) * log_x - 2.0 * math.log1p(-t) + math.log(a * math.pi)

        def f(s):
            th = math.pi * (s - 0.5)
            y = a * math.tan(th)
            log_k = complex(math.log(math.hypot(a, y)), math.atan2(y, a))
            log_val = log_outer - beta * log_k - gamma_ * log_k.conjugate() - 2.0 * math.log(math.cos(th))
            return complex(np.exp(log_val))

        # the imaginary part can vanish identically, so pair the relative
        # tolerance with an absolute one scaled by the peak at y = 0
        peak = abs(f(0.5))
        val, err, neval, _ = _cquad(f, 1e-4 * tol * peak, 1e-4 * tol, limit)
        stats["neval"] += neval
        if peak > 0:
            stats["rel"] = max(stats["rel"], err / max(abs(val), peak * 1e-4 * tol))
        inner_cache[t] = val
        return val

    value, err, _, _ = _cquad(inner, tol * 0.1, tol * 0.1, limit)
    # propagated inner error: worst relative inner error times int |inner|
    mass, _, _, _ = _cquad(lambda t: abs(inner(t)), 0.0, 1e-3, limit)
    total_err = err + stats["rel"] * mass.real
    # QUADPACK roundoff warnings are tolerated; the combined estimate decides
    if total_err > tol * (1.0 + abs(value)):
        raise ConvergenceError(f"quad_aux error estimate {total_err:.3g} exceeds tolerance {tol:g}")
    res = QuadratureResult(value, total_err, stats["neval"])
    return res if full_output else res.value


# ------------------------------------------------------------- tanh-sinh rule


@dataclass(frozen=True)
class _Axis:
    """Nodes of one compactified axis: log of the coordinate and log of ds-weights."""

    log_coord: np.ndarray  # half-line: log x; line: complex log(1 + i y)
    log_weight: np.ndarray  # log(step * dcoord/ds), relative to the raw coordinate


def tanh_sinh_rule(step, s_max):
    """Nodes ``t_k`` on ``(0, 1)`` with complements, for ``s = k*step``, ``|s| <= s_max``.

    Returns ``(s, log_t, log_tc, log_dt_ds)`` where ``t = 1/(1+exp(-pi sinh s))``
    and ``tc = 1 - t``, both kept in log form.
    """
    k = int(math.floor(s_max / step))
    s = step * np.arange(-k, k + 1)
    u = math.pi * np.sinh(s)
    log_t = -np.logaddexp(0.0, -u)
    log_tc = -np.logaddexp(0.0, u)
    log_dt_ds = log_t + log_tc + LOG_PI + np.log(np.cosh(s))
    return s, log_t, log_tc, log_dt_ds


def _half_line_axis(step, s_max):
    """``x = t/(1-t)``: returns ``log x`` and ``log(step * dx/ds)``."""
    _, log_t, log_tc, log_dt_ds = tanh_sinh_rule(step, s_max)
    log_x = log_t - log_tc
    return log_x, math.log(step) + log_dt_ds - 2.0 * log_tc


def _line_axis(step, s_max):
    """``y = tan(pi (t - 1/2))``: returns ``y`` and ``log(step * dy/ds)``.

    ``y`` is formed from whichever of ``t``, ``1 - t`` is small, to keep the
    ends accurate: ``y = -cot(pi t)`` for ``t < 1/2`` and ``cot(pi (1-t))`` above.
    """
    s, log_t, log_tc, log_dt_ds = tanh_sinh_rule(step, s_max)
    small = np.where(s < 0, np.exp(log_t), np.exp(log_tc))
    tan_small = np.tan(math.pi * small)
    y = np.where(s < 0, -1.0, 1.0) / tan_small
    log_y = -np.log(tan_small)
    # log(1 + y^2), split to avoid overflow of y^2
    big = np.abs(y) > 1.0
    log1py2 = np.where(big, 2.0 * log_y + np.log1p(np.exp(-2.0 * log_y)), np.log1p(np.minimum(y * y, 1.0)))
    return y, math.log(step) + log_dt_ds + LOG_PI + log1py2


def _s_max(decay):
    """Truncation of the s-range so that ``exp(-decay * pi sinh s)`` < ~1e-18."""
    decay = max(decay, 1e-3)
    return min(6.0, math.asinh(42.0 / (math.pi * decay)) + 0.25)


def _j_level(p: BetaParams, step, s_r, s_rho, s_h, chunk=32):
    n = p.n
    a = p.lambda2 - n - 1.0
    sig, tau = p.sigma2, p.tau2
    log_r, lw_r = _half_line_axis(step, s_r)
    y, lw_h = _line_axis(step, s_h)
    log_kernel_y = np.log1p(1j * y)  # (1 + r + rho)(1 + i y) = 1 + r + rho + i h
    h_part = -sig * log_kernel_y - tau * np.conj(log_kernel_y) + lw_h
    s2 = sig + tau
    if n == 1:
        log_rho = np.array([-np.inf])
        lw_rho = np.array([0.0])
    else:
        log_rho, lw_rho = _half_line_axis(step, s_rho)
    total = 0.0j
    count = 0
    r_vals = np.exp(log_r)
    rho_vals = np.exp(log_rho)
    rho_part = (n - 2) * log_rho + lw_rho if n > 1 else np.zeros(1)
    for lo in range(0, log_r.size, chunk):
        rr = r_vals[lo:lo + chunk, None]
        log_scale = np.log1p(rr + rho_vals[None, :])  # log(1 + r + rho)
        base = a * log_r[lo:lo + chunk, None] + lw_r[lo:lo + chunk, None] + rho_part[None, :]
        # h = (1+r+rho) y contributes a factor (1+r+rho) to dh
        base = base + (1.0 - s2) * log_scale
        vals = np.exp(base[:, :, None] + h_part[None, None, :])
        total += complex(np.sum(vals))
        count += vals.size
    return total, count


def quad_J_reduced(p: BetaParams, tol=1e-6, *, full_output=False, max_level=7):
    """Tensor tanh-sinh evaluation of the reduced J-integral.

    For ``n >= 2``::

        pi^(n-1)/Gamma(n-1) * int r^(l2-n-1) rho^(n-2) (1+r+rho+ih)^{-{s2|t2}} dr drho dh

    and for ``n = 1`` the 2D integral of ``r^(l2-2) (1+r+ih)^{-{s2|t2}}``.
    The step is halved until two levels agree to ``tol`` (relative).
    """
    n = p.n
    viol = []
    if not p.lambda2.real > n:
        viol.append("Re(lambda2) > n")
    if not (p.sigma2 + p.tau2 - p.lambda2).real > 0:
        viol.append("Re(sigma2+tau2-lambda2) > 0")
    if viol:
        raise ParameterError("J-integral diverges: violated " + ", ".join(viol), viol)
    s2 = (p.sigma2 + p.tau2).real
    l2 = p.lambda2.real
    # decay rates at both ends of each axis after the exponential map
    s_r = _s_max(min(l2 - n, s2 - l2 + n - 1))
    s_rho = _s_max(min(n - 1.0, s2 - n)) if n > 1 else 0.0
    s_h = _s_max(s2 - 1.0)
    if n == 1:
        pre = 1.0
    else:
        pre = math.pi ** (n - 1) / math.gamma(n - 1)
    prev = None
    n_eval = 0
    for level in range(2, max_level + 1):
        step = 2.0 ** -level
        raw, cnt = _j_level(p, step, s_r, s_rho, s_h)
        n_eval += cnt
        val = pre * raw
        if prev is not None:
            err = abs(val - prev)
            if err <= tol * abs(val):
                res = QuadratureResult(val, err, n_eval)
                return res if full_output else res.value
        prev = val
    raise ConvergenceError(
        f"quad_J_reduced: levels disagree by {abs(val - prev):.3g} at step 2^-{max_level}"
    )
