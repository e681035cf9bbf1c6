"""Importance-sampling proposals in reduced coordinates ``(v1, w1, r, h, p, q)``.

In reduced coordinates the tube is the product ``(0,inf) x R x (0,inf) x R x
R^(2n-2)`` and the integrand modulus factorises, so the proposal is a product
of standard families whose exponents track the integrand's:

* ``v1 ~ BetaPrime(a, b)``, ``w1 = (1 + v1) T / sqrt(nu)`` with ``T ~ t(nu)``;
* ``x = r + |(p,q)|^2 ~ BetaPrime``, ``r = t x`` with ``t ~ Beta``, ``(p,q)``
  uniform on the sphere of radius ``sqrt(x - r)``;
* ``h = (1 + x) T' / sqrt(nu')``.

Each exponent is the integrand's exponent multiplied by ``head_scale`` (near
the origin) or ``tail_scale`` (at infinity). Scales in ``(0, 1]`` make every
proposal factor at least as heavy as the integrand, so the importance
weights are bounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import betaln, gammaln

from .domain import BetaParams, validate_params
from .errors import ParameterError, ProposalError

__all__ = ["ProposalShapes", "SamplerConfig", "integrand_shapes", "proposal_shapes", "draw_reduced"]


@dataclass(frozen=True)
class ProposalShapes:
    """Exponents of the product proposal.

    ``v1_head``/``v1_tail``: beta-prime shapes for ``v1``; ``w_dof``: Student-t
    degrees of freedom for ``w1``; ``x_head``/``x_tail``: beta-prime shapes for
    ``x = r + rho``; ``t_head``: first Beta shape of ``r/x``; ``h_dof``: degrees
    of freedom for ``h``.
    """

    v1_head: float
    v1_tail: float
    w_dof: float
    x_head: float
    x_tail: float
    t_head: float
    h_dof: float

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class SamplerConfig:
    budget: int = 1_000_000
    seed: int = 0
    partitions: int = 8
    workers: int = 1
    head_scale: float = 0.9
    tail_scale: float = 0.9
    shapes: Optional[ProposalShapes] = None
    chunk: int = 1 << 17

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.partitions < 1 or self.workers < 1:
            raise ValueError("partitions and workers must be positive")
        if self.chunk < 1:
            raise ValueError("chunk must be positive")


def integrand_shapes(p: BetaParams) -> ProposalShapes:
    """Exponents of the integrand modulus itself (the scale-1 proposal)."""
    n = p.n
    c = 0.5 * (n - 1)
    s1 = (p.sigma1 + p.tau1).real - 2.0 * c
    s2 = (p.sigma2 + p.tau2).real
    return ProposalShapes(
        v1_head=p.lambda1.real - 0.5 * (n + 1),
        v1_tail=(p.sigma1 + p.tau1 - p.lambda1).real - c,
        w_dof=s1 - 1.0,
        x_head=p.lambda2.real - 1.0,
        x_tail=(p.sigma2 + p.tau2 - p.lambda2).real,
        t_head=p.lambda2.real - n,
        h_dof=s2 - 1.0,
    )


def proposal_shapes(p: BetaParams, cfg: SamplerConfig) -> ProposalShapes:
    """Proposal exponents for ``p``; raises unless they dominate the integrand."""
    report = validate_params(p)
    if not report.ok:
        raise ParameterError(
            "integral does not converge: violated " + ", ".join(report.failures), report.failures
        )
    ref = integrand_shapes(p)
    if cfg.shapes is None:
        hs, ts = cfg.head_scale, cfg.tail_scale
        shapes = ProposalShapes(
            v1_head=hs * ref.v1_head,
            v1_tail=ts * ref.v1_tail,
            w_dof=ts * ref.w_dof,
            x_head=hs * ref.x_head,
            x_tail=ts * ref.x_tail,
            t_head=hs * ref.t_head,
            h_dof=ts * ref.h_dof,
        )
    else:
        shapes = cfg.shapes
    check_domination(shapes, ref)
    return shapes


def check_domination(shapes: ProposalShapes, ref: ProposalShapes):
    bad = []
    for name in ProposalShapes.__dataclass_fields__:
        prop, integ = getattr(shapes, name), getattr(ref, name)
        if not (0 < prop <= integ * (1 + 1e-12)):
            bad.append(f"{name}: proposal {prop:.6g} not in (0, {integ:.6g}]")
    if bad:
        raise ProposalError(
            "proposal does not dominate the integrand (tail or head too light): " + "; ".join(bad)
        )


# ----------------------------------------------------------------- densities


def _betaprime_logpdf(x, a, b):
    return (a - 1.0) * np.log(x) - (a + b) * np.log1p(x) - betaln(a, b)


def _beta_logpdf(t, a, b):
    return (a - 1.0) * np.log(t) + (b - 1.0) * np.log1p(-t) - betaln(a, b)


def _student_logpdf(t, nu):
    return (
        gammaln(0.5 * (nu + 1.0))
        - gammaln(0.5 * nu)
        - 0.5 * math.log(nu * math.pi)
        - 0.5 * (nu + 1.0) * np.log1p(t * t / nu)
    )


def _scaled_t(rng, nu, scale, size):
    """Draw ``scale * T / sqrt(nu)``; return the draw and its log density."""
    t = rng.standard_t(nu, size)
    log_q = _student_logpdf(t, nu) + 0.5 * math.log(nu) - np.log(scale)
    return scale * t / math.sqrt(nu), log_q


def _betaprime(rng, a, b, size):
    x = rng.standard_gamma(a, size) / rng.standard_gamma(b, size)
    return x, _betaprime_logpdf(x, a, b)


def _log_sphere_area(dim):
    """Log surface area of the unit sphere in ``R^dim``."""
    return math.log(2.0) + 0.5 * dim * math.log(math.pi) - gammaln(0.5 * dim)


def draw_reduced(rng, shapes: ProposalShapes, n: int, size: int):
    """Draw ``size`` reduced points; return ``(v1, w1, r, h, p, q, log_density)``."""
    v1, log_q = _betaprime(rng, shapes.v1_head, shapes.v1_tail, size)
    w1, lq = _scaled_t(rng, shapes.w_dof, 1.0 + v1, size)
    log_q += lq
    x, lq = _betaprime(rng, shapes.x_head, shapes.x_tail, size)
    log_q += lq
    m = 2 * (n - 1)
    if n == 1:
        r = x
        pp = np.empty((size, 0))
        qq = np.empty((size, 0))
    else:
        t = rng.beta(shapes.t_head, n - 1.0, size)
        log_q += _beta_logpdf(t, shapes.t_head, n - 1.0)
        r = t * x
        rho = x * (1.0 - t)
        # (x, t) -> (r, rho) has Jacobian x; rho -> ball point spreads over
        # a sphere of area |S^{m-1}| rho^{(m-2)/2} / 2.
        log_q -= np.log(x)
        log_q -= _log_sphere_area(m) + (0.5 * m - 1.0) * np.log(rho) - math.log(2.0)
        g = rng.standard_normal((size, m))
        g *= (np.sqrt(rho) / np.sqrt(np.sum(g * g, axis=1)))[:, None]
        pp = g[:, : n - 1]
        qq = g[:, n - 1 :]
    h, lq = _scaled_t(rng, shapes.h_dof, 1.0 + x, size)
    log_q += lq
    return v1, w1, r, h, pp, qq, log_q
