"""Numerical adjudication of the power-of-two offset in factor J."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .closed_form import VARIANTS, Variant, factor_J, rhs
from .domain import BetaParams
from .montecarlo import IntegrationEstimate, mc_lhs
from .quadrature import quad_J_reduced
from .sampling import SamplerConfig

__all__ = ["default_params", "VariantCheck", "adjudicate", "consistent_offset"]


def default_params(n: int) -> BetaParams:
    """A comfortably convergent set: lambda = n+1, sigma = n+2, tau = n+1 in both blocks."""
    return BetaParams(n, n + 1, n + 1, n + 2, n + 2, n + 1, n + 1)


@dataclass(frozen=True)
class VariantCheck:
    n: int
    params: BetaParams
    quad: complex
    quad_error: float
    tol: float
    values: dict  # Variant -> factor_J value
    margins: dict  # Variant -> |quad - value| in tolerance units
    matched: tuple
    mc: Optional[IntegrationEstimate] = None
    mc_z: dict = field(default_factory=dict)

    @property
    def unique(self) -> Optional[Variant]:
        return self.matched[0] if len(self.matched) == 1 else None

    def ratio(self, v: Variant) -> complex:
        return self.values[v] / self.quad


def adjudicate(n: int, tol: float = 1e-6, params: BetaParams = None, mc_cfg: SamplerConfig = None) -> VariantCheck:
    """Compare the reduced J-quadrature with the three candidate closed forms.

    A variant matches when it lies within one tolerance unit
    ``max(tol * |quad|, quadrature error estimate)`` of the quadrature value.
    With ``mc_cfg`` (and ``n <= 3``) the full integral is also sampled and
    scored against each variant of the full product.
    """
    p = params or default_params(n)
    if p.n != n:
        raise ValueError("params.n does not match n")
    res = quad_J_reduced(p, tol, full_output=True)
    unit = max(tol * abs(res.value), res.abs_error)
    values = {v: factor_J(p, v) for v in VARIANTS}
    margins = {v: abs(res.value - values[v]) / unit for v in VARIANTS}
    matched = tuple(v for v in VARIANTS if margins[v] <= 1.0)
    est, z = None, {}
    if mc_cfg is not None and n <= 3:
        est = mc_lhs(p, mc_cfg)
        z = {v: est.z_score(rhs(p, v)) for v in VARIANTS}
    return VariantCheck(n, p, res.value, res.abs_error, tol, values, margins, matched, est, z)


def consistent_offset(checks) -> Optional[Variant]:
    """The variant selected uniquely and identically for every check, else None."""
    picks = {c.unique for c in checks}
    if len(picks) == 1:
        (v,) = picks
        return v
    return None
