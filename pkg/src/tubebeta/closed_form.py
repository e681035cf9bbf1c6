"""Gamma-product evaluation of the tube integral: factor I, factor J, product.

Factor J carries a power of two ``2^(2-s2-t2+offset)`` whose offset is one of
``+n``, ``0`` or ``-n``. All three candidates are exposed and every J/product
evaluation takes the offset explicitly; quadrature of the reduced J-integral
selects ``0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .domain import BetaParams
from .special import log_gamma, rgamma

__all__ = ["Variant", "ClosedFormBreakdown", "factor_I", "factor_J", "rhs", "breakdown"]

LOG2 = math.log(2.0)
LOGPI = math.log(math.pi)


class Variant(Enum):
    """Offset added to the exponent ``2 - s2 - t2`` of the power of two in J."""

    PLUS_N = "+n"
    ZERO = "0"
    MINUS_N = "-n"

    def offset(self, n: int) -> int:
        return {Variant.PLUS_N: n, Variant.ZERO: 0, Variant.MINUS_N: -n}[self]

    @classmethod
    def parse(cls, text) -> "Variant":
        if isinstance(text, Variant):
            return text
        key = str(text).strip().lower()
        aliases = {
            "+n": cls.PLUS_N, "n": cls.PLUS_N, "plus": cls.PLUS_N, "plus_n": cls.PLUS_N,
            "0": cls.ZERO, "zero": cls.ZERO,
            "-n": cls.MINUS_N, "minus": cls.MINUS_N, "minus_n": cls.MINUS_N,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown variant {text!r}; expected one of +n, 0, -n") from None


VARIANTS = (Variant.PLUS_N, Variant.ZERO, Variant.MINUS_N)


def _ratio(num_args, den_args):
    """``prod Gamma(num) / prod Gamma(den)`` with labelled pole errors.

    Denominator poles give 0 (1/Gamma is entire).
    """
    log_num = sum(log_gamma(z, label) for label, z in num_args)
    out = complex(np.exp(log_num))
    for _, z in den_args:
        out *= complex(rgamma(z))
    return out


def factor_I(p: BetaParams) -> complex:
    """``2^(1-s1-t1+n) pi G(l1-(n+1)/2) G(s1+t1-l1-(n-1)/2) / (G(s1-(n-1)/2) G(t1-(n-1)/2))``."""
    n = p.n
    c = 0.5 * (n - 1)
    core = _ratio(
        [
            ("Gamma(lambda1-(n+1)/2)", p.lambda1 - 0.5 * (n + 1)),
            ("Gamma(sigma1+tau1-lambda1-(n-1)/2)", p.sigma1 + p.tau1 - p.lambda1 - c),
        ],
        [
            ("Gamma(sigma1-(n-1)/2)", p.sigma1 - c),
            ("Gamma(tau1-(n-1)/2)", p.tau1 - c),
        ],
    )
    return complex(np.exp((1.0 - p.sigma1 - p.tau1 + n) * LOG2 + LOGPI)) * core


def factor_J(p: BetaParams, variant) -> complex:
    """``2^(2-s2-t2+offset) pi^n G(l2-n) G(s2+t2-l2) / (G(s2) G(t2))``."""
    variant = Variant.parse(variant)
    n = p.n
    core = _ratio(
        [
            ("Gamma(lambda2-n)", p.lambda2 - n),
            ("Gamma(sigma2+tau2-lambda2)", p.sigma2 + p.tau2 - p.lambda2),
        ],
        [("Gamma(sigma2)", p.sigma2), ("Gamma(tau2)", p.tau2)],
    )
    log_pre = (2.0 - p.sigma2 - p.tau2 + variant.offset(n)) * LOG2 + n * LOGPI
    return complex(np.exp(log_pre)) * core


def rhs(p: BetaParams, variant) -> complex:
    """Closed-form value ``factor_I(p) * factor_J(p, variant)``."""
    return factor_I(p) * factor_J(p, variant)


@dataclass(frozen=True)
class ClosedFormBreakdown:
    factor_i: complex
    factor_j_variants: dict
    product_variants: dict

    def as_dict(self):
        out = {"factor_I": self.factor_i}
        for v in VARIANTS:
            out[f"factor_J[{v.value}]"] = self.factor_j_variants[v]
            out[f"product[{v.value}]"] = self.product_variants[v]
        return out


def breakdown(p: BetaParams) -> ClosedFormBreakdown:
    fi = factor_I(p)
    fj = {v: factor_J(p, v) for v in VARIANTS}
    return ClosedFormBreakdown(fi, fj, {v: fi * fj[v] for v in VARIANTS})
