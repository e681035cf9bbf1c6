"""The tube domain, its integrand, and the reduction chain to product coordinates.

Coordinates on the tube are ``u1 = v1 + i w1``, ``u2 = v2 + i w2`` and
``z_j = x_j + i y_j`` (``j = 1..n-1``); the tube is ``v1 > 0``,
``v1 v2 - sum x_j^2 > 0``. The reduction chain maps a tube point to
``(v1, w1, r, h, p, q)``:

* ``r = v2 - sum x_j^2 / v1``                      (Jacobian 1)
* ``(p_j, q_j) = (x_j, y_j) S^{1/2}``              (whitening)
* ``h = w2 - Im(sum z_j^2 / (1 + u1))``            (Jacobian 1)

Each public operation has a typed scalar form working on :class:`TubePoint`
/ :class:`ReducedPoint` and an ``*_arrays`` form used by the samplers, where
``x, y, p, q`` have shape ``(N, n-1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import MembershipError
from .special import BiExponent, log_power_pair

__all__ = [
    "BetaParams",
    "ValidityReport",
    "TubePoint",
    "ReducedPoint",
    "SMatrix",
    "contains",
    "validate_params",
    "integrand_lhs",
    "invariant_measure_density",
    "s_matrix",
    "reduce",
    "reduce_inverse",
    "jacobian_reduction",
    "integrand_separated",
]


@dataclass(frozen=True)
class BetaParams:
    """Dimension ``n`` and the six complex exponents of the tube integral."""

    n: int
    lambda1: complex
    lambda2: complex
    sigma1: complex
    sigma2: complex
    tau1: complex
    tau2: complex

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("lambda1", "lambda2", "sigma1", "sigma2", "tau1", "tau2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def of(cls, n, lambda1, lambda2, sigma1, sigma2, tau1, tau2):
        return cls(n, lambda1, lambda2, sigma1, sigma2, tau1, tau2)

    def exponents(self):
        return (self.lambda1, self.lambda2, self.sigma1, self.sigma2, self.tau1, self.tau2)

    def conj_swap(self):
        """Conjugate every exponent and swap sigma_k with tau_k.

        The integrand of the result is the complex conjugate of this one's.
        """
        c = lambda v: v.conjugate()
        return BetaParams(
            self.n,
            c(self.lambda1),
            c(self.lambda2),
            c(self.tau1),
            c(self.tau2),
            c(self.sigma1),
            c(self.sigma2),
        )

    def is_real(self):
        return all(v.imag == 0 for v in self.exponents())


@dataclass(frozen=True)
class ValidityReport:
    conditions: tuple  # ((label, holds), ...)

    @property
    def ok(self):
        return all(holds for _, holds in self.conditions)

    @property
    def failures(self):
        return [label for label, holds in self.conditions if not holds]

    def __bool__(self):
        return self.ok


def validate_params(p: BetaParams) -> ValidityReport:
    """Report the four convergence inequalities of the tube integral."""
    n = p.n
    conds = (
        ("Re(lambda1) > (n+1)/2", p.lambda1.real > (n + 1) / 2),
        ("Re(sigma1+tau1-lambda1) > (n-1)/2", (p.sigma1 + p.tau1 - p.lambda1).real > (n - 1) / 2),
        ("Re(lambda2) > n", p.lambda2.real > n),
        ("Re(sigma2+tau2-lambda2) > 0", (p.sigma2 + p.tau2 - p.lambda2).real > 0),
    )
    return ValidityReport(conds)


@dataclass(frozen=True)
class TubePoint:
    """A point ``(u1, u2, z)`` of C^{n+1}; membership is checked by :func:`contains`."""

    u1: complex
    u2: complex
    z: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u1", complex(self.u1))
        object.__setattr__(self, "u2", complex(self.u2))
        object.__setattr__(self, "z", tuple(complex(v) for v in self.z))

    @property
    def n(self):
        return len(self.z) + 1

    @cached_property
    def v1(self):
        return self.u1.real

    @cached_property
    def w1(self):
        return self.u1.imag

    @cached_property
    def v2(self):
        return self.u2.real

    @cached_property
    def w2(self):
        return self.u2.imag

    @cached_property
    def x(self):
        return np.array([v.real for v in self.z], dtype=float)

    @cached_property
    def y(self):
        return np.array([v.imag for v in self.z], dtype=float)

    @classmethod
    def from_real(cls, v1, w1, v2, w2, x=(), y=()):
        return cls(complex(v1, w1), complex(v2, w2), [complex(a, b) for a, b in zip(x, y)])


@dataclass(frozen=True)
class ReducedPoint:
    """Coordinates ``(v1, w1, r, h, p, q)`` after the full reduction chain."""

    v1: float
    w1: float
    r: float
    h: float
    p: tuple = ()
    q: tuple = ()

    def __post_init__(self):
        for name in ("v1", "w1", "r", "h"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        if len(self.p) != len(self.q):
            raise ValueError("p and q must have the same length")
        if not (self.v1 > 0 and self.r > 0):
            raise MembershipError(f"reduced point needs v1 > 0 and r > 0, got v1={self.v1}, r={self.r}")

    @property
    def n(self):
        return len(self.p) + 1

    def as_array(self):
        return np.array([self.v1, self.w1, self.r, self.h, *self.p, *self.q])


@dataclass(frozen=True)
class SMatrix:
    """The 2x2 real symmetric matrix ``[[s11, s12], [s12, s22]]`` (entries may be arrays)."""

    s11: object
    s12: object
    s22: object

    def det(self):
        return self.s11 * self.s22 - self.s12 * self.s12

    def trace(self):
        return self.s11 + self.s22

    def is_positive_definite(self):
        return bool(np.all(self.s11 > 0) and np.all(self.s22 > 0) and np.all(self.det() > 0))

    def sqrt(self):
        """Symmetric square root via ``(S + sqrt(det) I) / sqrt(tr + 2 sqrt(det))``."""
        sd = np.sqrt(self.det())
        t = np.sqrt(self.trace() + 2.0 * sd)
        return SMatrix((self.s11 + sd) / t, self.s12 / t, (self.s22 + sd) / t)

    def inv(self):
        d = self.det()
        return SMatrix(self.s22 / d, -self.s12 / d, self.s11 / d)

    def inv_sqrt(self):
        return self.sqrt().inv()

    def as_array(self):
        return np.array([[self.s11, self.s12], [self.s12, self.s22]], dtype=float)

    def apply_right(self, a, b):
        """Row vectors ``(a_j, b_j)`` times this matrix, elementwise in ``j``."""
        s11, s12, s22 = (np.asarray(s)[..., None] if np.ndim(s) else s for s in (self.s11, self.s12, self.s22))
        return a * s11 + b * s12, a * s12 + b * s22


def s_matrix(v1, w1) -> SMatrix:
    """Matrix of the real part of ``sum x^2/v1 - sum z^2/(1+u1)`` in ``(x_j, y_j)``.

    ``S11`` is written as ``(1 + v1 + w1^2) / (v1 m)`` with ``m = |1+u1|^2``,
    which equals ``1/v1 - (1+v1)/m`` without the cancellation at large ``v1``.
    """
    v1 = np.asarray(v1, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    if np.any(~(v1 > 0)):
        raise MembershipError("s_matrix requires v1 > 0")
    m = (1.0 + v1) ** 2 + w1 * w1
    s = SMatrix((1.0 + v1 + w1 * w1) / (v1 * m), -w1 / m, (1.0 + v1) / m)
    if v1.ndim == 0:
        s = SMatrix(float(s.s11), float(s.s12), float(s.s22))
    return s


# --------------------------------------------------------------------- arrays


def _sq(a):
    return np.sum(a * a, axis=-1)


def contains_arrays(v1, v2, x):
    return (v1 > 0) & (v1 * v2 - _sq(x) > 0)


def _require(mask, what):
    if not np.all(mask):
        raise MembershipError(f"{what}: point is not in the tube (need v1 > 0 and v1*v2 - sum x^2 > 0)")


def kernel_shift(v1, w1, x, y):
    """``sum z_j^2 / (1 + u1)`` for arrays of points."""
    z = x + 1j * y
    return np.sum(z * z, axis=-1) / (1.0 + v1 + 1j * w1)


def integrand_lhs_log_arrays(v1, w1, v2, w2, x, y, p: BetaParams, det=None):
    """Complex log of the tube integrand; see :func:`integrand_lhs`.

    ``det`` optionally supplies ``v1 v2 - sum x^2`` when it is known exactly
    (it equals ``v1 r`` for a pushed-forward reduced point); recomputing it from
    ``v2`` cancels catastrophically when ``r << sum x^2 / v1``.
    """
    n = p.n
    if det is None:
        _require(contains_arrays(v1, v2, x), "integrand_lhs")
        d = v1 * v2 - _sq(x)
    else:
        _require((v1 > 0) & (det > 0), "integrand_lhs")
        d = det
    one_u1 = 1.0 + v1 + 1j * w1
    log_val = (p.lambda1 - p.lambda2) * np.log(v1) + (p.lambda2 - n - 1) * np.log(d)
    # (1+u1)^{s1-s2|t1-t2} * K^{s2|t2} = (1+u1)^{s1|t1} * (K/(1+u1))^{s2|t2}
    log_val = log_val - log_power_pair(one_u1, (p.sigma1, p.tau1))
    log_val = log_val - log_power_pair(kernel_quotient(v1, w1, v2, w2, x, y), (p.sigma2, p.tau2))
    return log_val


def kernel_quotient(v1, w1, v2, w2, x, y):
    """``K / (1+u1)`` with ``K = (1+u1)(1+u2) - sum z^2``; has Re > 0 on the tube."""
    one_u1 = 1.0 + v1 + 1j * w1
    z = x + 1j * y
    kernel = one_u1 * (1.0 + v2 + 1j * w2) - np.sum(z * z, axis=-1)
    return kernel / one_u1


def log_kernel_arrays(v1, w1, v2, w2, x, y):
    """Log of the kernel ``K = (1+u1)(1+u2) - sum z^2`` on the branch continuous
    from the base point ``(1, 1, 0)``.

    ``Re K`` can be negative inside the tube, but ``K = (1+u1) * (K/(1+u1))``
    with both factors in the right half-plane, so the sum of their principal
    logs has imaginary part in ``(-pi, pi)`` and never meets the cut.
    """
    one_u1 = 1.0 + v1 + 1j * w1
    return np.log(one_u1) + np.log(kernel_quotient(v1, w1, v2, w2, x, y))


def integrand_lhs_arrays(v1, w1, v2, w2, x, y, p: BetaParams):
    return np.exp(integrand_lhs_log_arrays(v1, w1, v2, w2, x, y, p))


def reduce_arrays(v1, w1, v2, w2, x, y):
    """Tube coordinates -> ``(v1, w1, r, h, p, q)``."""
    r = v2 - _sq(x) / v1
    if x.shape[-1] == 0:
        return v1, w1, r, w2, x.copy(), y.copy()
    pp, qq = s_matrix(v1, w1).sqrt().apply_right(x, y)
    h = w2 - np.imag(kernel_shift(v1, w1, x, y))
    return v1, w1, r, h, pp, qq


def reduce_inverse_arrays(v1, w1, r, h, pp, qq):
    """``(v1, w1, r, h, p, q)`` -> tube coordinates ``(v1, w1, v2, w2, x, y)``."""
    if pp.shape[-1] == 0:
        return v1, w1, r, h, pp.copy(), qq.copy()
    x, y = s_matrix(v1, w1).inv_sqrt().apply_right(pp, qq)
    w2 = h + np.imag(kernel_shift(v1, w1, x, y))
    v2 = r + _sq(x) / v1
    return v1, w1, v2, w2, x, y


def log_jacobian_arrays(v1, w1, n):
    """Log of ``|d(tube coords)/d(reduced coords)|`` = ``((n-1)/2) log(v1 |1+u1|^2)``."""
    return 0.5 * (n - 1) * np.log(v1 * ((1.0 + v1) ** 2 + w1 * w1))


def integrand_separated_log_arrays(v1, w1, r, h, pp, qq, p: BetaParams):
    n = p.n
    c = 0.5 * (n - 1)
    one_u1 = 1.0 + v1 + 1j * w1
    big_h = 1.0 + r + _sq(pp) + _sq(qq) + 1j * h
    log_val = (p.lambda1 - 0.5 * n - 1.5) * np.log(v1)
    log_val = log_val - log_power_pair(one_u1, (p.sigma1 - c, p.tau1 - c))
    log_val = log_val + (p.lambda2 - n - 1) * np.log(r)
    log_val = log_val - log_power_pair(big_h, (p.sigma2, p.tau2))
    return log_val


def integrand_separated_arrays(v1, w1, r, h, pp, qq, p: BetaParams):
    return np.exp(integrand_separated_log_arrays(v1, w1, r, h, pp, qq, p))


# ------------------------------------------------------------ typed interface


def _point_arrays(pt: TubePoint):
    return (
        np.array(pt.v1),
        np.array(pt.w1),
        np.array(pt.v2),
        np.array(pt.w2),
        pt.x.copy(),
        pt.y.copy(),
    )


def _reduced_arrays(rp: ReducedPoint):
    return (
        np.array(rp.v1),
        np.array(rp.w1),
        np.array(rp.r),
        np.array(rp.h),
        np.array(rp.p, dtype=float),
        np.array(rp.q, dtype=float),
    )


def contains(pt) -> bool:
    """True iff ``v1 > 0`` and ``v1 v2 - sum x_j^2 > 0`` (strict, no epsilon)."""
    if not isinstance(pt, TubePoint):
        pt = TubePoint(*pt)
    return bool(pt.v1 > 0 and pt.v1 * pt.v2 - float(np.sum(pt.x * pt.x)) > 0)


def integrand_lhs(pt: TubePoint, p: BetaParams) -> complex:
    """Integrand of the tube integral at ``pt``::

        v1^(l1-l2) (v1 v2 - sum x^2)^(l2-n-1)
        / [ (1+u1)^{s1-s2|t1-t2} ((1+u1)(1+u2) - sum z^2)^{s2|t2} ]
    """
    if pt.n != p.n:
        raise ValueError(f"point has n={pt.n} but params have n={p.n}")
    if not contains(pt):
        raise MembershipError(f"integrand_lhs: {pt} is not in the tube")
    return complex(np.exp(integrand_lhs_log_arrays(*_point_arrays(pt), p)))


def invariant_measure_density(pt: TubePoint, n=None) -> float:
    """Density ``(v1 v2 - sum x^2)^(-n-1)`` of the invariant measure."""
    n = pt.n if n is None else n
    if not contains(pt):
        raise MembershipError("invariant_measure_density: point is not in the tube")
    return float((pt.v1 * pt.v2 - float(np.sum(pt.x * pt.x))) ** (-n - 1))


def reduce(pt: TubePoint) -> ReducedPoint:
    if not contains(pt):
        raise MembershipError("reduce: point is not in the tube")
    v1, w1, r, h, pp, qq = reduce_arrays(*_point_arrays(pt))
    return ReducedPoint(v1, w1, r, h, tuple(pp), tuple(qq))


def reduce_inverse(rp: ReducedPoint, n=None) -> TubePoint:
    if n is not None and n != rp.n:
        raise ValueError(f"reduced point has n={rp.n}, expected {n}")
    v1, w1, v2, w2, x, y = reduce_inverse_arrays(*_reduced_arrays(rp))
    return TubePoint.from_real(v1, w1, v2, w2, x, y)


def jacobian_reduction(pt, n=None) -> float:
    """``|d(u, z) / d(v1, w1, r, h, p, q)| = (v1 |1+u1|^2)^((n-1)/2)``.

    This is the factor in ``du dz = J * dv1 dw1 dr dh dp dq``; the forward map
    :func:`reduce` has Jacobian ``1/J``. Only the whitening leg contributes.
    Accepts a :class:`TubePoint` or a :class:`ReducedPoint`.
    """
    n = pt.n if n is None else n
    return float(np.exp(log_jacobian_arrays(pt.v1, pt.w1, n)))


def integrand_separated(rp: ReducedPoint, p: BetaParams) -> complex:
    """Product-form integrand in reduced coordinates::

        v1^(l1-n/2-3/2) (1+v1+i w1)^{-{s1-(n-1)/2 | t1-(n-1)/2}}
        * r^(l2-n-1) (1 + r + sum(p^2+q^2) + i h)^{-{s2|t2}}

    Satisfies ``integrand_lhs(reduce_inverse(rp)) * jacobian_reduction(rp) ==
    integrand_separated(rp)``.
    """
    if rp.n != p.n:
        raise ValueError(f"point has n={rp.n} but params have n={p.n}")
    return complex(np.exp(integrand_separated_log_arrays(*_reduced_arrays(rp), p)))
