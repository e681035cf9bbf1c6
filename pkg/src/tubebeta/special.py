"""Complex gamma/beta functions and the bi-power ``a^{lam|mu} = a^lam conj(a)^mu``.

Everything here works on Python scalars and on numpy arrays. Powers use the
principal logarithm and refuse bases with non-positive real part: every base
that occurs in the tube integrand lies in the right half-plane, so the
principal branch coincides with the continuous one there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, DomainError, ParameterError, PoleError

__all__ = [
    "BiExponent",
    "power_pair",
    "log_power_pair",
    "log_gamma",
    "gamma",
    "rgamma",
    "beta_1d",
    "aux_closed_form",
    "cauchy_beta_inner",
]

LOG_2PI_HALF = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k-1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
# Stirling is applied once Re z >= _SHIFT; the truncation error is then < 1e-19.
_SHIFT = 17.0


@dataclass(frozen=True)
class BiExponent:
    """Exponent pair ``{hol|anti}`` of the bi-power ``a^hol * conj(a)^anti``."""

    hol: complex
    anti: complex

    def __post_init__(self):
        for name in ("hol", "anti"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"BiExponent.{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    def __neg__(self):
        return BiExponent(-self.hol, -self.anti)

    def __add__(self, other):
        other = _as_exponent(other)
        return BiExponent(self.hol + other.hol, self.anti + other.anti)

    def __sub__(self, other):
        return self + (-_as_exponent(other))

    def conj_swap(self):
        """Exponent whose bi-power is the complex conjugate of this one's."""
        return BiExponent(self.anti.conjugate(), self.hol.conjugate())


def _as_exponent(e):
    if isinstance(e, BiExponent):
        return e
    hol, anti = e
    return BiExponent(hol, anti)


def _unwrap(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return x[()]
    return x


def log_power_pair(a, e, *, check=True):
    """Logarithm of :func:`power_pair`, i.e. ``hol*Log a + anti*conj(Log a)``."""
    e = _as_exponent(e)
    arr = np.asarray(a, dtype=complex)
    if check:
        if np.any(arr == 0):
            raise DomainError("power_pair: base must be nonzero")
        if np.any(~(arr.real > 0)):
            bad = arr[~(arr.real > 0)].ravel()[0]
            raise BranchError(
                f"power_pair: base {complex(bad)!r} has Re <= 0; "
                "outside the half-plane where the principal branch is verified"
            )
    log_a = np.log(arr)
    return _unwrap(e.hol * log_a + e.anti * np.conj(log_a))


def power_pair(a, e, *, check=True):
    """Bi-power ``a^{hol|anti} = exp(hol*Log a + anti*conj(Log a))``.

    ``e`` is a :class:`BiExponent` or a ``(hol, anti)`` pair. Raises
    :class:`DomainError` for ``a == 0`` and :class:`BranchError` when
    ``Re a <= 0``.

    >>> power_pair(2.0, (1, 2))
    (8+0j)
    """
    out = np.exp(log_power_pair(a, e, check=check))
    return complex(out) if np.ndim(out) == 0 else out


def _check_poles(z, label):
    on_axis = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(on_axis):
        raise PoleError(complex(z[on_axis].ravel()[0]), label)


def log_gamma(z, label=None):
    """Principal branch of ``log Gamma(z)``.

    Analytic on the plane cut along the non-positive real axis and real for
    ``z > 0``. Evaluated by upward recurrence to ``Re z >= 17`` followed by an
    8-term Stirling series; no reflection is used, so the branch never jumps
    inside the cut plane. Raises :class:`PoleError` at ``0, -1, -2, ...``.
    """
    z = np.asarray(z, dtype=complex)
    _check_poles(z, label)
    w = z.copy()
    shift = np.zeros_like(z)
    need = w.real < _SHIFT
    while np.any(need):
        shift[need] += np.log(w[need])
        w[need] += 1.0
        need = w.real < _SHIFT
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + LOG_2PI_HALF + series * inv - shift
    return complex(out) if out.ndim == 0 else out


def gamma(z, label=None):
    """``Gamma(z)`` as ``exp(log_gamma(z))``."""
    out = np.exp(log_gamma(z, label))
    return complex(out) if np.ndim(out) == 0 else out


def rgamma(z):
    """``1/Gamma(z)``, entire: returns 0 at the poles."""
    z = np.asarray(z, dtype=complex)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    safe = np.where(pole, 1.0, z)
    out = np.where(pole, 0.0, np.exp(-np.asarray(log_gamma(safe))))
    return complex(out) if out.ndim == 0 else out


def beta_1d(a, b):
    """Euler beta function ``Gamma(a)Gamma(b)/Gamma(a+b)``."""
    return complex(
        np.exp(
            log_gamma(a, "Gamma(a)")
            + log_gamma(b, "Gamma(b)")
            - log_gamma(complex(a) + complex(b), "Gamma(a+b)")
        )
    )


def aux_closed_form(alpha, beta, gamma_):
    """Closed form of ``int_{x>0} int_y x^(alpha-1) (1+x+iy)^{-{beta|gamma}} dy dx``.

    Equals ``2^(2-beta-gamma) pi Gamma(alpha) Gamma(beta+gamma-alpha-1) /
    (Gamma(beta) Gamma(gamma))``. Raises :class:`ParameterError` outside the
    region ``Re alpha > 0``, ``Re(beta+gamma-alpha-1) > 0``.
    """
    alpha, beta, gamma_ = complex(alpha), complex(beta), complex(gamma_)
    tail = beta + gamma_ - alpha - 1.0
    violated = []
    if not alpha.real > 0:
        violated.append("Re(alpha) > 0")
    if not tail.real > 0:
        violated.append("Re(beta+gamma-alpha-1) > 0")
    if violated:
        raise ParameterError(
            "aux integral diverges: violated " + ", ".join(violated), violated
        )
    log_val = (
        (2.0 - beta - gamma_) * math.log(2.0)
        + math.log(math.pi)
        + log_gamma(alpha, "Gamma(alpha)")
        + log_gamma(tail, "Gamma(beta+gamma-alpha-1)")
    )
    return complex(np.exp(log_val)) * complex(rgamma(beta)) * complex(rgamma(gamma_))


def cauchy_beta_inner(a, beta, gamma_):
    """``int_R (a+iw)^{-beta} (a-iw)^{-gamma} dw`` for real ``a > 0``.

    Equals ``2 pi (2a)^(1-beta-gamma) Gamma(beta+gamma-1) / (Gamma(beta)Gamma(gamma))``.
    """
    a = float(a)
    beta, gamma_ = complex(beta), complex(gamma_)
    s = beta + gamma_
    if not a > 0:
        raise DomainError(f"cauchy_beta_inner: a must be positive, got {a}")
    if not (s - 1.0).real > 0:
        raise ParameterError(
            "Cauchy beta integral diverges: violated Re(beta+gamma) > 1",
            ["Re(beta+gamma) > 1"],
        )
    log_val = math.log(2.0 * math.pi) + (1.0 - s) * math.log(2.0 * a)
    log_val += log_gamma(s - 1.0, "Gamma(beta+gamma-1)")
    return complex(np.exp(log_val)) * complex(rgamma(beta)) * complex(rgamma(gamma_))
