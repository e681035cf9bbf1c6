"""Importance-sampled Monte Carlo for the full tube integral."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    BetaParams,
    integrand_lhs_log_arrays,
    log_jacobian_arrays,
    reduce_inverse_arrays,
)
from .sampling import SamplerConfig, draw_reduced, proposal_shapes

__all__ = ["IntegrationEstimate", "mc_lhs", "partition_streams", "WEIGHT_RATIO_LIMIT"]

WEIGHT_RATIO_LIMIT = 1e4


@dataclass(frozen=True)
class IntegrationEstimate:
    """Monte Carlo result. ``std_error`` is the standard error of the complex
    mean, ``sqrt(std_error_re**2 + std_error_im**2)``."""

    mean: complex
    std_error: float
    n_samples: int
    seed: int
    wall_time: float = 0.0
    std_error_re: float = 0.0
    std_error_im: float = 0.0
    partitions: int = 1
    max_weight_ratio: float = 0.0
    flags: tuple = ()

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be non-negative")
        if self.n_samples <= 0:
            raise ValueError("n_samples must be positive")

    @property
    def rel_std_error(self):
        return self.std_error / abs(self.mean) if self.mean != 0 else math.inf

    def z_score(self, value):
        return abs(self.mean - value) / self.std_error if self.std_error > 0 else math.inf


@dataclass
class _Moments:
    """Running count/mean/M2 for the real and imaginary parts (Chan et al. merge)."""

    count: int = 0
    mean_re: float = 0.0
    mean_im: float = 0.0
    m2_re: float = 0.0
    m2_im: float = 0.0
    max_abs: float = 0.0
    sum_abs: float = 0.0

    @classmethod
    def of(cls, w):
        re, im = w.real, w.imag
        mr, mi = float(np.mean(re)), float(np.mean(im))
        a = np.abs(w)
        return cls(
            w.size,
            mr,
            mi,
            float(np.sum((re - mr) ** 2)),
            float(np.sum((im - mi) ** 2)),
            float(np.max(a)),
            float(np.sum(a)),
        )

    def merge(self, o):
        if o.count == 0:
            return self
        if self.count == 0:
            return o
        n = self.count + o.count
        dr, di = o.mean_re - self.mean_re, o.mean_im - self.mean_im
        f = self.count * o.count / n
        return _Moments(
            n,
            self.mean_re + dr * o.count / n,
            self.mean_im + di * o.count / n,
            self.m2_re + o.m2_re + dr * dr * f,
            self.m2_im + o.m2_im + di * di * f,
            max(self.max_abs, o.max_abs),
            self.sum_abs + o.sum_abs,
        )


def partition_streams(seed: int, partitions: int):
    """One independent counter-based (Philox) generator per partition."""
    children = np.random.SeedSequence(seed).spawn(partitions)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _partition_budgets(budget, partitions):
    base, extra = divmod(budget, partitions)
    return [base + (1 if i < extra else 0) for i in range(partitions)]


def log_weights(params: BetaParams, v1, w1, r, h, pp, qq, log_q):
    """``log(integrand_lhs(pre-image) * jacobian / proposal)`` per sample."""
    tube = reduce_inverse_arrays(v1, w1, r, h, pp, qq)
    log_f = integrand_lhs_log_arrays(*tube, params, det=v1 * r)
    return log_f + log_jacobian_arrays(v1, w1, params.n) - log_q


def _run_partition(args):
    params, shapes, seed, partitions, index, budget, chunk = args
    rng = partition_streams(seed, partitions)[index]
    acc = _Moments()
    left = budget
    while left > 0:
        size = min(chunk, left)
        sample = draw_reduced(rng, shapes, params.n, size)
        w = np.exp(log_weights(params, *sample))
        acc = acc.merge(_Moments.of(w))
        left -= size
    return acc


def default_workers():
    env = os.environ.get("TUBEBETA_WORKERS")
    return int(env) if env else 1


def mc_lhs(params: BetaParams, cfg: SamplerConfig) -> IntegrationEstimate:
    """Importance-sampling estimate of the tube integral.

    Samples are drawn in reduced coordinates, pushed to the tube with
    ``reduce_inverse``, and weighted by ``integrand_lhs * jacobian / proposal``.
    The result depends only on ``(seed, partitions, budget)``, not on
    ``workers``: partition streams are fixed and merged in index order.
    """
    shapes = proposal_shapes(params, cfg)
    start = time.perf_counter()
    jobs = [
        (params, shapes, cfg.seed, cfg.partitions, i, b, cfg.chunk)
        for i, b in enumerate(_partition_budgets(cfg.budget, cfg.partitions))
        if b > 0
    ]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(jobs))) as pool:
            parts = list(pool.map(_run_partition, jobs))
    else:
        parts = [_run_partition(j) for j in jobs]
    acc = _Moments()
    for part in parts:
        acc = acc.merge(part)
    n = acc.count
    var_re = acc.m2_re / (n - 1) if n > 1 else math.inf
    var_im = acc.m2_im / (n - 1) if n > 1 else math.inf
    se_re, se_im = math.sqrt(var_re / n), math.sqrt(var_im / n)
    ratio = acc.max_abs / (acc.sum_abs / n) if acc.sum_abs > 0 else math.inf
    flags = ()
    if not ratio <= WEIGHT_RATIO_LIMIT:
        flags = (f"max weight / mean weight = {ratio:.3g} exceeds {WEIGHT_RATIO_LIMIT:g}",)
    return IntegrationEstimate(
        mean=complex(acc.mean_re, acc.mean_im),
        std_error=math.hypot(se_re, se_im),
        n_samples=n,
        seed=cfg.seed,
        wall_time=time.perf_counter() - start,
        std_error_re=se_re,
        std_error_im=se_im,
        partitions=cfg.partitions,
        max_weight_ratio=ratio,
        flags=flags,
    )
