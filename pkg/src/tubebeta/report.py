"""Verification rows and their CSV/JSON serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass

from .closed_form import VARIANTS, Variant, rhs
from .config import EXPONENTS, ParamSet, RunConfig
from .domain import validate_params
from .errors import ParameterError
from .montecarlo import IntegrationEstimate, mc_lhs
from .sampling import SamplerConfig

__all__ = ["Z_THRESHOLD", "VerificationRow", "COLUMNS", "verify_set", "run_verification", "to_csv", "to_json"]

Z_THRESHOLD = 3.0

_VKEY = {Variant.PLUS_N: "plus_n", Variant.ZERO: "zero", Variant.MINUS_N: "minus_n"}

COLUMNS = (
    ["name", "n"]
    + [f"{e}_{part}" for e in EXPONENTS for part in ("re", "im")]
    + ["lhs_re", "lhs_im", "lhs_stderr", "n_samples", "seed"]
    + [f"rhs_{_VKEY[v]}_{part}" for v in VARIANTS for part in ("re", "im")]
    + [f"z_{_VKEY[v]}" for v in VARIANTS]
    + ["matched_variant", "status", "wall_time"]
)


@dataclass(frozen=True)
class VerificationRow:
    name: str
    params: object
    lhs: IntegrationEstimate
    rhs: dict  # Variant -> complex
    z: dict  # Variant -> float
    matched_variant: str
    status: str
    wall_time: float

    def as_flat(self):
        out = {"name": self.name, "n": self.params.n}
        for e in EXPONENTS:
            v = getattr(self.params, e)
            out[f"{e}_re"] = v.real
            out[f"{e}_im"] = v.imag
        if self.lhs is None:
            out.update(lhs_re=math.nan, lhs_im=math.nan, lhs_stderr=math.nan, n_samples=0, seed=0)
        else:
            out.update(
                lhs_re=self.lhs.mean.real,
                lhs_im=self.lhs.mean.imag,
                lhs_stderr=self.lhs.std_error,
                n_samples=self.lhs.n_samples,
                seed=self.lhs.seed,
            )
        for v in VARIANTS:
            val = self.rhs.get(v, complex(math.nan, math.nan))
            out[f"rhs_{_VKEY[v]}_re"] = val.real
            out[f"rhs_{_VKEY[v]}_im"] = val.imag
        for v in VARIANTS:
            out[f"z_{_VKEY[v]}"] = self.z.get(v, math.nan)
        out["matched_variant"] = self.matched_variant
        out["status"] = self.status
        out["wall_time"] = self.wall_time
        return out


def verify_set(ps: ParamSet, sampler: SamplerConfig) -> VerificationRow:
    """Run ``mc_lhs`` for one parameter set and score it against every variant.

    ``status`` is ``verified``, ``mismatch``, ``rejected`` (expected rejection
    observed) or ``invalid`` (parameters outside the convergence region).
    """
    start = time.perf_counter()
    report = validate_params(ps.params)
    if not report.ok:
        status = "rejected" if ps.expect_reject else "invalid"
        return VerificationRow(ps.name, ps.params, None, {}, {}, "none", status, time.perf_counter() - start)
    if ps.expect_reject:
        return VerificationRow(ps.name, ps.params, None, {}, {}, "none", "invalid", time.perf_counter() - start)
    est = mc_lhs(ps.params, sampler)
    values = {v: rhs(ps.params, v) for v in VARIANTS}
    z = {v: est.z_score(values[v]) for v in VARIANTS}
    matches = [v for v in VARIANTS if z[v] <= Z_THRESHOLD]
    if len(matches) == 1:
        matched = matches[0].value
    else:
        matched = "none" if not matches else "ambiguous"
    ok = len(matches) == 1 and (ps.variant is None or matches[0] is ps.variant)
    return VerificationRow(
        ps.name, ps.params, est, values, z, matched, "verified" if ok else "mismatch",
        time.perf_counter() - start,
    )


def sampler_for(cfg: RunConfig, ps: ParamSet) -> SamplerConfig:
    return SamplerConfig(
        budget=ps.budget if ps.budget is not None else cfg.budget,
        seed=ps.seed if ps.seed is not None else cfg.seed,
        partitions=cfg.partitions,
        workers=cfg.workers,
        head_scale=cfg.head_scale,
        tail_scale=cfg.tail_scale,
        chunk=cfg.chunk,
    )


def run_verification(cfg: RunConfig, progress=None):
    rows = []
    for ps in cfg.sets:
        row = verify_set(ps, sampler_for(cfg, ps))
        if progress is not None:
            progress(row)
        rows.append(row)
    return rows


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        flat = row.as_flat()
        writer.writerow([_fmt(flat[c]) for c in COLUMNS])
    return buf.getvalue()


def to_json(rows, generated_at=None) -> str:
    """JSON document; everything run-dependent (wall times, timestamp) lives
    under ``"timing"`` so the ``"payload"`` is reproducible byte for byte."""
    payload = []
    timing = {}
    for row in rows:
        flat = row.as_flat()
        timing[flat["name"]] = flat.pop("wall_time")
        payload.append(flat)
    doc = {
        "payload": {"columns": [c for c in COLUMNS if c != "wall_time"], "rows": payload},
        "timing": {"generated_at": generated_at, "wall_time": timing},
    }
    return json.dumps(doc, indent=2) + "\n"


def payload_json(text: str) -> str:
    """The canonical serialisation of the reproducible part of a JSON report."""
    return json.dumps(json.loads(text)["payload"], indent=2, sort_keys=False)
