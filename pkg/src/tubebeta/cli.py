"""Command-line interface: ``tubebeta {rhs,verify,discrepancy,steps,aux}``.

Exit codes: 0 verified, 2 numerical mismatch, 3 invalid parameters (or a
pole), 4 configuration/usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .adjudicate import adjudicate, consistent_offset, default_params
from .closed_form import VARIANTS, Variant, factor_I, factor_J
from .config import RunConfig, load_config
from .domain import BetaParams, validate_params
from .errors import ConfigError, ConvergenceError, DomainError, ParameterError, ProposalError
from .quadrature import quad_aux
from .report import run_verification, to_csv, to_json
from .sampling import SamplerConfig
from .special import aux_closed_form
from .steps import STEPS, verify_step

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_INVALID = 3
EXIT_CONFIG = 4

WORKERS_ENV = "TUBEBETA_WORKERS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: usage error: {message}\n")


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _workers(args):
    if getattr(args, "workers", None):
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    return int(env) if env else 1


def _add_params(p, required=True):
    p.add_argument("--n", type=int, required=required, help="dimension parameter (z has n-1 coordinates)")
    for name in ("lambda1", "lambda2", "sigma1", "sigma2", "tau1", "tau2"):
        p.add_argument(f"--{name}", type=_complex, required=required, help="complex, e.g. 3 or 3+0.5j")


def _params(args):
    return BetaParams(args.n, args.lambda1, args.lambda2, args.sigma1, args.sigma2, args.tau1, args.tau2)


def _c(z):
    return f"{z.real:.15g}{z.imag:+.15g}j"


def cmd_rhs(args, out):
    p = _params(args)
    variant = Variant.parse(args.variant)
    fi = factor_I(p)
    fj = factor_J(p, variant)
    if args.format == "json":
        doc = {
            "params": {"n": p.n, **{k: [v.real, v.imag] for k, v in zip(
                ("lambda1", "lambda2", "sigma1", "sigma2", "tau1", "tau2"), p.exponents())}},
            "variant": variant.value,
            "factor_I": [fi.real, fi.imag],
            "factor_J": [fj.real, fj.imag],
            "product": [(fi * fj).real, (fi * fj).imag],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    out.write(f"n        = {p.n}\n")
    for k, v in zip(("lambda1", "lambda2", "sigma1", "sigma2", "tau1", "tau2"), p.exponents()):
        out.write(f"{k:<8} = {_c(v)}\n")
    out.write(f"variant  = {variant.value}\n")
    out.write(f"factor_I = {_c(fi)}\n")
    out.write(f"factor_J = {_c(fj)}\n")
    out.write(f"product  = {_c(fi * fj)}\n")
    return EXIT_OK


def cmd_verify(args, out):
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.budget is not None:
        overrides["budget"] = args.budget
    if args.partitions is not None:
        overrides["partitions"] = args.partitions
    overrides["workers"] = _workers(args) if (args.workers or os.environ.get(WORKERS_ENV)) else cfg.workers
    fmt = args.format or cfg.format
    output = args.output or cfg.output
    cfg = RunConfig(**{**cfg.__dict__, **overrides})
    if not cfg.sets:
        raise ConfigError("no parameter sets: add at least one [set NAME] section")

    def progress(row):
        flat = row.as_flat()
        sys.stderr.write(f"[{row.status}] {row.name} matched={row.matched_variant} ({flat['wall_time']:.1f}s)\n")

    rows = run_verification(cfg, progress=progress if args.progress else None)
    if fmt == "csv":
        text = to_csv(rows)
    else:
        text = to_json(rows, generated_at=datetime.now(timezone.utc).isoformat())
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    statuses = {r.status for r in rows}
    if "invalid" in statuses:
        return EXIT_INVALID
    if "mismatch" in statuses:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_discrepancy(args, out):
    n_list = [int(v) for v in args.n_list.split(",") if v.strip()]
    if not n_list:
        raise ConfigError("empty --n-list")
    mc_cfg = None
    if args.budget:
        mc_cfg = SamplerConfig(budget=args.budget, seed=args.seed, partitions=args.partitions, workers=_workers(args))
    checks = [adjudicate(n, args.tol, mc_cfg=mc_cfg) for n in n_list]
    verdict = consistent_offset(checks)
    for c in checks:
        out.write(f"n={c.n}  quad_J = {_c(c.quad)}  (err est {c.quad_error:.2e}, tol {c.tol:g})\n")
        for v in VARIANTS:
            mark = "MATCH " if v in c.matched else "reject"
            ratio = c.ratio(v)
            out.write(
                f"  offset {v.value:>2}: {mark} factor_J = {_c(c.values[v])}  "
                f"ratio {abs(ratio):.6g}  margin {c.margins[v]:.3g} tol units\n"
            )
        if c.mc is not None:
            zs = "  ".join(f"z[{v.value}]={c.mc_z[v]:.3g}" for v in VARIANTS)
            out.write(f"  mc_lhs = {_c(c.mc.mean)} +- {c.mc.std_error:.3g}  {zs}\n")
    if verdict is None:
        out.write("verdict: no single offset matches every n\n")
        return EXIT_MISMATCH
    out.write(f"verdict: offset {verdict.value} matches uniquely for n in {n_list}\n")
    return EXIT_OK


def cmd_steps(args, out):
    p = _params(args) if args.n is not None else None
    if p is None:
        raise ConfigError("steps requires --n and all six exponents")
    cfg = SamplerConfig(budget=args.samples, seed=args.seed)
    failed = False
    for step in STEPS:
        rep = verify_step(step, p, cfg)
        out.write(rep.summary() + "\n")
        failed |= not rep.passed
    if args.negative_control:
        rep = verify_step("whitening", p, cfg, fault="unit-jacobian")
        out.write(rep.summary() + ("  (expected failure)\n" if not rep.passed else "  (UNEXPECTED pass)\n"))
        failed |= rep.passed and p.n >= 2
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_aux(args, out):
    closed = aux_closed_form(args.alpha, args.beta, args.gamma)
    res = quad_aux(args.alpha, args.beta, args.gamma, args.tol, full_output=True)
    diff = abs(res.value - closed)
    ok = diff <= args.tol * (1.0 + abs(closed))
    out.write(f"closed form = {_c(closed)}\n")
    out.write(f"quadrature  = {_c(res.value)}  (err est {res.abs_error:.2e})\n")
    out.write(f"|diff|      = {diff:.3e}  {'PASS' if ok else 'FAIL'} at tol {args.tol:g}\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser():
    parser = _Parser(prog="tubebeta", description="Verify the tube-domain beta integral numerically.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rhs", help="closed-form right side and its factors")
    _add_params(p)
    p.add_argument("--variant", default="0", help="power-of-two offset in J: +n, 0 or -n (write --variant=-n)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rhs)

    p = sub.add_parser("verify", help="Monte Carlo verification of every set in a config file")
    p.add_argument("config")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--partitions", type=int)
    p.add_argument("--workers", type=int, help=f"worker processes (env {WORKERS_ENV})")
    p.add_argument("--progress", action="store_true", help="per-set progress on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("discrepancy", help="adjudicate the power of two in factor J")
    p.add_argument("--n-list", default="1,2,3")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--budget", type=int, default=0, help="also run mc_lhs with this budget (n <= 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partitions", type=int, default=8)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("steps", help="sample-wise check of the three substitutions")
    _add_params(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--negative-control", action="store_true", help="also run the unit-Jacobian fault")
    p.set_defaults(func=cmd_steps)

    p = sub.add_parser("aux", help="auxiliary 2D identity: closed form vs quadrature")
    p.add_argument("--alpha", type=_complex, required=True)
    p.add_argument("--beta", type=_complex, required=True)
    p.add_argument("--gamma", type=_complex, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_aux)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except (ParameterError, DomainError, ProposalError) as exc:
        sys.stderr.write(f"invalid parameters: {exc}\n")
        return EXIT_INVALID
    except ConvergenceError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
