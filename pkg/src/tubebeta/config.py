"""Run configuration for ``tubebeta verify``.

INI-style file: one ``[run]`` section with global settings and one
``[set NAME]`` section per parameter set. Complex exponents are always given
as ``<name>_re`` / ``<name>_im`` pairs; a missing ``_im`` is 0::

    [run]
    seed = 7
    budget = 10000000
    partitions = 8
    format = json

    [set anchor]
    n = 1
    lambda1_re = 2
    lambda2_re = 2
    sigma1_re = 3
    sigma2_re = 3
    tau1_re = 2
    tau2_re = 2
    variant = 0          ; optional: the variant this set must match
    expect = accept      ; or "reject" for sets outside the convergence region
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from typing import Optional

from .closed_form import Variant
from .domain import BetaParams
from .errors import ConfigError

__all__ = ["ParamSet", "RunConfig", "load_config", "parse_config"]

EXPONENTS = ("lambda1", "lambda2", "sigma1", "sigma2", "tau1", "tau2")
SET_KEYS = {"n", "expect", "variant", "budget", "seed"} | {
    f"{e}_{part}" for e in EXPONENTS for part in ("re", "im")
}
RUN_KEYS = {
    "seed", "budget", "partitions", "workers", "format", "output",
    "head_scale", "tail_scale", "chunk",
}


@dataclass(frozen=True)
class ParamSet:
    name: str
    params: BetaParams
    expect_reject: bool = False
    variant: Optional[Variant] = None
    budget: Optional[int] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    sets: tuple
    seed: int = 0
    budget: int = 1_000_000
    partitions: int = 8
    workers: int = 1
    format: str = "json"
    output: Optional[str] = None
    head_scale: float = 0.9
    tail_scale: float = 0.9
    chunk: int = 1 << 17


def _line_index(text):
    """Map ``(section, key)`` and ``(section, None)`` to 1-based line numbers."""
    index = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", line)
        if m:
            section = m.group(1).strip()
            index[(section, None)] = lineno
            continue
        m = re.match(r"([^=:\s]+)\s*[=:]", line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip().lower()), lineno)
    return index


def _convert(section, key, raw, kind, lines):
    try:
        return kind(raw)
    except (TypeError, ValueError):
        raise ConfigError(
            f"cannot parse {raw!r} as {kind.__name__}",
            line=lines.get((section, key)),
            field=f"{section}.{key}",
        ) from None


def parse_config(text: str, source="<config>") -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        if line is None and getattr(exc, "errors", None):
            line = exc.errors[0][0]
        raise ConfigError(f"{source}: {exc}", line=line) from None
    lines = _line_index(text)

    run = {}
    if parser.has_section("run"):
        for key, raw in parser.items("run"):
            if key not in RUN_KEYS:
                raise ConfigError(f"unknown key in [run]", line=lines.get(("run", key)), field=f"run.{key}")
            run[key] = raw
    conv = {
        "seed": int, "budget": int, "partitions": int, "workers": int,
        "head_scale": float, "tail_scale": float, "chunk": int,
    }
    settings = {}
    for key, raw in run.items():
        settings[key] = _convert("run", key, raw, conv.get(key, str), lines)
    if settings.get("format", "json") not in ("json", "csv"):
        raise ConfigError("format must be json or csv", line=lines.get(("run", "format")), field="run.format")

    sets = []
    for section in parser.sections():
        if section == "run":
            continue
        m = re.match(r"set\s+(\S+)$", section)
        if not m:
            raise ConfigError(f"unknown section [{section}]", line=lines.get((section, None)))
        name = m.group(1)
        items = dict(parser.items(section))
        for key in items:
            if key not in SET_KEYS:
                raise ConfigError("unknown key", line=lines.get((section, key)), field=f"{section}.{key}")
        if "n" not in items:
            raise ConfigError("missing required key 'n'", line=lines.get((section, None)), field=f"{section}.n")
        n = _convert(section, "n", items["n"], int, lines)
        values = []
        for e in EXPONENTS:
            if f"{e}_re" not in items:
                raise ConfigError(
                    f"missing required key '{e}_re'", line=lines.get((section, None)), field=f"{section}.{e}_re"
                )
            re_part = _convert(section, f"{e}_re", items[f"{e}_re"], float, lines)
            im_part = _convert(section, f"{e}_im", items.get(f"{e}_im", "0"), float, lines)
            values.append(complex(re_part, im_part))
        try:
            params = BetaParams(n, *values)
        except ValueError as exc:
            raise ConfigError(str(exc), line=lines.get((section, "n")), field=f"{section}.n") from None
        expect = items.get("expect", "accept").strip().lower()
        if expect not in ("accept", "reject"):
            raise ConfigError(
                "expect must be 'accept' or 'reject'", line=lines.get((section, "expect")), field=f"{section}.expect"
            )
        variant = None
        if "variant" in items:
            try:
                variant = Variant.parse(items["variant"])
            except ValueError as exc:
                raise ConfigError(str(exc), line=lines.get((section, "variant")), field=f"{section}.variant") from None
        budget = _convert(section, "budget", items["budget"], int, lines) if "budget" in items else None
        seed = _convert(section, "seed", items["seed"], int, lines) if "seed" in items else None
        sets.append(ParamSet(name, params, expect == "reject", variant, budget, seed))
    return RunConfig(sets=tuple(sets), **settings)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, source=str(path))
