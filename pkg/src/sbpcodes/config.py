"""Flat ``key = value`` run configuration with a typed schema.

Lines starting with ``#`` are comments.  Lists are comma separated.  Every
key is checked against :data:`SCHEMA` and unknown keys are rejected before
anything runs.  ``preset`` fills in a standard scenario that later keys
override.

Example::

    target = homogeneous SBP curve
    tolerance = 0.05
    preset = homogeneous
    scheme = sbp
    ucb = 22500, 27000
    trials = 1000
    seed = 1
    expect = sbp@22500:0.4796
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from sbpcodes.errors import ConfigError
from sbpcodes.sim import LAW_KINDS, REDRAW_MODES, SCHEMES, RedrawLaw, ScenarioConfig


def _int(v: str) -> int:
    return int(v)


def _float(v: str) -> float:
    return float(v)


def _list(conv):
    def parse(v: str):
        return tuple(conv(item.strip()) for item in v.split(",") if item.strip())
    return parse


def _enum(*choices):
    def parse(v: str):
        if v not in choices:
            raise ValueError(f"expected one of {choices}")
        return v
    return parse


def _class(v: str) -> tuple[float, int]:
    rate, _, count = v.partition(":")
    return float(rate), int(count)


def _expect(v: str) -> tuple[str, int, float]:
    key, _, value = v.partition(":")
    scheme, _, ucb = key.partition("@")
    return scheme.strip(), int(ucb), float(value)


SCHEMA = {
    "target": str,
    "tolerance": _float,
    "preset": _enum("heterogeneous", "homogeneous", "none"),
    "scheme": _list(_enum(*SCHEMES)),
    "N": _int,
    "K": _int,
    "L": _int,
    "T": _int,
    "nu": _float,
    "classes": _list(_class),
    "ucb": _list(_int),
    "trials": _int,
    "seed": _int,
    "rho": _float,
    "law": _enum(*LAW_KINDS),
    "law_values": _list(_float),
    "static_redraw": _enum(*REDRAW_MODES),
    "rateless_redraw": _enum(*REDRAW_MODES),
    "c": _int,
    "eps": _float,
    "cluster_by": _enum("known", "observed"),
    "workers": _int,
    "output": str,
    "expect": _list(_expect),
}


@dataclass
class RunConfig:
    scenario: ScenarioConfig
    target: str = ""
    tolerance: float | None = None
    workers: int = 1
    output: str | None = None
    expect: tuple = field(default_factory=tuple)


def parse_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = SCHEMA[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    return values


def build(values: dict) -> RunConfig:
    v = dict(values)
    meta = {k: v.pop(k) for k in ("target", "tolerance", "workers", "output", "expect") if k in v}
    preset = v.pop("preset", "none")
    kw = {}
    renames = {"scheme": "schemes"}
    law_kind, law_values = v.pop("law", None), v.pop("law_values", None)
    for k, val in v.items():
        kw[renames.get(k, k)] = val
    if law_kind is not None or law_values is not None:
        if law_kind is None or law_values is None:
            raise ConfigError("'law' and 'law_values' must be given together")
        kw["law"] = RedrawLaw(law_kind, law_values)
    try:
        if preset == "heterogeneous":
            scenario = ScenarioConfig.heterogeneous(**kw)
        elif preset == "homogeneous":
            scenario = ScenarioConfig.homogeneous(**kw)
        else:
            missing = [k for k in ("N", "classes", "nu", "T", "K", "L") if k not in kw]
            if missing:
                raise ConfigError(f"missing keys without a preset: {missing}")
            scenario = ScenarioConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    if not scenario.ucb:
        raise ConfigError("'ucb' must list at least one budget")
    for scheme, ucb, _ in meta.get("expect", ()):
        if scheme not in scenario.schemes or ucb not in scenario.ucb:
            raise ConfigError(f"expectation {scheme}@{ucb} is not part of the sweep")
    return RunConfig(scenario, **meta)


def load(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return build(parse_text(text))
