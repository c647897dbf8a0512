"""TOML scenario configuration: schema, defaults, validation, round-trip.

Unknown sections or keys are hard errors (a mistyped physics parameter
silently falling back to a default is the main user hazard). Values are
structurally validated here; physical validity (state positivity,
geometry) is checked when the objects are built, so those failures carry
their own exit code.

Absent keys fall back to the canonical scenario: c = (1, -0.3, 0.3),
alpha = 2, g = 1, delta = 10, engine closed, two revival periods at
2048 samples per period.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields

import tomli

from .dynamics import period_closed
from .errors import ConfigError

__all__ = [
    "AnalysisOptions",
    "SweepSpec",
    "ScenarioConfig",
    "parse_config",
    "load_config",
    "serialize_config",
    "resolve_run_grid",
]

ENGINES_CLI = ("closed", "effective", "jc", "all")
SWEEP_AXES = ("c3", "alpha", "delta", "g")
# default one-parameter families when [sweep] values is omitted; a
# convenience choice, not data
SWEEP_DEFAULT_VALUES = {
    "c3": (0.1, 0.3, 0.5, 0.7),
    "alpha": (0.5, 1.0, 2.0, 3.0),
    "delta": (10.0, 20.0, 30.0),
}
MIN_SAMPLES = 16
SAMPLES_PER_PERIOD = 2048

_DEVICE_KEYS = ("r", "L", "l", "omega_r", "delta_BN_z", "dB_z", "g_B")


@dataclass(frozen=True)
class AnalysisOptions:
    deaths: bool = True
    plateaus: bool = True
    period: bool = True
    sync: bool = True
    death_eps: float = 1e-6
    plateau_window: int = 64
    plateau_slope_eps: float = 1e-3
    plateau_level_eps: float = 1e-3
    sync_threshold: float = 0.5
    period_min_corr: float = 0.9


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    # with axis "c3", also set c2 = -c3 at every point (collapses the
    # state triple to a one-parameter family)
    tie_c2_to_c3: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    c1: float = 1.0
    c2: float = -0.3
    c3: float = 0.3
    alpha: complex = 2.0 + 0.0j
    n_max: int | None = None  # None means auto truncation
    g: float = 1.0
    delta: float = 10.0
    omega: float | None = None
    t_max: float | None = None
    samples: int | None = None
    engine: str = "closed"
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)
    sweep: SweepSpec | None = None
    device: dict = field(default_factory=dict)
    output: str | None = None


def _type_name(v) -> str:
    return type(v).__name__


def _num(section: str, key: str, v, *, positive=False, nonneg=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"[{section}] {key}: expected a number, got {_type_name(v)}")
    v = float(v)
    if positive and not v > 0:
        raise ConfigError(f"[{section}] {key}: must be > 0, got {v}")
    if nonneg and v < 0:
        raise ConfigError(f"[{section}] {key}: must be >= 0, got {v}")
    return v


def _int(section: str, key: str, v, *, minimum=None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"[{section}] {key}: expected an integer, got {_type_name(v)}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"[{section}] {key}: must be >= {minimum}, got {v}")
    return v


def _bool(section: str, key: str, v) -> bool:
    if not isinstance(v, bool):
        raise ConfigError(f"[{section}] {key}: expected a boolean, got {_type_name(v)}")
    return v


def _reject_unknown(section: str, data: dict, allowed):
    for k in data:
        if k not in allowed:
            raise ConfigError(f"[{section}] unknown key {k!r} (allowed: {', '.join(allowed)})")


def _parse_alpha(v) -> complex:
    if isinstance(v, bool):
        raise ConfigError("[resonator] alpha: expected a number or [re, im] pair")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        return complex(float(v[0]), float(v[1]))
    raise ConfigError("[resonator] alpha: expected a number or [re, im] pair")


def parse_config(text: str) -> ScenarioConfig:
    """ScenarioConfig from TOML text; raises ConfigError on any problem."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"config is not valid TOML: {e}") from e
    _reject_unknown(
        "top level", data,
        ("state", "resonator", "model", "run", "analysis", "sweep", "device", "output"),
    )
    kw: dict = {}

    st = data.get("state", {})
    _reject_unknown("state", st, ("c1", "c2", "c3"))
    for k in ("c1", "c2", "c3"):
        if k in st:
            kw[k] = _num("state", k, st[k])

    res = data.get("resonator", {})
    _reject_unknown("resonator", res, ("alpha", "n_max"))
    if "alpha" in res:
        kw["alpha"] = _parse_alpha(res["alpha"])
    if "n_max" in res:
        v = res["n_max"]
        if v == "auto":
            kw["n_max"] = None
        else:
            kw["n_max"] = _int("resonator", "n_max", v, minimum=0)

    mo = data.get("model", {})
    _reject_unknown("model", mo, ("g", "delta", "omega"))
    if "g" in mo:
        kw["g"] = _num("model", "g", mo["g"])
    if "delta" in mo:
        kw["delta"] = _num("model", "delta", mo["delta"])
    if "omega" in mo:
        kw["omega"] = _num("model", "omega", mo["omega"])

    run = data.get("run", {})
    _reject_unknown("run", run, ("t_max", "samples", "engine"))
    if "t_max" in run:
        kw["t_max"] = _num("run", "t_max", run["t_max"], positive=True)
    if "samples" in run:
        kw["samples"] = _int("run", "samples", run["samples"], minimum=MIN_SAMPLES)
    if "engine" in run:
        eng = run["engine"]
        if eng not in ENGINES_CLI:
            raise ConfigError(
                f"[run] engine: {eng!r} is not one of {', '.join(ENGINES_CLI)}"
            )
        kw["engine"] = eng

    an = data.get("analysis", {})
    an_fields = {f.name: f for f in fields(AnalysisOptions)}
    _reject_unknown("analysis", an, tuple(an_fields))
    an_kw = {}
    for k, v in an.items():
        if an_fields[k].type == "bool":
            an_kw[k] = _bool("analysis", k, v)
        elif k == "plateau_window":
            an_kw[k] = _int("analysis", k, v, minimum=3)
        else:
            an_kw[k] = _num("analysis", k, v, positive=True)
    kw["analysis"] = AnalysisOptions(**an_kw)

    if "sweep" in data:
        sw = data["sweep"]
        _reject_unknown("sweep", sw, ("axis", "values", "tie_c2_to_c3"))
        if "axis" not in sw:
            raise ConfigError("[sweep] requires 'axis'")
        axis = sw["axis"]
        if axis not in SWEEP_AXES:
            raise ConfigError(f"[sweep] axis: {axis!r} is not one of {', '.join(SWEEP_AXES)}")
        if "values" in sw:
            vals = sw["values"]
            if not isinstance(vals, list) or not vals:
                raise ConfigError("[sweep] values: expected a nonempty list of numbers")
            values = tuple(_num("sweep", "values", v) for v in vals)
        elif axis in SWEEP_DEFAULT_VALUES:
            values = SWEEP_DEFAULT_VALUES[axis]
        else:
            raise ConfigError(f"[sweep] values: required for axis {axis!r}")
        tie = _bool("sweep", "tie_c2_to_c3", sw.get("tie_c2_to_c3", False))
        if tie and axis != "c3":
            raise ConfigError("[sweep] tie_c2_to_c3 only applies to axis = 'c3'")
        kw["sweep"] = SweepSpec(axis=axis, values=values, tie_c2_to_c3=tie)

    dev = data.get("device", {})
    _reject_unknown("device", dev, _DEVICE_KEYS)
    kw["device"] = {k: _num("device", k, v) for k, v in dev.items()}

    out = data.get("output", {})
    _reject_unknown("output", out, ("path",))
    if "path" in out:
        if not isinstance(out["path"], str):
            raise ConfigError("[output] path: expected a string")
        kw["output"] = out["path"]

    return ScenarioConfig(**kw)


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {v!r}")


def serialize_config(cfg: ScenarioConfig) -> str:
    """TOML text that parses back to an equal ScenarioConfig."""
    lines = ["[state]"]
    for k in ("c1", "c2", "c3"):
        lines.append(f"{k} = {_fmt(getattr(cfg, k))}")
    lines += ["", "[resonator]"]
    a = cfg.alpha
    if a.imag == 0.0:
        lines.append(f"alpha = {_fmt(a.real)}")
    else:
        lines.append(f"alpha = [{_fmt(a.real)}, {_fmt(a.imag)}]")
    lines.append('n_max = "auto"' if cfg.n_max is None else f"n_max = {cfg.n_max}")
    lines += ["", "[model]", f"g = {_fmt(cfg.g)}", f"delta = {_fmt(cfg.delta)}"]
    if cfg.omega is not None:
        lines.append(f"omega = {_fmt(cfg.omega)}")
    lines += ["", "[run]"]
    if cfg.t_max is not None:
        lines.append(f"t_max = {_fmt(cfg.t_max)}")
    if cfg.samples is not None:
        lines.append(f"samples = {cfg.samples}")
    lines.append(f'engine = "{cfg.engine}"')
    lines += ["", "[analysis]"]
    for f in fields(AnalysisOptions):
        lines.append(f"{f.name} = {_fmt(getattr(cfg.analysis, f.name))}")
    if cfg.sweep is not None:
        lines += ["", "[sweep]", f'axis = "{cfg.sweep.axis}"']
        lines.append("values = [" + ", ".join(_fmt(v) for v in cfg.sweep.values) + "]")
        lines.append(f"tie_c2_to_c3 = {_fmt(cfg.sweep.tie_c2_to_c3)}")
    if cfg.device:
        lines += ["", "[device]"]
        for k in _DEVICE_KEYS:
            if k in cfg.device:
                lines.append(f"{k} = {_fmt(cfg.device[k])}")
    if cfg.output is not None:
        lines += ["", "[output]", f"path = {_fmt(cfg.output)}"]
    return "\n".join(lines) + "\n"


def resolve_run_grid(cfg: ScenarioConfig) -> tuple[float, int]:
    """(t_max, samples) with defaults filled from the revival period.

    Default span is two periods; default sampling is 2048 points per
    period. The grid itself is endpoint-exclusive: t_k = k * t_max / N.
    """
    period = period_closed(cfg.g, cfg.delta) if cfg.g != 0 else None
    t_max = cfg.t_max
    if t_max is None:
        if period is None:
            raise ConfigError("[run] t_max is required when g = 0 (no revival period)")
        t_max = 2.0 * period
    samples = cfg.samples
    if samples is None:
        if period is None:
            samples = 2 * SAMPLES_PER_PERIOD
        else:
            samples = max(MIN_SAMPLES, round(SAMPLES_PER_PERIOD * t_max / period))
    return float(t_max), int(samples)
