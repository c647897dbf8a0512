"""Command-line scenario runner.

Subcommands: ``simulate`` (correlation curves as CSV), ``analyze``
(feature report as JSON), ``sweep`` (one simulate+analyze per axis
value, long-format CSV with summary comments), ``device`` (geometry to
coupling-constant report). Output is deterministic for a fixed config
and version: floats are printed with 17 significant digits and rows are
ordered by (axis value, time).

Exit codes: 0 success, 2 configuration error, 3 physicality error,
4 numerical error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__
from .analysis import (
    TimeSeries,
    detect_death_intervals,
    detect_plateaus,
    period_theory,
    period_empirical,
    plateau_death_overlap,
    sync_classify,
)
from .config import (
    ENGINES_CLI,
    ScenarioConfig,
    MIN_SAMPLES,
    load_config,
    parse_config,
    resolve_run_grid,
    serialize_config,
)
from .correlations import sample_from_state, x_series
from .device import DEFAULT_GEOMETRY, DeviceGeometry, coupling_g, current_amplitude, regime_check, switch_field
from .dynamics import ModelParams, chi, closed_abs_c0, evolve_full_series
from .errors import (
    ConfigError,
    NoPeriodError,
    NumericalError,
    PhysicalityError,
    SpinBusError,
)
from .qstate import XStateParams, coherent_amplitudes, coherent_state_fixed, make_x_state

AUTO_GUARD_LEVELS = 20
COLUMNS = ("C", "D", "I", "CC", "abs_c0", "gamma")


def _g17(x: float) -> str:
    return "%.17g" % float(x)


def _engines_of(engine: str) -> tuple[str, ...]:
    return ("closed", "effective", "jc") if engine == "all" else (engine,)


def _resolve_n_max(cfg: ScenarioConfig) -> tuple[int, bool]:
    """(n_max, was_auto); auto = smallest tail <= 1e-12 plus guard levels."""
    if cfg.n_max is not None:
        return cfg.n_max, False
    base = coherent_amplitudes(cfg.alpha).n_max
    return base + AUTO_GUARD_LEVELS, True


def _engine_curves(cfg: ScenarioConfig, times: np.ndarray):
    """Per-engine correlation curves.

    Returns (curves, meta): curves maps engine name to a dict of arrays
    keyed by COLUMNS; meta records the resolved n_max and the worst
    X-structure defect of the Jaynes-Cummings reduced states.
    """
    p = XStateParams(cfg.c1, cfg.c2, cfg.c3)
    rho0 = make_x_state(p)
    mp = ModelParams.from_scaled(cfg.g, cfg.delta, cfg.omega)
    engines = _engines_of(cfg.engine)
    curves: dict[str, dict] = {}
    meta: dict = {"n_max": None, "jc_max_x_defect": None}
    for eng in engines:
        if eng == "closed":
            absc0 = closed_abs_c0(p, cfg.alpha, mp, times)
            d = x_series(cfg.c3, abs(cfg.c1 + cfg.c2), absc0)
            curves[eng] = {
                "C": d["C"], "D": d["D"], "I": d["I"],
                "CC": d["CC"], "abs_c0": absc0, "gamma": d["gamma"],
            }
            continue
        n_max, _ = _resolve_n_max(cfg)
        meta["n_max"] = n_max
        cs = coherent_state_fixed(cfg.alpha, n_max)
        rhos = evolve_full_series(rho0, cs, mp, times, engine=eng)
        cols = {k: np.empty(len(times)) for k in COLUMNS}
        worst = 0.0
        for i, t in enumerate(times):
            s, defect = sample_from_state(t, rhos[i])
            worst = max(worst, defect)
            cols["C"][i] = s.concurrence
            cols["D"][i] = s.discord
            cols["I"][i] = s.mutual_info
            cols["CC"][i] = s.classical_corr
            cols["abs_c0"][i] = s.abs_c0
            cols["gamma"][i] = s.gamma
        curves[eng] = cols
        if eng == "jc":
            meta["jc_max_x_defect"] = worst
    return curves, meta


def _comment_block(cfg: ScenarioConfig, command: str, extra: list[str]) -> list[str]:
    lines = [f"# spinbus {__version__} {command}"]
    lines.extend("# " + e for e in extra)
    lines.append("# config:")
    lines.extend(
        "#   " + ln if ln else "#"
        for ln in serialize_config(cfg).rstrip("\n").split("\n")
    )
    return lines


def _times(cfg: ScenarioConfig) -> tuple[np.ndarray, float, int]:
    t_max, samples = resolve_run_grid(cfg)
    # endpoint-exclusive grid: k * t_max / N, so t + period lands on a grid
    # point when t_max is a whole number of periods
    return np.arange(samples) * (t_max / samples), t_max, samples


def _simulate_lines(cfg: ScenarioConfig, seed=None) -> list[str]:
    times, t_max, samples = _times(cfg)
    curves, meta = _engine_curves(cfg, times)
    engines = _engines_of(cfg.engine)
    extra = [
        f"engines: {','.join(engines)}",
        f"t_max = {_g17(t_max)}, samples = {samples}, dt = {_g17(t_max / samples)}",
    ]
    if meta["n_max"] is not None:
        how = "explicit" if cfg.n_max is not None else "auto: tail <= 1e-12 plus 20 guard levels"
        extra.append(f"n_max = {meta['n_max']} ({how})")
    if meta["jc_max_x_defect"] is not None:
        extra.append(f"jc_max_x_defect = {_g17(meta['jc_max_x_defect'])}")
    if seed is not None:
        extra.append(f"seed = {seed}")
    lines = _comment_block(cfg, "simulate", extra)
    header = ["t"]
    for eng in engines:
        header.extend(f"{c}_{eng}" for c in COLUMNS)
    lines.append(",".join(header))
    for i, t in enumerate(times):
        row = [_g17(t)]
        for eng in engines:
            row.extend(_g17(curves[eng][c][i]) for c in COLUMNS)
        lines.append(",".join(row))
    return lines


def _analysis_payload(cfg: ScenarioConfig, times, curves) -> dict:
    an = cfg.analysis
    eng = _engines_of(cfg.engine)[0]
    C = TimeSeries(times, curves[eng]["C"])
    D = TimeSeries(times, curves[eng]["D"])
    payload: dict = {"engine": eng, "period_theory": period_theory(cfg.g, cfg.delta)}
    if an.period:
        try:
            payload["period_empirical"] = period_empirical(C, min_corr=an.period_min_corr)
        except NoPeriodError:
            try:
                absc0 = TimeSeries(times, curves[eng]["abs_c0"])
                payload["period_empirical"] = period_empirical(absc0, min_corr=an.period_min_corr)
            except NoPeriodError:
                payload["period_empirical"] = None
    deaths = detect_death_intervals(C, eps=an.death_eps) if an.deaths else []
    plateaus = (
        detect_plateaus(
            D,
            window=an.plateau_window,
            slope_eps=an.plateau_slope_eps,
            level_eps=an.plateau_level_eps,
        )
        if an.plateaus
        else []
    )
    if an.deaths:
        payload["death_intervals_C"] = [
            {"t_start": d.t_start, "t_end": d.t_end, "length": d.length} for d in deaths
        ]
        payload["death_intervals_D"] = [
            {"t_start": d.t_start, "t_end": d.t_end, "length": d.length}
            for d in detect_death_intervals(D, eps=an.death_eps)
        ]
    if an.plateaus:
        payload["plateaus_D"] = [
            {"t_start": p.t_start, "t_end": p.t_end, "level": p.level, "length": p.length}
            for p in plateaus
        ]
    if an.deaths and an.plateaus:
        payload["plateau_in_death_lifetime"] = plateau_death_overlap(plateaus, deaths)
    if an.sync:
        res = sync_classify(C, D, period=payload["period_theory"], threshold=an.sync_threshold)
        payload["sync"] = {"label": res.label, "r": res.r, "degenerate": res.degenerate}
    return payload


def _analyze_payload_for(cfg: ScenarioConfig) -> dict:
    times, t_max, samples = _times(cfg)
    curves, meta = _engine_curves(cfg, times)
    payload = {
        "version": __version__,
        "t_max": t_max,
        "samples": samples,
        "n_max": meta["n_max"],
    }
    payload.update(_analysis_payload(cfg, times, curves))
    return payload


def _sweep_point(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    sw = cfg.sweep
    changes: dict = {"sweep": None}
    if sw.axis == "c3":
        changes["c3"] = value
        if sw.tie_c2_to_c3:
            changes["c2"] = -value
    elif sw.axis == "alpha":
        changes["alpha"] = complex(value, 0.0)
    elif sw.axis == "delta":
        changes["delta"] = value
    else:
        changes["g"] = value
    return dataclasses.replace(cfg, **changes)


def _sweep_lines(cfg: ScenarioConfig, seed=None) -> tuple[list[str], int]:
    if cfg.sweep is None:
        raise ConfigError("sweep requires a [sweep] section with axis and values")
    axis = cfg.sweep.axis
    extra = [f"axis: {axis}", f"values: {','.join(_g17(v) for v in cfg.sweep.values)}"]
    if seed is not None:
        extra.append(f"seed = {seed}")
    lines = _comment_block(cfg, "sweep", extra)
    engines = _engines_of(cfg.engine)
    header = [axis, "t"]
    for eng in engines:
        header.extend(f"{c}_{eng}" for c in COLUMNS)
    lines.append(",".join(header))
    summaries: list[str] = []
    worst_code = 0
    for value in cfg.sweep.values:
        try:
            point = _sweep_point(cfg, value)
            times, t_max, samples = _times(point)
            curves, meta = _engine_curves(point, times)
            for i, t in enumerate(times):
                row = [_g17(value), _g17(t)]
                for eng in engines:
                    row.extend(_g17(curves[eng][c][i]) for c in COLUMNS)
                lines.append(",".join(row))
            payload = {"t_max": t_max, "samples": samples, "n_max": meta["n_max"]}
            payload.update(_analysis_payload(point, times, curves))
            summaries.append(f"# summary {axis}={_g17(value)}: {json.dumps(payload)}")
        except SpinBusError as e:
            code = _exit_code_for(e)
            worst_code = max(worst_code, code)
            summaries.append(f"# error {axis}={_g17(value)}: {e} (exit code {code})")
            print(f"sweep point {axis}={value} failed: {e}", file=sys.stderr)
    lines.extend(summaries)
    return lines, worst_code


def _device_lines(cfg: ScenarioConfig) -> list[str]:
    kw = {k: getattr(DEFAULT_GEOMETRY, k) for k in ("r", "L", "l", "omega_r", "delta_BN_z", "dB_z", "g_B")}
    kw.update(cfg.device)
    geo = DeviceGeometry(**kw)
    I = current_amplitude(geo)
    g_si = coupling_g(geo)
    mp = ModelParams.from_scaled(cfg.g, cfg.delta, cfg.omega)
    rep = regime_check(mp)
    lines = _comment_block(
        cfg, "device", ["geometry in SI units; scaled ratios from [model]"]
    )
    for k in ("r", "L", "l", "omega_r", "delta_BN_z", "dB_z", "g_B"):
        lines.append(f"{k} = {_g17(getattr(geo, k))}")
    lines.append(f"I_amplitude_A = {_g17(I)}")
    lines.append(f"coupling_g_rad_per_s = {_g17(g_si)}")
    lines.append(f"switch_field_T = {_g17(switch_field(geo, I))}")
    lines.append(f"chi_scaled = {_g17(chi(mp.g, mp.delta1, mp.delta2))}")
    lines.append(f"dispersive_ratio_1 = {_g17(rep.dispersive_ratios[0])}")
    lines.append(f"dispersive_ratio_2 = {_g17(rep.dispersive_ratios[1])}")
    lines.append(f"rwa_ratio_1 = {_g17(rep.rwa_ratios[0])}")
    lines.append(f"rwa_ratio_2 = {_g17(rep.rwa_ratios[1])}")
    lines.append(f"dispersive_ok = {str(rep.dispersive_ok).lower()}")
    lines.append(f"rwa_ok = {str(rep.rwa_ok).lower()}")
    return lines


def _exit_code_for(e: SpinBusError) -> int:
    if isinstance(e, ConfigError):
        return 2
    if isinstance(e, PhysicalityError):
        return 3
    if isinstance(e, NumericalError):
        return 4
    return 4


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else parse_config("")
    if getattr(args, "engine", None):
        if args.engine not in ENGINES_CLI:
            raise ConfigError(f"--engine {args.engine!r} is not one of {', '.join(ENGINES_CLI)}")
        cfg = dataclasses.replace(cfg, engine=args.engine)
    if getattr(args, "samples", None) is not None:
        if args.samples < MIN_SAMPLES:
            raise ConfigError(f"--samples must be >= {MIN_SAMPLES}")
        cfg = dataclasses.replace(cfg, samples=args.samples)
    if args.output:
        cfg = dataclasses.replace(cfg, output=args.output)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spinbus",
        description="Correlation dynamics of two resonator-coupled spin qubits.",
    )
    ap.add_argument("--version", action="version", version=f"spinbus {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("simulate", "emit correlation curves as CSV"),
        ("analyze", "emit death/plateau/period/sync report as JSON"),
        ("sweep", "run one scenario per axis value, long-format CSV"),
        ("device", "compute coupling constants from geometry"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="TOML scenario file (defaults apply if omitted)")
        p.add_argument("--output", help="output path (default stdout)")
        p.add_argument("--seed", type=int, help="seed echoed into the header; the pipeline itself is deterministic")
        if name in ("simulate", "analyze", "sweep"):
            p.add_argument("--engine", help="closed | effective | jc | all")
            p.add_argument("--samples", type=int, help="number of time samples (>= 16)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "simulate":
            text = "\n".join(_simulate_lines(cfg, seed=args.seed)) + "\n"
            code = 0
        elif args.command == "analyze":
            payload = _analyze_payload_for(cfg)
            if args.seed is not None:
                payload["seed"] = args.seed
            text = json.dumps(payload, indent=2) + "\n"
            code = 0
        elif args.command == "sweep":
            lines, code = _sweep_lines(cfg, seed=args.seed)
            text = "\n".join(lines) + "\n"
        else:
            text = "\n".join(_device_lines(cfg)) + "\n"
            code = 0
        _write(text, cfg.output)
        return code
    except SpinBusError as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
