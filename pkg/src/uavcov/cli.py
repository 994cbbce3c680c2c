"""Experiment runner.

Reads a flat key-value scenario file, dispatches the analytic evaluators
and their Monte Carlo counterparts over a sweep grid, and writes a CSV
result table plus a JSON run manifest. Ships named figure presets that
regenerate every standard result table from the default parameter set.

Config format: one `key = value` pair per line, `#` comments, dotted
section keys. Units are fixed per key: densities in per km^2, speeds in
km/h, transmit power in dBm, antenna gains and path-loss intercepts in dB,
lengths in metres. Values are converted to SI internally.

Exit codes: 0 full success, 2 when some grid points failed numerically
(their rows carry nan), 1 on config errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analytic import (
    StaticScenario,
    _radial_gl_nodes,
    coverage_static_comp_lb,
    coverage_static_comp_ub,
    coverage_static_gue,
    coverage_static_nearest,
)
from .geometry import ClusterGeometry, Environment, NetworkConfig, hex_cluster_index
from .mobility import (
    MobilityModel,
    coverage_mobile_comp,
    coverage_mobile_nearest,
    handover_prob_comp,
    handover_prob_nearest_ub,
    handover_rate_comp,
    handover_rate_nearest,
)
from .montecarlo import (
    _biased_cos_draws,
    _sir_comp_arrays,
    _sir_nearest_arrays,
    coverage_estimate,
    mc_handover_count,
    mc_mobile_coverage,
)

MODES = ("static-comp", "static-nearest", "gue", "mobile-comp", "mobile-nearest")

CSV_HEADER = "sweep,analytic_ub,analytic_lb,mc_value,mc_stderr"

# value converters, keyed by the tag in _KEYS
_CONVERTERS = {
    "raw": float,
    "db": lambda s: 10.0 ** (float(s) / 10.0),
    "dbm": lambda s: 10.0 ** ((float(s) - 30.0) / 10.0),
    "per_km2": lambda s: float(s) * 1e-6,
    "kmh": lambda s: float(s) / 3.6,
    "int": int,
    "str": str,
}

_KEYS = {
    "mode": "str",
    "network.lambda_b": "per_km2",
    "network.p_t": "dbm",
    "network.h_bs": "raw",
    "network.g_s": "db",
    "network.g_m": "db",
    "network.alpha_l": "raw",
    "network.alpha_n": "raw",
    "network.a_l": "db",
    "network.a_n": "db",
    "network.m_l": "int",
    "network.m_n": "int",
    "env.a": "raw",
    "env.eta": "raw",
    "env.c": "raw",
    "clusters.r_h": "raw",
    "scenario.h_d": "raw",
    "scenario.theta_db": "raw",
    "mobility.mu": "per_km2",
    "mobility.h1": "raw",
    "mobility.h2": "raw",
    "mobility.vbar": "kmh",
    "mobility.beta": "raw",
    "mobility.unit_time": "raw",
    "sweep.parameter": "str",
    "sweep.grid": "str",
    "mc.samples": "int",
    "mc.seed": "int",
}

# default parameter set; individual scenario files override single keys
DEFAULTS = {
    "mode": "static-comp",
    "network.lambda_b": "20",
    "network.p_t": "30",
    "network.h_bs": "30",
    "network.g_s": "-3.01",
    "network.g_m": "10",
    "network.alpha_l": "2.09",
    "network.alpha_n": "3.75",
    "network.a_l": "-41.1",
    "network.a_n": "-32.9",
    "network.m_l": "3",
    "network.m_n": "1",
    "env.a": "0.3",
    "env.eta": "300",
    "env.c": "20",
    "clusters.r_h": "190",
    "scenario.h_d": "120",
    "scenario.theta_db": "-5",
    "mobility.mu": "300",
    "mobility.h1": "105",
    "mobility.h2": "135",
    "mobility.vbar": "30",
    "mobility.beta": "0.5",
    "mobility.unit_time": "1",
    "sweep.parameter": "scenario.theta_db",
    "sweep.grid": "-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5, 10",
    "mc.samples": "20000",
    "mc.seed": "1",
}

_SWEEPABLE = {k for k, tag in _KEYS.items()
              if tag in ("raw", "db", "dbm", "per_km2", "kmh")}


@dataclass(frozen=True)
class Scenario:
    """Fully resolved run description."""

    mode: str
    network: NetworkConfig
    clusters: ClusterGeometry
    mobility: MobilityModel | None
    h_d: float
    theta_db: float
    sweep_parameter: str
    sweep_grid: tuple[float, ...]
    mc_samples: int
    mc_seed: int


@dataclass(frozen=True)
class ResultRow:
    sweep: float
    analytic_ub: float | None
    analytic_lb: float | None
    mc_value: float | None
    mc_stderr: float | None
    wall_ms: float
    error: str | None = None


class ConfigError(Exception):
    """Raised with a list of `file:line: message` diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


# ---------------------------------------------------------------------------
# config parsing and scenario construction
# ---------------------------------------------------------------------------

def parse_config_text(text: str, source: str = "<config>"):
    """Parse `key = value` lines into a raw string map on top of DEFAULTS.

    Returns (raw, provided, diagnostics): `provided` is the set of keys the
    file itself set, which drives the mobility-section presence check.
    """
    raw = dict(DEFAULTS)
    provided = set()
    diags = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            diags.append(f"{source}:{lineno}: expected 'key = value', got {body!r}")
            continue
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            diags.append(f"{source}:{lineno}: unknown key {key!r}")
            continue
        if key in provided:
            diags.append(f"{source}:{lineno}: duplicate key {key!r}")
            continue
        if not value:
            diags.append(f"{source}:{lineno}: empty value for {key!r}")
            continue
        raw[key] = value
        provided.add(key)
    return raw, provided, diags


def _convert(key: str, value: str):
    try:
        return _CONVERTERS[_KEYS[key]](value)
    except (ValueError, TypeError):
        raise ValueError(f"bad value {value!r} for key {key!r}")


def _parse_grid(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("sweep grid is empty")
    try:
        grid = tuple(float(p) for p in parts)
    except ValueError:
        raise ValueError(f"sweep grid has a non-numeric entry in {text!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sweep grid must be strictly increasing")
    return grid


def _needs_mobility(mode_or_kind: str) -> bool:
    return mode_or_kind.startswith(("mobile-", "rate-", "prob-"))


def _build_parts(raw: dict, kind: str):
    """Turn a raw string map into the typed model objects for one run kind."""
    env = Environment(a=_convert("env.a", raw["env.a"]),
                      eta=_convert("env.eta", raw["env.eta"]),
                      c=_convert("env.c", raw["env.c"]))
    network = NetworkConfig(
        lambda_b=_convert("network.lambda_b", raw["network.lambda_b"]),
        p_t=_convert("network.p_t", raw["network.p_t"]),
        h_bs=_convert("network.h_bs", raw["network.h_bs"]),
        g_s=_convert("network.g_s", raw["network.g_s"]),
        g_m=_convert("network.g_m", raw["network.g_m"]),
        alpha_l=_convert("network.alpha_l", raw["network.alpha_l"]),
        alpha_n=_convert("network.alpha_n", raw["network.alpha_n"]),
        a_l=_convert("network.a_l", raw["network.a_l"]),
        a_n=_convert("network.a_n", raw["network.a_n"]),
        m_l=_convert("network.m_l", raw["network.m_l"]),
        m_n=_convert("network.m_n", raw["network.m_n"]),
        env=env,
    )
    clusters = ClusterGeometry(_convert("clusters.r_h", raw["clusters.r_h"]))
    scen = StaticScenario(network, clusters,
                          _convert("scenario.h_d", raw["scenario.h_d"]),
                          _convert("scenario.theta_db", raw["scenario.theta_db"]))
    mobility = None
    if _needs_mobility(kind):
        mobility = MobilityModel(
            mu=_convert("mobility.mu", raw["mobility.mu"]),
            h1=_convert("mobility.h1", raw["mobility.h1"]),
            h2=_convert("mobility.h2", raw["mobility.h2"]),
            vbar=_convert("mobility.vbar", raw["mobility.vbar"]),
            beta=_convert("mobility.beta", raw["mobility.beta"]),
            unit_time=_convert("mobility.unit_time", raw["mobility.unit_time"]),
        )
    return network, clusters, scen, mobility


def build_scenario(raw: dict, provided: set, source: str = "<config>") -> Scenario:
    """Validate a raw config and produce a Scenario; raises ConfigError."""
    diags = []
    mode = raw["mode"]
    if mode not in MODES:
        diags.append(f"{source}: mode must be one of {', '.join(MODES)}, got {mode!r}")
        raise ConfigError(diags)
    if not mode.startswith("mobile-"):
        extra = sorted(k for k in provided if k.startswith("mobility."))
        if extra:
            diags.append(f"{source}: mobility keys {extra} only apply to "
                         "mobile-* modes")
    sweep_param = raw["sweep.parameter"]
    if sweep_param not in _SWEEPABLE:
        diags.append(f"{source}: sweep.parameter {sweep_param!r} is not a "
                     "sweepable numeric key")
    grid = ()
    try:
        grid = _parse_grid(raw["sweep.grid"])
    except ValueError as exc:
        diags.append(f"{source}: {exc}")
    network = clusters = scen = mobility = None
    try:
        network, clusters, scen, mobility = _build_parts(raw, mode)
    except ValueError as exc:
        diags.append(f"{source}: {exc}")
    samples = seed = 0
    try:
        samples = _convert("mc.samples", raw["mc.samples"])
        seed = _convert("mc.seed", raw["mc.seed"])
        if samples < 0:
            raise ValueError("mc.samples must be >= 0")
    except ValueError as exc:
        diags.append(f"{source}: {exc}")
    if diags:
        raise ConfigError(diags)
    return Scenario(mode=mode, network=network, clusters=clusters,
                    mobility=mobility, h_d=scen.h_d, theta_db=scen.theta_db,
                    sweep_parameter=sweep_param, sweep_grid=grid,
                    mc_samples=samples, mc_seed=seed)


def load_scenario_file(path: str) -> tuple[Scenario, dict, set]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError([f"{path}: {exc}"])
    raw, provided, diags = parse_config_text(text, source=path)
    if diags:
        raise ConfigError(diags)
    scenario = build_scenario(raw, provided, source=path)
    return scenario, raw, provided


# ---------------------------------------------------------------------------
# per-row computation (works for scenario modes and figure-only kinds)
# ---------------------------------------------------------------------------

def _mc_prob_nearest(network: NetworkConfig, model: MobilityModel, n: int,
                     gen: np.random.Generator):
    """Probability that the nearest BS identity changes over one horizon,
    measured against an explicit BS field."""
    field_r = 3000.0
    reach = model.vbar * model.unit_time
    hits = 0
    done = 0
    while done < n:
        m = min(4000, n - done)
        counts = gen.poisson(network.lambda_b * math.pi * field_r ** 2, m)
        total = int(counts.sum())
        rr = field_r * np.sqrt(gen.random(total))
        aa = gen.uniform(0.0, 2.0 * math.pi, total)
        px, py = rr * np.cos(aa), rr * np.sin(aa)
        offsets = np.concatenate(([0], np.cumsum(counts)))
        cphi = _biased_cos_draws(gen, m, model)
        psi = gen.uniform(0.0, 2.0 * math.pi, m)
        dx = reach * cphi * np.cos(psi)
        dy = reach * cphi * np.sin(psi)
        for j in range(m):
            sl = slice(offsets[j], offsets[j + 1])
            if offsets[j + 1] == offsets[j]:
                continue
            i0 = int(np.argmin(np.hypot(px[sl], py[sl])))
            i1 = int(np.argmin(np.hypot(px[sl] - dx[j], py[sl] - dy[j])))
            hits += int(i0 != i1)
        done += m
    p = hits / n
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _mc_prob_hex(clusters: ClusterGeometry, model: MobilityModel, n: int,
                 gen: np.random.Generator):
    """Probability that the hexagonal cluster index changes over one horizon;
    start positions uniform on one lattice period."""
    side = clusters.circumradius
    wx, wy = 3.0 * side, math.sqrt(3.0) * side
    reach = model.vbar * model.unit_time
    x0 = gen.uniform(0.0, wx, n)
    y0 = gen.uniform(0.0, wy, n)
    cphi = _biased_cos_draws(gen, n, model)
    psi = gen.uniform(0.0, 2.0 * math.pi, n)
    pts0 = np.stack([x0, y0], axis=1)
    pts1 = np.stack([x0 + reach * cphi * np.cos(psi),
                     y0 + reach * cphi * np.sin(psi)], axis=1)
    q0, r0 = hex_cluster_index(pts0, clusters.r_h)
    q1, r1 = hex_cluster_index(pts1, clusters.r_h)
    p = float(np.mean((q0 != q1) | (r0 != r1)))
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / n)


def compute_row(kind: str, raw: dict, sweep_value: float, samples: int,
                seed: int) -> ResultRow:
    """Evaluate one grid point. Numerical failures are recorded in-row."""
    t0 = time.perf_counter()
    ub = lb = mc_value = mc_stderr = None
    err = None
    try:
        network, clusters, scen, mobility = _build_parts(raw, kind)
        gen = np.random.default_rng(seed)
        ub_rng, lb_rng, mc_rng = gen.spawn(3)
        thr = scen.theta_lin

        if kind == "static-comp":
            ub = coverage_static_comp_ub(scen, rng=ub_rng)
            lb = coverage_static_comp_lb(scen, rng=lb_rng)
            if samples:
                d, _, intf, _ = _sir_comp_arrays(scen, samples, mc_rng)
                est = coverage_estimate(d, intf, thr)
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "static-nearest":
            ub = coverage_static_nearest(scen)
            if samples:
                d, intf = _sir_nearest_arrays(scen, samples, mc_rng)
                est = coverage_estimate(d, intf, thr)
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "gue":
            ub = coverage_static_gue(scen)
            if samples:
                d, intf = _sir_nearest_arrays(scen, samples, mc_rng,
                                              population="gue",
                                              interference="serving")
                est = coverage_estimate(d, intf, thr)
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "mobile-nearest":
            ub = coverage_mobile_nearest(scen, mobility)
            if samples:
                est = mc_mobile_coverage(scen, mobility, samples, mc_rng,
                                         association="nearest",
                                         chunk_size=min(2000, samples))
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "mobile-comp":
            ub = coverage_mobile_comp(scen, mobility, rng=ub_rng)
            if samples:
                est = mc_mobile_coverage(scen, mobility, samples, mc_rng,
                                         association="comp",
                                         chunk_size=min(2000, samples))
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "rate-nearest":
            ub = handover_rate_nearest(network.lambda_b, mobility)
            if samples:
                est = mc_handover_count(mobility, lambda_b=network.lambda_b,
                                        n_epochs=samples, rng=mc_rng)
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "rate-comp":
            ub = handover_rate_comp(mobility, clusters)
            if samples:
                est = mc_handover_count(mobility, clusters=clusters,
                                        n_epochs=samples, rng=mc_rng)
                mc_value, mc_stderr = est.value, est.stderr
        elif kind == "prob-nearest":
            r0s, w = _radial_gl_nodes(network.lambda_b, 96)
            ub = float(np.sum(
                w * handover_prob_nearest_ub(r0s, network.lambda_b, mobility)))
            if samples:
                mc_value, mc_stderr = _mc_prob_nearest(network, mobility,
                                                       samples, mc_rng)
        elif kind == "prob-comp":
            ub = handover_prob_comp(mobility, clusters)
            if samples:
                mc_value, mc_stderr = _mc_prob_hex(clusters, mobility,
                                                   samples, mc_rng)
        else:
            raise ValueError(f"unknown run kind {kind!r}")
    except Exception as exc:  # per-point failure: record, keep going
        err = f"{type(exc).__name__}: {exc}"
        ub = lb = mc_value = mc_stderr = float("nan")
    wall_ms = (time.perf_counter() - t0) * 1e3
    return ResultRow(sweep=sweep_value, analytic_ub=ub, analytic_lb=lb,
                     mc_value=mc_value, mc_stderr=mc_stderr,
                     wall_ms=wall_ms, error=err)


def _row_task(args):
    return compute_row(*args)


def _run_grid(kind: str, raw: dict, grid, samples: int, base_seed: int,
              workers: int) -> list[ResultRow]:
    """Evaluate all grid points; rows come back in grid order."""
    tasks = []
    for idx, value in enumerate(grid):
        point = dict(raw)
        point[raw["sweep.parameter"]] = repr(float(value))
        tasks.append((kind, point, float(value), samples, base_seed + idx))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row_task(t) for t in tasks]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.10g}"


def write_csv(path: str, rows: list[ResultRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(",".join([_fmt(row.sweep), _fmt(row.analytic_ub),
                               _fmt(row.analytic_lb), _fmt(row.mc_value),
                               _fmt(row.mc_stderr)]) + "\n")


def config_hash(raw: dict) -> str:
    canon = "\n".join(f"{k}={raw[k]}" for k in sorted(raw))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def write_manifest(path: str, *, seed: int, samples: int, chash: str,
                   row_records: list[dict], total_wall_ms: float,
                   extra: dict | None = None) -> None:
    doc = {
        "version": __version__,
        "seed": seed,
        "samples": samples,
        "config_sha256": chash,
        "total_wall_ms": total_wall_ms,
        "rows": row_records,
    }
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _row_records(series: str, rows: list[ResultRow]) -> list[dict]:
    out = []
    for row in rows:
        rec = {"series": series, "sweep": row.sweep, "wall_ms": row.wall_ms}
        if row.error:
            rec["error"] = row.error
        out.append(rec)
    return out


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesSpec:
    name: str
    kind: str
    overrides: tuple  # ((key, value), ...)


@dataclass(frozen=True)
class FigurePreset:
    figure_id: str
    description: str
    sweep_parameter: str
    grid: str
    series: tuple
    samples: int = 20000


_MOBILE_BASE = (("mobility.mu", "300"), ("mobility.h1", "105"),
                ("mobility.h2", "135"), ("mobility.vbar", "30"),
                ("mobility.beta", "0.5"))

PRESETS = {p.figure_id: p for p in [
    FigurePreset(
        "fig2a", "coverage vs SIR threshold: cluster bounds, nearest, ground user",
        "scenario.theta_db", "-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5, 10",
        (SeriesSpec("comp", "static-comp", ()),
         SeriesSpec("nearest", "static-nearest", ()),
         SeriesSpec("gue", "gue", ()))),
    FigurePreset(
        "fig2b", "coverage vs cluster radius at the default threshold",
        "clusters.r_h", "100, 150, 190, 250, 300, 400",
        (SeriesSpec("comp", "static-comp", ()),
         SeriesSpec("nearest", "static-nearest", ()))),
    FigurePreset(
        "fig3a", "handover probability vs BS density, nearest association",
        "network.lambda_b", "5, 10, 20, 30, 40, 50",
        (SeriesSpec("nearest", "prob-nearest", _MOBILE_BASE),)),
    FigurePreset(
        "fig3b", "handover probability vs cluster radius",
        "clusters.r_h", "100, 150, 190, 250, 300, 400",
        (SeriesSpec("comp", "prob-comp", _MOBILE_BASE),)),
    FigurePreset(
        "fig4a", "coverage vs terminal altitude at the default threshold",
        "scenario.h_d", "60, 80, 100, 120, 150, 200, 250, 300",
        (SeriesSpec("comp", "static-comp", ()),
         SeriesSpec("nearest", "static-nearest", ()))),
    FigurePreset(
        "fig5a", "handover rate vs BS density for three altitude spreads",
        "network.lambda_b", "5, 10, 20, 30, 40, 50",
        (SeriesSpec("hbar0", "rate-nearest",
                    _MOBILE_BASE[:1] + (("mobility.h1", "120"),
                                        ("mobility.h2", "120"))),
         SeriesSpec("hbar30", "rate-nearest",
                    _MOBILE_BASE[:1] + (("mobility.h1", "105"),
                                        ("mobility.h2", "135"))),
         SeriesSpec("hbar50", "rate-nearest",
                    _MOBILE_BASE[:1] + (("mobility.h1", "95"),
                                        ("mobility.h2", "145"))))),
    FigurePreset(
        "fig5c", "mobile coverage vs speed, nearest association",
        "mobility.vbar", "10, 30, 60, 90, 120",
        (SeriesSpec("mobile-nearest", "mobile-nearest", _MOBILE_BASE),),
        samples=40000),
    FigurePreset(
        "fig6a", "handover rate vs cluster radius",
        "clusters.r_h", "100, 150, 190, 250, 300, 400",
        (SeriesSpec("comp", "rate-comp", _MOBILE_BASE),)),
    FigurePreset(
        "fig6c", "mobile coverage vs speed, cluster association",
        "mobility.vbar", "10, 30, 60, 90, 120",
        (SeriesSpec("mobile-comp", "mobile-comp", _MOBILE_BASE),),
        samples=40000),
]}


def _preset_raw(preset: FigurePreset, series: SeriesSpec) -> dict:
    raw = dict(DEFAULTS)
    mode = series.kind if series.kind in MODES else (
        "mobile-comp" if series.kind.endswith("comp") else "mobile-nearest")
    raw["mode"] = mode
    raw["sweep.parameter"] = preset.sweep_parameter
    raw["sweep.grid"] = preset.grid
    raw["mc.samples"] = str(preset.samples)
    for key, value in series.overrides:
        raw[key] = value
    return raw


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _apply_flag_overrides(raw: dict, args) -> None:
    if args.seed is not None:
        raw["mc.seed"] = str(args.seed)
    if args.samples is not None:
        raw["mc.samples"] = str(args.samples)


def _cmd_run(args) -> int:
    try:
        scenario, raw, provided = load_scenario_file(args.scenario)
        _apply_flag_overrides(raw, args)
        scenario = build_scenario(raw, provided, source=args.scenario)
    except ConfigError as exc:
        for diag in exc.diagnostics:
            print(diag, file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    rows = _run_grid(scenario.mode, raw, scenario.sweep_grid,
                     scenario.mc_samples, scenario.mc_seed, args.workers)
    total_ms = (time.perf_counter() - t0) * 1e3
    write_csv(args.out, rows)
    manifest = os.path.splitext(args.out)[0] + "_manifest.json"
    write_manifest(manifest, seed=scenario.mc_seed,
                   samples=scenario.mc_samples, chash=config_hash(raw),
                   row_records=_row_records(scenario.mode, rows),
                   total_wall_ms=total_ms,
                   extra={"mode": scenario.mode,
                          "sweep_parameter": scenario.sweep_parameter})
    failures = [r for r in rows if r.error]
    for row in failures:
        print(f"point {row.sweep:g} failed: {row.error}", file=sys.stderr)
    print(f"wrote {args.out} ({len(rows)} rows) and {manifest}")
    return 2 if failures else 0


def _cmd_validate(args) -> int:
    source = args.scenario
    try:
        if os.path.exists(source):
            scenario, raw, provided = load_scenario_file(source)
        elif source in PRESETS:
            preset = PRESETS[source]
            raw = _preset_raw(preset, preset.series[0])
            scenario = build_scenario(raw, set(), source=source)
        else:
            raise ConfigError([f"{source}: no such file or preset"])
    except ConfigError as exc:
        for diag in exc.diagnostics:
            print(f"error: {diag}")
        print("invalid")
        return 1
    n_rows = len(scenario.sweep_grid)
    print(f"mode: {scenario.mode}")
    print(f"sweep: {scenario.sweep_parameter} over {n_rows} points")
    print(f"ok: network parameters valid "
          f"(lambda_b = {scenario.network.lambda_b * 1e6:g} per km^2)")
    print(f"ok: cluster geometry valid (r_c = {scenario.clusters.r_c:.2f} m)")
    print("ok: sweep grid non-empty and strictly increasing")
    if scenario.mobility is not None:
        print(f"ok: mobility model valid (hbar = {scenario.mobility.hbar:g} m)")
    else:
        print("ok: mobility section absent (static mode)")
    per_sample = {"static-comp": 5e-5, "static-nearest": 2e-5, "gue": 2e-5,
                  "mobile-nearest": 3e-4, "mobile-comp": 1e-4}
    base = {"static-comp": 3.0, "mobile-comp": 15.0}.get(scenario.mode, 0.2)
    est = n_rows * (base + scenario.mc_samples
                    * per_sample.get(scenario.mode, 1e-4))
    print(f"dry run: {n_rows} rows x {scenario.mc_samples} samples, "
          f"roughly {est:.0f} s on one worker")
    print("valid")
    return 0


def _cmd_figure(args) -> int:
    if args.figure_id not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        print(f"unknown figure id {args.figure_id!r}; known: {known}",
              file=sys.stderr)
        return 1
    preset = PRESETS[args.figure_id]
    os.makedirs(args.out, exist_ok=True)
    t0 = time.perf_counter()
    records = []
    any_failed = False
    hash_parts = {}
    base_seed = args.seed if args.seed is not None else 1
    for series_idx, series in enumerate(preset.series):
        raw = _preset_raw(preset, series)
        if args.samples is not None:
            raw["mc.samples"] = str(args.samples)
        raw["mc.seed"] = str(base_seed + 1000 * series_idx)
        scenario = build_scenario(raw, set(), source=preset.figure_id)
        rows = _run_grid(series.kind, raw, scenario.sweep_grid,
                         scenario.mc_samples, scenario.mc_seed, args.workers)
        csv_path = os.path.join(args.out,
                                f"{preset.figure_id}_{series.name}.csv")
        write_csv(csv_path, rows)
        records.extend(_row_records(series.name, rows))
        any_failed = any_failed or any(r.error for r in rows)
        for key in sorted(raw):
            hash_parts[f"{series.name}.{key}"] = raw[key]
        print(f"wrote {csv_path}")
    total_ms = (time.perf_counter() - t0) * 1e3
    manifest = os.path.join(args.out, f"{preset.figure_id}_manifest.json")
    write_manifest(manifest, seed=base_seed,
                   samples=args.samples if args.samples is not None
                   else preset.samples,
                   chash=config_hash(hash_parts), row_records=records,
                   total_wall_ms=total_ms,
                   extra={"figure": preset.figure_id,
                          "description": preset.description})
    print(f"wrote {manifest}")
    return 2 if any_failed else 0


def _cmd_list_presets(_args) -> int:
    width = max(len(p) for p in PRESETS)
    for figure_id in sorted(PRESETS):
        preset = PRESETS[figure_id]
        names = ", ".join(s.name for s in preset.series)
        print(f"{figure_id:<{width}}  {preset.description} [{names}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavcov",
        description="coverage and handover sweeps for aerial terminals")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="override the base RNG seed")
    common.add_argument("--samples", type=int, default=None,
                        help="override MC sample count per grid point")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes for grid points")

    p_run = sub.add_parser("run", parents=[common],
                           help="run a scenario file over its sweep grid")
    p_run.add_argument("scenario", help="scenario config file")
    p_run.add_argument("--out", default="results.csv", help="output CSV path")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate",
                           help="check a scenario file (or preset id)")
    p_val.add_argument("scenario", help="scenario config file or preset id")
    p_val.set_defaults(func=_cmd_validate)

    p_fig = sub.add_parser("figure", parents=[common],
                           help="run a named figure preset")
    p_fig.add_argument("figure_id", help="preset id, see list-presets")
    p_fig.add_argument("--out", default="figures",
                       help="output directory for CSVs and manifest")
    p_fig.set_defaults(func=_cmd_figure)

    p_list = sub.add_parser("list-presets", help="list figure presets")
    p_list.set_defaults(func=_cmd_list_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
