"""Scenario-driven command line.

``dhs <kind> --config path [--outdir path] [--seed n] [--overwrite]
[--workers k]`` parses a TOML (or JSON) config, dispatches one
experiment, and persists everything under the output directory:
manifest.json (always, success or failure), energies.csv, field
snapshots, and the experiment's own CSV/JSON artifacts.

Exit codes: 0 success, 1 usage error, 2 numerical sentinel (blow-up,
non-contraction, flow monotonicity loss).  Sentinels still write their
partial outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
import tomli

from .energy import EnergyReport
from .envelope import c_geq, convergence_study, sharp_envelope
from .grid import Grid, SpectralField, derivative, load_field, make_field, norm
from .runio import OutdirExistsError, RunWriter, field_hash
from .schemes import audit_ratios, difference_experiment, low_freq_flow, picard_solve
from .stepper import SolverConfig, evolve, evolve_linearized, nonlinearity

KINDS = (
    "simulate",
    "conserve",
    "picard",
    "linearized",
    "difference",
    "envelope",
    "flow",
    "audit",
)

PRESETS = ("zero", "sin", "two_mode", "gaussian_bump", "random_decay(sigma)")


class UsageError(Exception):
    """Bad config, bad preset, bad flags: exit code 1."""


@dataclass
class Scenario:
    kind: str
    config: dict
    outdir: Path
    seed: int = 0
    overwrite: bool = False
    workers: int = 1


def load_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    data = path.read_bytes()
    if path.suffix == ".json":
        return json.loads(data)
    try:
        return tomli.loads(data.decode())
    except tomli.TOMLDecodeError:
        try:
            return json.loads(data)  # JSON mirror accepted regardless of suffix
        except json.JSONDecodeError as e:
            raise UsageError(f"config is neither TOML nor JSON: {e}") from None


def preset_data(name: str, grid: Grid, seed: int = 0) -> SpectralField:
    """Deterministic initial-data presets; seeded where randomized."""
    name = name.strip()
    lam = grid.length
    if name == "zero":
        return make_field(grid, lambda x: 0.0 * x)
    if name == "sin":
        return make_field(grid, lambda x: np.sin(2.0 * np.pi * x / lam))
    if name == "two_mode":
        return make_field(
            grid,
            lambda x: np.sin(2.0 * np.pi * x / lam) + 0.5 * np.cos(4.0 * np.pi * x / lam),
        )
    if name == "gaussian_bump":
        w = lam / 18.0
        return make_field(grid, lambda x: np.exp(-0.5 * ((x - lam / 2.0) / w) ** 2))
    m = re.fullmatch(r"random_decay\(([-+0-9.eE]+)\)", name)
    if m:
        sigma = float(m.group(1))
        rng = np.random.default_rng(seed)
        j = grid.mode_numbers()
        c = np.zeros(grid.n, dtype=np.complex128)
        for k in range(1, grid.n // 3 + 1):
            xi = abs(float(grid.xi[j == k][0]))
            band = math.log2(xi) if xi >= 1.0 else 0.0
            mag = 2.0 ** (-sigma * band)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            a = mag * complex(math.cos(phase), math.sin(phase))
            c[j == k] = a * grid.n
            c[j == -k] = np.conj(a) * grid.n
        return SpectralField.from_coeffs(grid, c)
    raise UsageError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")


def _section(config: dict, name: str) -> dict:
    sec = config.get(name, {})
    if not isinstance(sec, dict):
        raise UsageError(f"config section [{name}] must be a table")
    return sec


def _require(sec: dict, secname: str, key: str):
    if key not in sec:
        raise UsageError(f"config is missing {secname}.{key}")
    return sec[key]


def _build_grid(config: dict) -> Grid:
    sec = _section(config, "grid")
    try:
        return Grid(int(_require(sec, "grid", "n")), float(_require(sec, "grid", "length")))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _solver_config(config: dict, grid: Grid, **overrides) -> SolverConfig:
    sec = _section(config, "run")
    params = dict(
        grid=grid,
        dt=float(_require(sec, "run", "dt")),
        t_end=float(_require(sec, "run", "t_end")),
        s=float(sec.get("s", 0.75)),
        integrator=str(sec.get("integrator", "etdrk4")),
        monitor_stride=int(sec.get("monitor_stride", 1)),
        nonlinear=bool(sec.get("nonlinear", True)),
    )
    params.update(overrides)
    try:
        return SolverConfig(**params)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _build_data(scenario: Scenario, grid: Grid) -> tuple[SpectralField, str]:
    sec = _section(scenario.config, "data")
    amplitude = float(sec.get("amplitude", 1.0))
    if "file" in sec:
        u0 = load_field(Path(sec["file"]))
        if u0.grid != grid:
            raise UsageError("data file grid does not match config grid")
        desc = f"file:{sec['file']}"
    else:
        name = str(sec.get("preset", "zero"))
        u0 = preset_data(name, grid, scenario.seed)
        desc = f"preset:{name}"
    if amplitude != 1.0:
        u0 = amplitude * u0
        desc += f"*{amplitude:g}"
    return u0, desc


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def _write_series(w: RunWriter, series, snapshots: bool = True) -> None:
    w.energies_csv(series.reports)
    if snapshots:
        for i, (t, f) in enumerate(zip(series.times, series.fields)):
            w.save_snapshot(f, t, i)


def _run_simulate(scenario, w, grid, u0, conserve: bool):
    cfg = _solver_config(scenario.config, grid)
    series = evolve(u0, cfg)
    _write_series(w, series)
    results = {"solver_status": series.status, "message": series.message}
    if conserve and len(series.reports) >= 2:
        rep = series.reports
        e10 = rep[0].e1
        e2g0 = rep[0].e2_gauge
        e2u = [r.e2_gauge + r.beta * r.e1 for r in rep]
        ts = np.array([r.t for r in rep])
        slope = float(np.polyfit(ts, np.array(e2u), 1)[0]) if len(rep) > 2 else 0.0
        results["conservation"] = {
            "e1_rel_drift": max(abs(r.e1 - e10) / e10 for r in rep) if e10 > 0 else 0.0,
            "e2_gauge_rel_drift": (
                max(abs(r.e2_gauge - e2g0) for r in rep) / abs(e2g0) if e2g0 != 0 else 0.0
            ),
            "e2_uncorrected_rel_drift": (
                max(abs(v - e2u[0]) for v in e2u) / abs(e2u[0]) if e2u[0] != 0 else 0.0
            ),
            "e2_uncorrected_slope": slope,
            "beta_rate_times_e1": e10**2 / (2.0 * grid.length),
        }
    return (2 if series.status != "ok" else 0), results


def _run_picard(scenario, w, grid, u0):
    sec = _section(scenario.config, "picard")
    tol = float(sec.get("tol", 1e-9))
    max_iter = int(sec.get("max_iter", 16))
    max_halvings = int(sec.get("max_halvings", 4))
    base = _solver_config(scenario.config, grid)
    horizon = base.t_end
    attempts = 0
    rep = None
    while True:
        attempts += 1
        cfg = _solver_config(scenario.config, grid, t_end=horizon)
        _, rep = picard_solve(u0, cfg, tol=tol, max_iter=max_iter)
        if rep.converged:
            break
        if attempts > max_halvings or horizon / 2.0 < 2.0 * base.dt:
            break
        horizon /= 2.0
    w.add_text("iteration_report.json", json.dumps(rep.to_dict(), indent=2) + "\n")
    results = {
        "attempts": attempts,
        "horizon": rep.horizon,
        "converged": rep.converged,
        "non_contractive": rep.non_contractive,
    }
    return (0 if rep.converged else 2), results


def _run_linearized(scenario, w, grid, u0):
    sec = _section(scenario.config, "linearized")
    bg_stride = int(sec.get("background_stride", 1))
    bg = evolve(u0, _solver_config(scenario.config, grid, monitor_stride=bg_stride))
    if bg.status != "ok":
        _write_series(w, bg, snapshots=False)
        return 2, {"solver_status": bg.status, "message": bg.message}
    w.energies_csv(bg.reports)

    w0_spec = str(sec.get("w0", "ut0"))
    if w0_spec == "ut0":
        w0 = nonlinearity(u0) - derivative(u0, 3)
    else:
        w0 = preset_data(w0_spec, grid, scenario.seed)
    cfg = _solver_config(scenario.config, grid)
    ws = evolve_linearized(w0, bg, cfg)

    track = w0_spec == "ut0"
    delta = bg_stride * cfg.dt * 4
    rows = []
    max_fd = 0.0
    for t, f in zip(ws.times, ws.fields):
        fd_err = ""
        if track and t - delta >= 0.0 and t + delta <= bg.t_final + 1e-12:
            fd = (1.0 / (2.0 * delta)) * (bg.at(t + delta) - bg.at(t - delta))
            err = norm(f - fd, "hdot", 1.0)
            max_fd = max(max_fd, err)
            fd_err = _fmt(err)
        rows.append(
            f"{_fmt(t)},{_fmt(norm(f, 'linf'))},{_fmt(norm(f, 'hdot', 1.0))},{fd_err}"
        )
    w.add_csv("linearized.csv", "t,w_linf,w_h1,fd_err", rows)
    results = {"solver_status": ws.status, "w0": w0_spec}
    if track:
        results["max_fd_tracking_err_h1"] = max_fd
        results["fd_delta"] = delta
    return (2 if ws.status != "ok" else 0), results


def _run_difference(scenario, w, grid, u0):
    sec = _section(scenario.config, "difference")
    epsilons = [float(e) for e in sec.get("epsilons", [1e-2, 1e-3, 1e-4])]
    profile = preset_data(str(sec.get("profile", "gaussian_bump")), grid, scenario.seed)
    cfg = _solver_config(scenario.config, grid)
    rows, ratios = [], []
    for eps in epsilons:
        r = difference_experiment(u0, u0 + eps * profile, cfg)
        ratios.append(r)
        rows.append(f"{_fmt(eps)},{_fmt(r)}")
    w.add_csv("difference.csv", "eps,ratio", rows)
    stab = abs(ratios[-1] - ratios[-2]) / ratios[-1] if len(ratios) >= 2 and ratios[-1] > 0 else 0.0
    return 0, {"ratios": ratios, "stabilization": stab}


def _run_envelope(scenario, w, grid, u0):
    sec = _section(scenario.config, "envelope")
    delta = float(sec.get("delta", 0.5))
    h_list = [int(h) for h in sec.get("h_list", [3, 4, 5, 6, 7])]
    reference_h = int(sec.get("reference_h", max(h_list) + 2))
    cfg = _solver_config(scenario.config, grid)
    ref_grid = None
    if "reference_n" in sec:
        ref_grid = Grid(int(sec["reference_n"]), grid.length)

    env = sharp_envelope(u0, delta=delta, norm_kind="h1s", s=cfg.s)
    w.add_csv(
        "envelope.csv",
        "k,a_k,c_k",
        (f"{k},{_fmt(a)},{_fmt(c)}" for k, (a, c) in enumerate(zip(env.base, env.c))),
    )
    study = convergence_study(
        u0,
        h_list,
        cfg,
        reference_h,
        delta=delta,
        reference_grid=ref_grid,
        workers=scenario.workers,
    )
    w.add_csv(
        "convergence.csv",
        "h,distance,c_geq_h,ratio",
        (f"{r.h},{_fmt(r.distance)},{_fmt(r.c_geq_h)},{_fmt(r.ratio)}" for r in study.rows),
    )
    rats = [r.ratio for r in study.rows if r.ratio > 0]
    results = {
        "under_resolved_reference": study.under_resolved,
        "ratio_spread": (max(rats) / min(rats)) if rats else 0.0,
        "reference_h": reference_h,
    }
    return 0, results


def _run_flow(scenario, w, grid, u0):
    sec = _section(scenario.config, "flow")
    bg_stride = int(sec.get("background_stride", 1))
    bg = evolve(u0, _solver_config(scenario.config, grid, monitor_stride=bg_stride))
    if bg.status != "ok":
        w.energies_csv(bg.reports)
        return 2, {"solver_status": bg.status, "message": bg.message}
    w.energies_csv(bg.reports)
    cfg = _solver_config(scenario.config, grid)
    flow = low_freq_flow(bg, cfg)
    w.add_csv(
        "flow.csv",
        "t,sup_u_low,min_qx",
        (
            f"{_fmt(t)},{_fmt(s)},{_fmt(q)}"
            for t, s, q in zip(flow.times, flow.sup_u_low, flow.min_qx)
        ),
    )
    results = {
        "monotone": flow.monotone,
        "min_qx": min(flow.min_qx),
        "sup_u_low": max(flow.sup_u_low),
        "message": flow.message,
    }
    return (0 if flow.monotone else 2), results


def _run_audit(scenario, w, grid, u0):
    sec = _section(scenario.config, "audit")
    series = evolve(u0, _solver_config(scenario.config, grid))
    w.energies_csv(series.reports)
    times, ratios = audit_ratios(series)
    r0 = series.reports[0]
    x0 = max(r0.linf, r0.h1)
    e1v = r0.e1
    rows = []
    for r, ratio in zip(series.reports, ratios):
        bound = x0 + r.t * (e1v + math.sqrt(e1v))
        rows.append(f"{_fmt(r.t)},{_fmt(r.linf)},{_fmt(bound)},{_fmt(ratio)}")
    w.add_csv("audit.csv", "t,linf,bound,ratio", rows)
    checkpoints = [float(t) for t in sec.get("checkpoints", [])]
    checks = []
    for tc in checkpoints:
        i = int(np.argmin(np.abs(np.array(times) - tc)))
        checks.append({"t": times[i], "ratio": ratios[i]})
    results = {
        "constant": max(ratios) if ratios else 0.0,
        "checkpoints": checks,
        "solver_status": series.status,
    }
    return (2 if series.status != "ok" else 0), results


_DISPATCH = {
    "simulate": lambda sc, w, g, u: _run_simulate(sc, w, g, u, conserve=False),
    "conserve": lambda sc, w, g, u: _run_simulate(sc, w, g, u, conserve=True),
    "picard": _run_picard,
    "linearized": _run_linearized,
    "difference": _run_difference,
    "envelope": _run_envelope,
    "flow": _run_flow,
    "audit": _run_audit,
}


def run(scenario: Scenario) -> int:
    """Execute one scenario; the manifest is written on every exit path."""
    try:
        w = RunWriter(scenario.outdir, overwrite=scenario.overwrite)
    except OutdirExistsError as e:
        print(f"dhs: {e}", file=sys.stderr)
        return 1

    started = time.time()
    manifest = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "config": scenario.config,
        "workers": scenario.workers,
    }
    exit_code = 1
    try:
        grid = _build_grid(scenario.config)
        u0, desc = _build_data(scenario, grid)
        manifest["data"] = desc
        manifest["u0_hash"] = field_hash(u0)
        exit_code, results = _DISPATCH[scenario.kind](scenario, w, grid, u0)
        manifest["results"] = results
        manifest["status"] = "ok" if exit_code == 0 else "sentinel"
    except UsageError as e:
        print(f"dhs: {e}", file=sys.stderr)
        manifest["status"] = "usage_error"
        manifest["error"] = str(e)
        exit_code = 1
    except Exception as e:  # unexpected failure still leaves a manifest behind
        print(f"dhs: internal error: {e}", file=sys.stderr)
        manifest["status"] = "error"
        manifest["error"] = f"{type(e).__name__}: {e}"
        exit_code = 1
    finally:
        manifest["exit_status"] = exit_code
        manifest["wall_time_s"] = time.time() - started
        w.write_manifest(manifest)
    return exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="dhs", description=__doc__, add_help=True)
    sub = p.add_subparsers(dest="kind", metavar="|".join(KINDS))
    for kind in KINDS:
        sp = sub.add_parser(kind, add_help=True)
        sp.add_argument("--config", required=True, help="TOML or JSON config file")
        sp.add_argument("--outdir", default=None, help="output directory (default runs/<kind>)")
        sp.add_argument("--seed", type=int, default=None, help="seed for randomized presets")
        sp.add_argument("--overwrite", action="store_true", help="replace an existing outdir")
        sp.add_argument("--workers", type=int, default=1, help="parallel family runs")
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.kind is None:
            raise UsageError("missing scenario kind")
        config = load_config(args.config)
        seed = args.seed
        if seed is None:
            seed = int(_section(config, "data").get("seed", 0))
        scenario = Scenario(
            kind=args.kind,
            config=config,
            outdir=Path(args.outdir) if args.outdir else Path("runs") / args.kind,
            seed=seed,
            overwrite=args.overwrite,
            workers=max(1, args.workers),
        )
    except UsageError as e:
        print(f"dhs: {e}", file=sys.stderr)
        return 1
    return run(scenario)


if __name__ == "__main__":
    sys.exit(main())
