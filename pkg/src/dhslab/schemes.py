"""Constructive procedures run as experiments: the Picard iteration and
its contraction, difference-of-solutions Lipschitz measurements, the
low-frequency characteristic flow, and the sup-norm growth audit.

Each returns measured quantities (distances, ratios, constants) rather
than pass/fail verdicts; callers decide what counts as acceptable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .energy import linf_hdot_norm
from .grid import Grid, SpectralField, derivative
from .lp import smooth_cutoff
from .stepper import (
    FieldPath,
    LinearCoeffs,
    SolverConfig,
    TimeSeries,
    evolve,
    evolve_linear,
)

__all__ = [
    "IterationReport",
    "constant_series",
    "picard_map",
    "picard_solve",
    "difference_experiment",
    "FlowResult",
    "low_freq_flow",
    "linfty_bound_audit",
    "audit_ratios",
]


@dataclass
class IterationReport:
    """Distances and ratios of one Picard run on a fixed horizon."""

    horizon: float
    distances: list[float]
    ratios: list[float]
    converged: bool
    non_contractive: bool = False

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "distances": self.distances,
            "ratios": self.ratios,
            "converged": self.converged,
            "non_contractive": self.non_contractive,
        }


def constant_series(u0: SpectralField, cfg: SolverConfig) -> TimeSeries:
    """The constant-in-time trajectory u(t) = u0 (the zeroth iterate)."""
    from .energy import e1 as _e1, make_report
    from .lp import LPSymbol

    zero = SpectralField.from_coeffs(u0.grid, np.zeros(u0.grid.n, dtype=np.complex128))
    sym = LPSymbol(cfg.s)
    ts = TimeSeries(grid=u0.grid)
    for t in (0.0, cfg.t_end):
        ts.append(t, u0, zero, make_report(u0, t, _e1(u0), sym))
    return ts


def picard_map(u_prev: TimeSeries, u0: SpectralField, cfg: SolverConfig) -> TimeSeries:
    """One application of the iteration map: solve
    v_t + v_xxx + u_prev v_x = (1/2) dx^{-1}((u_prev_x)^2) with data u0."""
    grid = u0.grid
    ideriv = 1j * grid.xi_odd
    mask = grid.dealias_mask
    inv = np.zeros(grid.n, dtype=np.complex128)
    nz = grid.xi_odd != 0.0
    inv[nz] = 1.0 / (1j * grid.xi_odd[nz])

    def source_hat(t):
        uhat = u_prev.at_hat(t)
        ux = np.fft.ifft(ideriv * uhat).real
        s = np.fft.fft(ux * ux)
        s[~mask] = 0.0
        return 0.5 * s * inv

    coeffs = LinearCoeffs(
        a=FieldPath.from_series(u_prev),
        b=None,
        F=FieldPath.from_function(grid, source_hat),
    )
    return evolve_linear(u0, coeffs, cfg)


def _series_distance(a: TimeSeries, b: TimeSeries, s: float = 1.0) -> float:
    """sup over stored times of the L^inf ∩ Hdot^s distance."""
    # iterate over the finer-stored series, interpolating the other
    fine, coarse = (a, b) if len(a.times) >= len(b.times) else (b, a)
    worst = 0.0
    for t, f in zip(fine.times, fine.fields):
        g = coarse.at(t)
        worst = max(worst, linf_hdot_norm(f - g, s))
    return worst


def picard_solve(
    u0: SpectralField,
    cfg: SolverConfig,
    tol: float = 1e-9,
    max_iter: int = 16,
) -> tuple[TimeSeries, IterationReport]:
    """Iterate the Picard map from the constant trajectory until the
    sup-in-time L^inf ∩ Hdot^1 distance falls below tol.

    Flags non-contraction when the distance ratios exceed 1 three times
    in a row (horizon too long for the data size).
    """
    prev = constant_series(u0, cfg)
    distances: list[float] = []
    ratios: list[float] = []
    converged = False
    non_contractive = False
    rising = 0
    current = prev
    for _ in range(max_iter):
        current = picard_map(prev, u0, cfg)
        if current.status != "ok":
            non_contractive = True
            break
        d = _series_distance(current, prev, s=1.0)
        if distances and distances[-1] > 0.0:
            r = d / distances[-1]
            ratios.append(r)
            rising = rising + 1 if r > 1.0 else 0
        distances.append(d)
        prev = current
        if d < tol:
            converged = True
            break
        if rising >= 3:
            non_contractive = True
            break
    return current, IterationReport(
        horizon=cfg.t_end,
        distances=distances,
        ratios=ratios,
        converged=converged,
        non_contractive=non_contractive,
    )


def difference_experiment(u0: SpectralField, v0: SpectralField, cfg: SolverConfig) -> float:
    """Measured Lipschitz ratio of the solution map between two data.

    Returns sup_t ||u(t)-v(t)|| / ||u0-v0|| in L^inf ∩ Hdot^s with s from
    the config; coinciding data give 0 by convention.
    """
    u0._check(v0)
    den = linf_hdot_norm(u0 - v0, cfg.s)
    if den == 0.0:
        return 0.0
    a = evolve(u0, cfg)
    b = evolve(v0, cfg)
    worst = 0.0
    for t, fa in zip(a.times, a.fields):
        fb = b.at(t)
        worst = max(worst, linf_hdot_norm(fa - fb, cfg.s))
    return worst / den


@dataclass
class FlowResult:
    """Characteristics of the low-frequency transport field."""

    grid: Grid
    times: list[float] = dc_field(default_factory=list)
    sup_u_low: list[float] = dc_field(default_factory=list)
    min_qx: list[float] = dc_field(default_factory=list)
    q_samples: list[np.ndarray] = dc_field(default_factory=list)
    monotone: bool = True
    message: str = ""


def low_freq_flow(background: TimeSeries, cfg: SolverConfig) -> FlowResult:
    """Integrate q_t = u_low(t, q), q(0, x) = x with classical RK4.

    u_low is the smooth low block of the background, evaluated off-grid
    by trigonometric interpolation (exact: the block is band-limited).
    Records sup |u_low| along characteristics and min q_x per monitor
    time; loss of strict monotonicity in x is flagged.
    """
    grid = background.grid
    phi = smooth_cutoff(grid.xi)
    sel = phi > 0.0
    xi_sel = grid.xi[sel]
    phi_sel = phi[sel]
    n = grid.n

    def u_low(t, q):
        c = background.at_hat(t)[sel] * phi_sel
        return (np.exp(1j * np.outer(q, xi_sel)) @ c).real / n

    h = cfg.dt
    n_full = int(np.floor(cfg.t_end / h + 1e-9))
    rem = cfg.t_end - n_full * h
    if rem < 1e-12 * h:
        rem = 0.0
    total = n_full + (1 if rem > 0.0 else 0)

    out = FlowResult(grid=grid)
    q = grid.x.copy()

    def record(t, q):
        displacement = SpectralField.from_samples(grid, q - grid.x)
        qx = derivative(displacement, 1).samples + 1.0
        out.times.append(t)
        out.sup_u_low.append(float(np.max(np.abs(u_low(t, q)))))
        out.min_qx.append(float(np.min(qx)))
        out.q_samples.append(q.copy())
        if out.min_qx[-1] <= 0.0 and out.monotone:
            out.monotone = False
            out.message = f"flow map lost strict monotonicity at t={t:.6g}"

    record(0.0, q)
    for k in range(1, total + 1):
        last = k == total and rem > 0.0
        hh = rem if last else h
        t = cfg.t_end - rem if last else (k - 1) * h
        k1 = u_low(t, q)
        k2 = u_low(t + 0.5 * hh, q + 0.5 * hh * k1)
        k3 = u_low(t + 0.5 * hh, q + 0.5 * hh * k2)
        k4 = u_low(t + hh, q + hh * k3)
        q = q + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k % cfg.monitor_stride == 0 or k == total:
            record(cfg.t_end if k == total else k * h, q)
    return out


def linfty_bound_audit(run: TimeSeries) -> float:
    """Implied constant in sup_t ||u||_inf <= C (||u0||_{X^0} + t (E1 + E1^{1/2}))."""
    _, ratios = audit_ratios(run)
    return max(ratios) if ratios else 0.0


def audit_ratios(run: TimeSeries) -> tuple[list[float], list[float]]:
    """Per-time ratios ||u(t)||_inf / (||u0||_{X^0} + t (E1 + sqrt(E1)))."""
    r0 = run.reports[0]
    x0 = max(r0.linf, r0.h1)
    e1v = r0.e1
    times, ratios = [], []
    for r in run.reports:
        den = x0 + r.t * (e1v + math.sqrt(e1v))
        times.append(r.t)
        ratios.append(r.linf / den if den > 0.0 else 0.0)
    return times, ratios
