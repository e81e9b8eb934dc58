"""Conserved quantities, norms, the normal-form variable, and the
modified energy with its quartic time-derivative.

Gauge bookkeeping: the solver's source term uses the mean-zero primitive,
which drops the constant part of (1/2) dx^{-1}(u_x^2).  The drift
``beta(t) = E1 t / (2 L)`` integrates that constant in closed form (E1 is
conserved), and the gauge-corrected second energy reads
``E2* = int u_xx^2 - (u + beta) u_x^2``.  Whether the correction is the
right one on the torus is a measured question, not an assumption; the
report rows carry both the corrected value and beta so either variant can
be reconstructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import (
    SpectralField,
    antiderivative_meanzero,
    derivative,
    inner,
    norm,
    product,
)
from .lp import L_A, LPSymbol, apply_A, commutator_A_para, project

__all__ = [
    "EnergyReport",
    "e1",
    "e2_gauge",
    "xs_norm",
    "normal_form_variable",
    "modified_energy",
    "high_freq_energy",
    "equivalence_defect",
    "q_split",
    "modified_energy_rate",
    "make_report",
    "linf_hdot_norm",
]


@dataclass(frozen=True)
class EnergyReport:
    """One row of diagnostics along a trajectory."""

    t: float
    e1: float
    e2_gauge: float
    beta: float
    e_tilde: float
    hs_high: float
    linf: float
    h1: float
    h1s: float

    CSV_HEADER = "t,e1,e2_gauge,beta,e_tilde,hs_high,linf,h1,h1s"

    def csv_row(self) -> str:
        return ",".join(
            f"{v:.17e}"
            for v in (
                self.t,
                self.e1,
                self.e2_gauge,
                self.beta,
                self.e_tilde,
                self.hs_high,
                self.linf,
                self.h1,
                self.h1s,
            )
        )


def e1(u: SpectralField) -> float:
    """First conserved quantity: int u_x^2 dx."""
    return norm(u, "hdot", 1.0) ** 2


def e2_gauge(u: SpectralField, t: float, e1_0: float) -> tuple[float, float]:
    """Gauge-corrected second energy and the Galilean drift beta(t).

    Returns ``(E2*, beta)`` with ``beta = e1_0 t / (2 L)`` and
    ``E2* = int u_xx^2 - (u + beta) u_x^2 dx``.
    """
    beta = e1_0 * t / (2.0 * u.grid.length)
    ux = derivative(u, 1)
    uxx = derivative(u, 2)
    cubic = inner(product(ux, ux), u)
    e2 = norm(uxx, "l2") ** 2 - cubic - beta * e1(u)
    return e2, beta


def xs_norm(u: SpectralField, s: float) -> float:
    """Norm of L^inf  ∩ Hdot^1 ∩ Hdot^{1+s} (max of the components)."""
    if not 0.5 < s <= 1.0:
        raise ValueError(f"s must lie in (1/2, 1], got {s}")
    return max(norm(u, "linf"), norm(u, "hdot", 1.0), norm(u, "hdot", 1.0 + s))


def linf_hdot_norm(u: SpectralField, s: float) -> float:
    """max(L^inf, Hdot^s) — the contraction/difference norm at exponent s."""
    return max(norm(u, "linf"), norm(u, "hdot", s))


def normal_form_variable(u: SpectralField) -> SpectralField:
    """Quadratic normal-form correction u - 1/6 dx^{-2}(u^2) + 1/6 (dx^{-1}u)^2.

    Both antiderivatives act on mean-subtracted arguments (mean-zero gauge)
    and all products are dealiased.
    """
    usq = product(u, u)
    p1, _ = antiderivative_meanzero(usq)
    p2, _ = antiderivative_meanzero(p1)
    prim, _ = antiderivative_meanzero(u)
    return u - (1.0 / 6.0) * p2 + (1.0 / 6.0) * product(prim, prim)


def modified_energy(u: SpectralField, sym: LPSymbol) -> float:
    """int (A u_x)^2 - 1/3 Au ( A(u^2) + 2 [A, dx^{-1}u] u_x - Au u ) dx."""
    ux = derivative(u, 1)
    aux = apply_A(ux, sym)
    au = apply_A(u, sym)
    corr = (
        apply_A(product(u, u), sym)
        + 2.0 * commutator_A_para(u, u, sym)
        - product(au, u)
    )
    return inner(aux, aux) - inner(au, corr) / 3.0


def high_freq_energy(u: SpectralField, sym: LPSymbol) -> float:
    """|| P_{>0} u ||^2 in Hdot^{1+s} (the quantity the modified energy tracks)."""
    return norm(project(u, "gt0", phi=sym.phi), "hdot", 1.0 + sym.s) ** 2


def equivalence_defect(u: SpectralField, sym: LPSymbol) -> float:
    """Normalized gap | ||u_{>0}||^2_{Hdot^{1+s}} - E~ | / (E1 ||u||_inf).

    Returns 0 when both numerator and normalizer vanish, +inf when only
    the normalizer does (flagged error case).
    """
    num = abs(high_freq_energy(u, sym) - modified_energy(u, sym))
    den = e1(u) * norm(u, "linf")
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def q_split(u: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Split of the full right side u_t + u_xxx = Q into Q1 + Q2.

    Q1 = dx^{-2}(u_x u_xx) with the mean-zero gauge at each antiderivative,
    Q2 = -u u_x; both dealiased.  Q1 + Q2 equals the stepper nonlinearity.
    """
    ux = derivative(u, 1)
    uxx = derivative(u, 2)
    inner_prim, _ = antiderivative_meanzero(product(ux, uxx))
    q1, _ = antiderivative_meanzero(inner_prim)
    q2 = -1.0 * product(u, ux)
    return q1, q2


def modified_energy_rate(u: SpectralField, sym: LPSymbol) -> float:
    """Quartic expression for d/dt of the modified energy:
    int AQ L_A(u,u) + Au L_A(Q,u) + Au L_A(u,Q) dx with Q = Q1 + Q2."""
    q1, q2 = q_split(u)
    q = q1 + q2
    au = apply_A(u, sym)
    return (
        inner(apply_A(q, sym), L_A(u, u, sym))
        + inner(au, L_A(q, u, sym))
        + inner(au, L_A(u, q, sym))
    )


def make_report(u: SpectralField, t: float, e1_0: float, sym: LPSymbol) -> EnergyReport:
    e2v, beta = e2_gauge(u, t, e1_0)
    return EnergyReport(
        t=t,
        e1=e1(u),
        e2_gauge=e2v,
        beta=beta,
        e_tilde=modified_energy(u, sym),
        hs_high=high_freq_energy(u, sym),
        linf=norm(u, "linf"),
        h1=norm(u, "hdot", 1.0),
        h1s=norm(u, "hdot", 1.0 + sym.s),
    )
