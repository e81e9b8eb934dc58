"""Littlewood-Paley projectors, paraproducts, and the high-pass
fractional-derivative operator behind the modified energy.

The dyadic ladder is built from one smooth cutoff ``phi`` (1 on |xi|<=1,
0 on |xi|>=2, a C-infinity smoothstep in between).  Band k has symbol
``psi_k(xi) = phi(xi/2^k) - phi(xi/2^(k-1))``, so the low block plus the
bands telescope to an exact partition of unity on any finite lattice.

The Bony splitting here tiles the double band sum exactly: the low-high
part pairs band k with everything at least five bands below, and the
balanced part collects all pairs within four bands (the low block counts
as band 0).  Their sum reproduces the dealiased pointwise product to
roundoff, which is the property the rest of the code depends on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, SpectralField, antiderivative_meanzero, dealias, derivative, product

__all__ = [
    "smooth_cutoff",
    "LPSymbol",
    "band_count",
    "project",
    "apply_A",
    "paraproduct_low_high",
    "balanced_product",
    "commutator_A_para",
    "L_A",
]


def smooth_cutoff(xi) -> np.ndarray:
    """C-infinity cutoff: 1 for |xi| <= 1, 0 for |xi| >= 2, monotone between."""
    xi = np.asarray(xi, dtype=np.float64)
    t = 2.0 - np.abs(xi)

    def bump(s):
        out = np.zeros_like(s)
        pos = s > 0
        with np.errstate(over="ignore"):
            out[pos] = np.exp(-1.0 / s[pos])
        return out

    b, b1 = bump(t), bump(1.0 - t)
    out = np.empty_like(t)
    out[t >= 1.0] = 1.0
    out[t <= 0.0] = 0.0
    mid = (t > 0.0) & (t < 1.0)
    out[mid] = b[mid] / (b[mid] + b1[mid])
    return out


@dataclass(frozen=True)
class LPSymbol:
    """Cutoff + Sobolev exponent defining the weight |xi|^s (1 - phi(xi)).

    ``s`` must lie in (1/2, 1]; ``phi`` defaults to the smoothstep above.
    """

    s: float
    phi: object = field(default=smooth_cutoff, repr=False, compare=False)

    def __post_init__(self):
        if not 0.5 < self.s <= 1.0:
            raise ValueError(f"s must lie in (1/2, 1], got {self.s}")

    def a(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        return np.abs(xi) ** self.s * (1.0 - self.phi(xi))


def band_count(grid: Grid) -> int:
    """Largest band index representable on the grid (phi(xi/2^k) == 1 beyond)."""
    ximax = float(np.max(np.abs(grid.xi)))
    return max(1, math.ceil(math.log2(ximax)))


def _band_symbol(grid: Grid, k: int, phi) -> np.ndarray:
    return phi(grid.xi / 2.0**k) - phi(grid.xi / 2.0 ** (k - 1))


def project(f: SpectralField, band: str, k: int | None = None, phi=smooth_cutoff) -> SpectralField:
    """Frequency projection: ``leq`` (P_{<=k}), ``at`` (band k), or ``gt0``.

    ``leq`` uses the symbol phi(xi/2^k); ``at`` the band symbol psi_k
    (k >= 1); ``gt0`` the high-pass 1 - phi.
    """
    g = f.grid
    if band == "leq":
        if k is None:
            raise ValueError("leq projection needs k")
        return f.with_multiplier(phi(g.xi / 2.0 ** int(k)))
    if band == "at":
        if k is None or k < 1:
            raise ValueError("band projection needs k >= 1")
        return f.with_multiplier(_band_symbol(g, int(k), phi))
    if band == "gt0":
        return f.with_multiplier(1.0 - phi(g.xi))
    raise ValueError(f"unknown band {band!r}")


def apply_A(f: SpectralField, sym: LPSymbol) -> SpectralField:
    """High-pass fractional derivative: multiplier |xi|^s (1 - phi(xi))."""
    return f.with_multiplier(sym.a(f.grid.xi))


def _bands(f: SpectralField, phi) -> list[SpectralField]:
    """Band 0 is the low block P_{<=0}; bands 1..kmax are psi_k pieces."""
    g = f.grid
    out = [f.with_multiplier(phi(g.xi))]
    for k in range(1, band_count(g) + 1):
        out.append(f.with_multiplier(_band_symbol(g, k, phi)))
    return out


def paraproduct_low_high(f: SpectralField, g: SpectralField, phi=smooth_cutoff) -> SpectralField:
    """Low-high paraproduct: sum over bands k of (f below band k-4) * P_k g."""
    f._check(g)
    grid = f.grid
    kmax = band_count(grid)
    gb = _bands(g, phi)
    acc = np.zeros(grid.n)
    low = None
    for k in range(5, kmax + 1):
        # low factor = bands 0..k-5 of f, i.e. smooth low-pass at scale 2^(k-5)
        low = f.with_multiplier(phi(grid.xi / 2.0 ** (k - 5)))
        acc = acc + low.samples * gb[k].samples
    out = SpectralField.from_samples(grid, acc)
    return dealias(out)


def balanced_product(f: SpectralField, g: SpectralField, phi=smooth_cutoff) -> SpectralField:
    """Balanced part of the product: all band pairs within distance 4.

    Pairs the low block (band 0) with bands up to 4, so together with the
    two paraproducts this reproduces the dealiased product exactly.
    """
    f._check(g)
    grid = f.grid
    fb, gb = _bands(f, phi), _bands(g, phi)
    acc = np.zeros(grid.n)
    for j in range(len(fb)):
        for k in range(len(gb)):
            if abs(j - k) <= 4:
                acc = acc + fb[j].samples * gb[k].samples
    return dealias(SpectralField.from_samples(grid, acc))


def commutator_A_para(v: SpectralField, w: SpectralField, sym: LPSymbol) -> SpectralField:
    """Commutator [A, V] w_x where V multiplies by the mean-zero primitive of v."""
    v._check(w)
    V, _ = antiderivative_meanzero(v)
    wx = derivative(w, 1)
    return apply_A(product(V, wx), sym) - product(V, apply_A(wx, sym))


def L_A(v: SpectralField, w: SpectralField, sym: LPSymbol) -> SpectralField:
    """Trilinear form -1/3 A(vw) - 2/3 [A, dx^{-1} v] w_x + 1/3 Av * w."""
    v._check(w)
    return (
        (-1.0 / 3.0) * apply_A(product(v, w), sym)
        + (-2.0 / 3.0) * commutator_A_para(v, w, sym)
        + (1.0 / 3.0) * product(apply_A(v, sym), w)
    )
