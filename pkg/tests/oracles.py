"""Shared independent oracles and field builders for the test suite.

The convolution product here is an O(n^2) double sum evaluated directly
from coefficients; it reproduces what the FFT-based production path
computes (including the dealiasing mask) through entirely different
arithmetic, so agreement is a real cross-check.
"""

import numpy as np

from dhslab.grid import Grid, SpectralField


def smooth_random(grid: Grid, seed: int, decay: float = 1.5, kmin: int = 1,
                  kmax: int | None = None, mean: float = 0.0) -> SpectralField:
    """Hermitian random field with |coeff(k)| ~ k^-decay and seeded phases."""
    rng = np.random.default_rng(seed)
    c = np.zeros(grid.n, dtype=np.complex128)
    j = grid.mode_numbers()
    top = kmax if kmax is not None else grid.n // 3
    for k in range(kmin, top + 1):
        a = (rng.standard_normal() + 1j * rng.standard_normal()) * k**-decay
        c[j == k] = a * grid.n
        c[j == -k] = np.conj(a) * grid.n
    c[0] = mean * grid.n
    return SpectralField.from_coeffs(grid, c)


def conv_product_dealiased(grid: Grid, fc: np.ndarray, gc: np.ndarray) -> np.ndarray:
    """Coefficients of the dealiased pointwise product by direct double sum."""
    n = grid.n
    out = np.zeros(n, dtype=np.complex128)
    for m in range(n):
        acc = 0.0 + 0.0j
        for j in range(n):
            acc += fc[j] * gc[(m - j) % n]
        out[m] = acc / n
    out[~grid.dealias_mask] = 0.0
    return out


def parseval_integral(grid: Grid, fc: np.ndarray, gc: np.ndarray) -> float:
    """int f g dx from coefficients."""
    return float(np.real(np.vdot(fc, gc)) * grid.length / grid.n**2)
