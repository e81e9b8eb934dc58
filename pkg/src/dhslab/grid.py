"""Periodic grid, spectral transforms, and the multiplier toolbox.

Everything downstream computes on a uniform grid over the torus [0, L).
Fields are carried both as real samples and as cached Fourier
coefficients (numpy ``fft`` convention, unnormalized), kept consistent at
all times.  Multipliers follow two hard conventions:

* odd symbols (odd-order derivatives, the antiderivative, the Airy phase)
  zero the Nyquist mode so realness is preserved;
* the antiderivative is the unique mean-zero periodic primitive of the
  mean-subtracted input (the additive constant that a line primitive
  would carry is tracked elsewhere as a Galilean drift).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "SpectralField",
    "make_field",
    "derivative",
    "antiderivative_meanzero",
    "norm",
    "dealias",
    "inner",
    "product",
    "resample",
    "save_field",
    "load_field",
    "field_to_csv",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: ``n`` points on a torus of length ``length``.

    The wavenumber lattice is ``xi_j = 2*pi*j/length`` for
    ``j in {-n/2+1, ..., n/2}`` (Nyquist carried with positive sign).
    """

    n: int
    length: float
    x: np.ndarray = field(init=False, repr=False, compare=False)
    xi: np.ndarray = field(init=False, repr=False, compare=False)
    xi_odd: np.ndarray = field(init=False, repr=False, compare=False)
    dealias_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not _is_power_of_two(self.n) or self.n < 16:
            raise ValueError(f"n must be a power of two >= 16, got {self.n}")
        if not (self.length > 0 and np.isfinite(self.length)):
            raise ValueError(f"length must be positive and finite, got {self.length}")
        n, lam = self.n, float(self.length)
        j = np.fft.fftfreq(n, d=1.0 / n)  # 0..n/2-1, -n/2..-1
        j[n // 2] = n // 2  # carry Nyquist with positive sign
        object.__setattr__(self, "x", np.arange(n) * (lam / n))
        object.__setattr__(self, "xi", 2.0 * np.pi * j / lam)
        xi_odd = self.xi.copy()
        xi_odd[n // 2] = 0.0  # odd multipliers drop the Nyquist mode
        object.__setattr__(self, "xi_odd", xi_odd)
        object.__setattr__(self, "dealias_mask", np.abs(j) <= n // 3)

    @property
    def dx(self) -> float:
        return self.length / self.n

    def mode_numbers(self) -> np.ndarray:
        """Integer mode indices in fft order (Nyquist positive)."""
        return np.rint(self.xi * self.length / (2.0 * np.pi)).astype(int)


class SpectralField:
    """A real periodic field: samples plus cached Fourier coefficients.

    Instances are treated as immutable values; all operations return new
    fields.  Coefficients use the raw numpy convention
    ``c_j = sum_m samples[m] * exp(-2i*pi*j*m/n)``.
    """

    __slots__ = ("grid", "samples", "coeffs")

    def __init__(self, grid: Grid, samples: np.ndarray, coeffs: np.ndarray):
        self.grid = grid
        self.samples = samples
        self.coeffs = coeffs
        samples.setflags(write=False)
        coeffs.setflags(write=False)

    @staticmethod
    def _symmetrize(coeffs: np.ndarray) -> np.ndarray:
        """Project coefficients onto exact Hermitian symmetry.

        Transform roundoff breaks c(-j) = conj(c(j)) at the 1e-16 level;
        high-order multipliers amplify that dust, so symmetry is enforced
        structurally here.  All multipliers used in this package satisfy
        m(-j) = conj(m(j)) exactly in floating point and therefore
        preserve the property.
        """
        c = coeffs.astype(np.complex128, copy=True)
        c[1:] = 0.5 * (c[1:] + np.conj(c[1:][::-1]))
        c[0] = c[0].real
        return c

    @classmethod
    def from_samples(cls, grid: Grid, samples: np.ndarray) -> "SpectralField":
        samples = np.asarray(samples, dtype=np.float64)
        if samples.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} samples, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples contain non-finite values")
        return cls(grid, samples.copy(), cls._symmetrize(np.fft.fft(samples)))

    @classmethod
    def from_coeffs(cls, grid: Grid, coeffs: np.ndarray) -> "SpectralField":
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} coefficients, got shape {coeffs.shape}")
        z = np.fft.ifft(coeffs)
        samples = z.real.copy()
        if not np.all(np.isfinite(samples)):
            raise ValueError("coefficients produce non-finite samples")
        scale = np.max(np.abs(samples)) + 1e-300
        if np.max(np.abs(z.imag)) > 1e-6 * max(scale, 1.0):
            raise ValueError("coefficients are not Hermitian-symmetric")
        return cls._from_hat(grid, coeffs)

    @classmethod
    def _from_hat(cls, grid: Grid, coeffs: np.ndarray) -> "SpectralField":
        """Internal constructor: symmetrize and transform, no validation."""
        c = cls._symmetrize(coeffs)
        return cls(grid, np.fft.ifft(c).real.copy(), c)

    def with_multiplier(self, m: np.ndarray) -> "SpectralField":
        """Apply a Fourier multiplier (must preserve Hermitian symmetry)."""
        c = self.coeffs * m
        z = np.fft.ifft(c)
        return SpectralField(self.grid, z.real.copy(), c)

    def mean(self) -> float:
        return self.coeffs[0].real / self.grid.n

    # small value-style conveniences; pointwise products go through product()
    def __add__(self, other):
        self._check(other)
        return SpectralField(self.grid, self.samples + other.samples, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return SpectralField(self.grid, self.samples - other.samples, self.coeffs - other.coeffs)

    def __mul__(self, a):
        a = float(a)
        return SpectralField(self.grid, a * self.samples, a * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralField(self.grid, -self.samples, -self.coeffs)

    def _check(self, other):
        if not isinstance(other, SpectralField) or other.grid != self.grid:
            raise ValueError("operands must share one grid")

    def __repr__(self):
        return f"SpectralField(n={self.grid.n}, length={self.grid.length:g})"


def make_field(grid: Grid, sampler) -> SpectralField:
    """Sample ``sampler`` on the grid and transform.

    ``sampler`` maps position to value; array-vectorized callables are
    used directly, scalar ones are mapped pointwise.
    """
    try:
        vals = np.asarray(sampler(grid.x), dtype=np.float64)
        if vals.shape != grid.x.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(sampler(xx)) for xx in grid.x], dtype=np.float64)
    return SpectralField.from_samples(grid, vals)


def zero_field(grid: Grid) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.n), np.zeros(grid.n, dtype=np.complex128))


def constant_field(grid: Grid, c: float) -> SpectralField:
    return make_field(grid, lambda x: np.full_like(x, float(c)))


def derivative(f: SpectralField, order: int = 1) -> SpectralField:
    """Spectral derivative of the given order (>= 1)."""
    order = int(order)
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    xi = f.grid.xi_odd if order % 2 == 1 else f.grid.xi
    return f.with_multiplier((1j * xi) ** order)


def antiderivative_meanzero(f: SpectralField) -> tuple[SpectralField, float]:
    """Mean-zero periodic primitive of ``f - mean(f)``.

    Returns ``(g, m)`` with ``g' = f - m`` and ``<g> = 0``; ``m`` is the
    dropped mean, the caller's Galilean bookkeeping.
    """
    g = f.grid
    inv = np.zeros(g.n, dtype=np.complex128)
    nz = g.xi_odd != 0.0
    inv[nz] = 1.0 / (1j * g.xi_odd[nz])
    return f.with_multiplier(inv), f.mean()


def dealias(f: SpectralField) -> SpectralField:
    """Zero all modes with |j| > n/3 (2/3 rule for quadratic products)."""
    return f.with_multiplier(f.grid.dealias_mask)


def product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product, dealiased."""
    f._check(g)
    c = np.fft.fft(f.samples * g.samples)
    c[~f.grid.dealias_mask] = 0.0
    return SpectralField._from_hat(f.grid, c)


def inner(f: SpectralField, g: SpectralField) -> float:
    """L2 inner product over the torus, via Parseval."""
    f._check(g)
    n = f.grid.n
    return float(np.real(np.vdot(f.coeffs, g.coeffs)) * f.grid.length / n**2)


def norm(f: SpectralField, kind: str, sigma: float | None = None) -> float:
    """Norm of a field: ``linf``, ``l2``, or ``hdot`` with exponent sigma.

    Homogeneous Sobolev norms exclude the zero mode; sigma must lie in
    [0, 3].
    """
    kind = kind.lower()
    if kind == "linf":
        return float(np.max(np.abs(f.samples)))
    g = f.grid
    w = np.abs(f.coeffs) ** 2 * (g.length / g.n**2)
    if kind == "l2":
        return float(np.sqrt(np.sum(w)))
    if kind == "hdot":
        if sigma is None:
            raise ValueError("hdot norm needs sigma")
        sigma = float(sigma)
        if not 0.0 <= sigma <= 3.0:
            raise ValueError(f"sigma must be in [0, 3], got {sigma}")
        nz = g.xi != 0.0
        return float(np.sqrt(np.sum(np.abs(g.xi[nz]) ** (2 * sigma) * w[nz])))
    raise ValueError(f"unknown norm kind {kind!r}")


def resample(f: SpectralField, grid: Grid) -> SpectralField:
    """Move a field to another grid of the same length (pad/truncate modes)."""
    if abs(grid.length - f.grid.length) > 1e-12 * f.grid.length:
        raise ValueError("resample requires equal domain lengths")
    src, dst = f.grid, grid
    c = np.zeros(dst.n, dtype=np.complex128)
    m = min(src.n, dst.n) // 2  # copy modes |j| < m, drop both Nyquists
    c[:m] = f.coeffs[:m]
    c[-(m - 1):] = f.coeffs[-(m - 1):]
    c *= dst.n / src.n
    return SpectralField._from_hat(dst, c)


def save_field(f: SpectralField, path) -> None:
    """Write samples as 8-byte little-endian reals plus a JSON sidecar."""
    path = Path(path)
    path.write_bytes(f.samples.astype("<f8").tobytes())
    sidecar = {"n": f.grid.n, "length": f.grid.length}
    path.with_suffix(".json").write_text(json.dumps(sidecar) + "\n")


def load_field(path) -> SpectralField:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    grid = Grid(int(meta["n"]), float(meta["length"]))
    samples = np.frombuffer(path.read_bytes(), dtype="<f8")
    return SpectralField.from_samples(grid, samples)


def field_to_csv(f: SpectralField, path) -> None:
    """Export samples as CSV with columns x,value."""
    lines = ["x,value"]
    lines += [f"{x:.17e},{v:.17e}" for x, v in zip(f.grid.x, f.samples)]
    Path(path).write_text("\n".join(lines) + "\n")
