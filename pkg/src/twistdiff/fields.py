"""Sampled complex fields, observation planes and grid utilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError, GeometryError


@dataclass
class ComplexField2D:
    """Complex amplitude sampled on a uniform transverse grid.

    `values[iy, ix]` lives at physical position
    (origin[0] + ix*dx, origin[1] + iy*dy).  `metadata` carries propagation
    bookkeeping (z, wavelength, normalization convention, warnings, ...).
    """

    values: np.ndarray
    dx: float
    dy: float
    origin: tuple = (0.0, 0.0)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 2:
            raise GeometryError("values must be a 2D array")
        if self.dx <= 0 or self.dy <= 0:
            raise GeometryError("grid spacings must be positive")
        if not np.all(np.isfinite(self.values.view(float))):
            raise DomainError("field values must be finite")

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def x(self) -> np.ndarray:
        return self.origin[0] + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.origin[1] + self.dy * np.arange(self.ny)

    def grid(self):
        return np.meshgrid(self.x, self.y)

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def flux(self) -> float:
        """sum |u|^2 dx dy."""
        return float(np.sum(np.abs(self.values) ** 2) * self.dx * self.dy)

    def copy_with(self, values, **meta) -> "ComplexField2D":
        md = dict(self.metadata)
        md.update(meta)
        return ComplexField2D(values, self.dx, self.dy, self.origin, md)


@dataclass(frozen=True)
class ObservationPlane:
    """Target sampling: z > 0 plus inclusive x/y ranges and sample counts."""

    z: float
    x_range: tuple
    y_range: tuple
    nx: int
    ny: int

    def __post_init__(self):
        if self.z <= 0:
            raise GeometryError("observation plane must have z > 0")
        if self.nx < 2 or self.ny < 2:
            raise GeometryError("nx and ny must be >= 2")
        if not (self.x_range[1] > self.x_range[0] and self.y_range[1] > self.y_range[0]):
            raise GeometryError("ranges must be non-degenerate")

    @classmethod
    def centered(cls, z: float, half_width: float, n: int) -> "ObservationPlane":
        return cls(z, (-half_width, half_width), (-half_width, half_width), n, n)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    def grid(self):
        return np.meshgrid(self.x, self.y)


def centered_grid(n: int, dx: float) -> np.ndarray:
    """Coordinates (arange(n) - n//2)*dx; contains 0 exactly."""
    return (np.arange(n) - n // 2) * dx


def sample_on_grid(func, n: int, dx: float, metadata=None) -> ComplexField2D:
    """Sample func(x, y) on a centred n x n grid of spacing dx."""
    x = centered_grid(n, dx)
    X, Y = np.meshgrid(x, x)
    return ComplexField2D(np.asarray(func(X, Y), dtype=complex), dx, dx,
                          (x[0], x[0]), dict(metadata or {}))


def aperture_field(beam, aperture, n_across: int = 64, pad_factor: int = 8,
                   smoothing_width: float = 0.0, source_distance: float = 0.0,
                   unit_flux: bool = True) -> ComplexField2D:
    """Masked incident field A * psi_in on a padded uniform grid.

    The aperture diameter is resolved by `n_across` samples and the grid is
    enlarged by `pad_factor` to give the discrete Fourier transform enough
    spectral resolution.  With `unit_flux` the transmitted flux is scaled
    to 1 (expected-count convention).
    """
    from .aperture import transmission

    if pad_factor < 1:
        raise DomainError("pad_factor must be >= 1")
    diameter = 2.0 * aperture.bounding_radius
    dx = diameter / n_across
    n = int(2 ** np.ceil(np.log2(n_across * pad_factor)))
    x = centered_grid(n, dx)
    X, Y = np.meshgrid(x, x)
    mask = transmission(aperture, X, Y, smoothing_width)
    psi = beam.field_xy(X, Y, source_distance) if hasattr(beam, "field_xy") else beam(X, Y)
    vals = np.asarray(mask * psi, dtype=complex)
    fld = ComplexField2D(vals, dx, dx, (x[0], x[0]),
                         {"normalization": "as sampled"})
    if unit_flux:
        f = fld.flux()
        if f == 0:
            raise DomainError("no transmitted flux through the aperture")
        fld.values = fld.values / np.sqrt(f)
        fld.metadata["normalization"] = "unit transmitted flux"
    return fld


def resample(field: ComplexField2D, x_new, y_new) -> np.ndarray:
    """Bilinear resample of complex values onto new coordinate vectors."""
    interp_r = RegularGridInterpolator((field.y, field.x), field.values.real,
                                       bounds_error=False, fill_value=0.0)
    interp_i = RegularGridInterpolator((field.y, field.x), field.values.imag,
                                       bounds_error=False, fill_value=0.0)
    XN, YN = np.meshgrid(x_new, y_new)
    pts = np.column_stack([YN.ravel(), XN.ravel()])
    out = interp_r(pts) + 1j * interp_i(pts)
    return out.reshape(YN.shape)


def correlation(a, b) -> float:
    """Pearson correlation of two equally-shaped real maps."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise GeometryError("maps must have the same shape")
    a = a - a.mean()
    b = b - b.mean()
    den = np.sqrt(np.sum(a * a) * np.sum(b * b))
    if den == 0:
        raise DomainError("correlation undefined for constant maps")
    return float(np.sum(a * b) / den)
