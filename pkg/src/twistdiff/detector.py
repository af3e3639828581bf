"""Detector binning, count rates and accumulation times.

Intensity maps are normalized so the flux through the aperture is 1; a
detector image then holds the fraction of that flux per pixel, and count
rates follow linearly from bunch charge, repetition rate and quantum
efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import ELEMENTARY_CHARGE
from .errors import DomainError, GeometryError
from .fields import ComplexField2D


@dataclass
class DetectorImage:
    """Flux fraction per detector bin plus acceptance metadata.

    `P[iy, ix]` is the fraction of the transmitted flux collected by the
    bin whose lower-left corner is origin + (ix, iy)*pixel_pitch.
    """

    P: np.ndarray
    pixel_pitch: float
    origin: tuple = (0.0, 0.0)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float)
        if np.any(self.P < 0):
            raise DomainError("bin fractions must be non-negative")
        if self.f_det > 1.0 + 1e-9:
            raise DomainError(f"total acceptance {self.f_det} exceeds 1")

    @property
    def f_det(self) -> float:
        return float(self.P.sum())


@dataclass(frozen=True)
class BeamBudget:
    """Source and detector budget: bunch charge (C), repetition rate (Hz),
    quantum efficiency, charge state and exposure time (s)."""

    charge_per_pulse: float
    rep_rate: float
    efficiency: float
    charge_state: int = 1
    exposure: float = 0.0

    def __post_init__(self):
        if min(self.charge_per_pulse, self.rep_rate, self.exposure) < 0:
            raise DomainError("budget quantities must be non-negative")
        if not 0.0 <= self.efficiency <= 1.0:
            raise DomainError("efficiency must lie in [0, 1]")
        if self.charge_state < 1:
            raise DomainError("charge state must be >= 1")

    @property
    def beam_current(self) -> float:
        """Average current Q * f_rep in amperes."""
        return self.charge_per_pulse * self.rep_rate

    @property
    def particle_rate(self) -> float:
        """I_beam / (Z e) in 1/s."""
        return self.beam_current / (self.charge_state * ELEMENTARY_CHARGE)


def _overlap_matrix(edges_lo, edges_hi, centers, spacing):
    """Fraction of each grid cell [c - s/2, c + s/2] inside each bin."""
    lo = centers - 0.5 * spacing
    hi = centers + 0.5 * spacing
    # (n_bins, n_cells) interval intersections
    inter = (np.minimum(edges_hi[:, None], hi[None, :])
             - np.maximum(edges_lo[:, None], lo[None, :]))
    return np.clip(inter, 0.0, None) / spacing


def bin_field(intensity: ComplexField2D, pixel_pitch: float, window,
              lattice_pitch: float | None = None) -> DetectorImage:
    """Area-weighted binning of a normalized intensity map.

    `intensity` is a ComplexField2D whose |values|^2 (or values, if already
    real) integrate to the transmitted-flux fraction; `window` is
    (x0, x1, y0, y1).  Grid cells are treated as piecewise-constant patches
    and split across bins by exact overlap, so refining `pixel_pitch`
    leaves the total acceptance unchanged.
    """
    if pixel_pitch < min(intensity.dx, intensity.dy):
        raise DomainError("pixel_pitch must be at least the grid spacing")
    x0, x1, y0, y1 = window
    if not (x1 > x0 and y1 > y0):
        raise GeometryError("window must be non-degenerate")
    if (x0 < intensity.x[0] - 0.5 * intensity.dx
            or x1 > intensity.x[-1] + 0.5 * intensity.dx
            or y0 < intensity.y[0] - 0.5 * intensity.dy
            or y1 > intensity.y[-1] + 0.5 * intensity.dy):
        raise GeometryError("window extends outside the field footprint")

    vals = intensity.values
    dens = np.abs(vals) ** 2 if np.iscomplexobj(vals) else np.asarray(vals, float)
    cellflux = dens * intensity.dx * intensity.dy

    nbx = max(1, int(math.ceil((x1 - x0) / pixel_pitch - 1e-9)))
    nby = max(1, int(math.ceil((y1 - y0) / pixel_pitch - 1e-9)))
    ex_lo = x0 + pixel_pitch * np.arange(nbx)
    ex_hi = np.minimum(ex_lo + pixel_pitch, x1)
    ey_lo = y0 + pixel_pitch * np.arange(nby)
    ey_hi = np.minimum(ey_lo + pixel_pitch, y1)

    wx = _overlap_matrix(ex_lo, ex_hi, intensity.x, intensity.dx)
    wy = _overlap_matrix(ey_lo, ey_hi, intensity.y, intensity.dy)
    P = wy @ cellflux @ wx.T

    meta = {"window": tuple(window)}
    if lattice_pitch is not None:
        meta["lattice_pitch"] = lattice_pitch
        meta["under_sampled"] = bool(pixel_pitch > lattice_pitch / 3.0)
    return DetectorImage(P, pixel_pitch, (x0, y0), meta)


def total_rate(budget: BeamBudget, f_det: float) -> float:
    """Total detected count rate eta * (Q f_rep / (Z e)) * F_det, in 1/s."""
    if f_det < 0:
        raise DomainError("detector acceptance must be non-negative")
    return budget.efficiency * budget.particle_rate * f_det


def expected_counts(image: DetectorImage, budget: BeamBudget) -> np.ndarray:
    """Expected events per bin over the budget's exposure time."""
    return budget.efficiency * budget.particle_rate * budget.exposure * image.P


def time_to_counts(n_events: float, rate: float) -> float:
    """Accumulation time n/rate; a zero rate is an error, not infinity."""
    if n_events < 0:
        raise DomainError("event count must be non-negative")
    if n_events == 0:
        return 0.0
    if rate <= 0:
        raise DomainError("zero count rate: accumulation time is unbounded")
    return n_events / rate


def poisson_sample(counts: np.ndarray, seed: int) -> np.ndarray:
    """Reproducible Poisson realization of an expected-count map."""
    rng = np.random.default_rng(seed)
    return rng.poisson(np.asarray(counts, dtype=float))
