"""Pattern measurements and portable output formats.

Peak census, lattice-pitch and lobe-count measurements for far-field maps,
plus the delimited-text and binary-PGM writers used by the batch front end.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np
from scipy.ndimage import maximum_filter
from scipy.spatial import cKDTree

from .errors import DomainError, GeometryError
from .fields import ComplexField2D, correlation


def find_peaks(intensity: np.ndarray, x, y, min_distance: float,
               threshold_rel: float = 0.25):
    """Local maxima of a 2D map above threshold_rel * max.

    Returns (px, py, heights) in physical coordinates; `min_distance` is the
    suppression radius for neighbouring maxima.
    """
    intensity = np.asarray(intensity, dtype=float)
    dx = x[1] - x[0]
    size = max(3, int(round(min_distance / dx)))
    filt = maximum_filter(intensity, size=size, mode="nearest")
    mask = (intensity == filt) & (intensity > threshold_rel * intensity.max())
    iy, ix = np.nonzero(mask)
    return np.asarray(x)[ix], np.asarray(y)[iy], intensity[iy, ix]


def lattice_spacing(intensity: np.ndarray, x, y, pitch_hint: float,
                    r_min: float = 0.0, r_max: float = np.inf) -> float:
    """Median nearest-neighbour distance of the pattern's bright peaks.

    For the triangular-aperture far field the nearest-neighbour directions
    are the reciprocal-basis directions, so this measures the lattice step
    directly.  `pitch_hint` only sets the peak-suppression radius.
    """
    px, py, _ = find_peaks(intensity, x, y, 0.5 * pitch_hint, threshold_rel=1e-5)
    r = np.hypot(px, py)
    keep = (r > r_min) & (r < r_max)
    pts = np.column_stack([px[keep], py[keep]])
    if len(pts) < 4:
        raise DomainError("too few peaks to measure a lattice spacing")
    dist, _ = cKDTree(pts).query(pts, k=2)
    return float(np.median(dist[:, 1]))


def count_outer_row(intensity: np.ndarray, x, y, pitch: float, ell: int,
                    threshold_rel: float = 0.3):
    """Number of bright lobes along the outer row of the vortex lattice.

    The far-field spot triangle of a charge-ell vortex points along -x for
    ell > 0 (default aperture orientation), so the outer row is the set of
    peaks sharing the largest x (smallest for ell < 0).  The census is
    restricted to the lattice region, excluding any outer beam ring.
    """
    X, Y = np.meshgrid(np.asarray(x), np.asarray(y))
    crop = (0.7 * abs(ell) + 1.6) * pitch
    inten = np.where(np.hypot(X, Y) < crop, intensity, 0.0)
    px, py, h = find_peaks(inten, x, y, 0.5 * pitch, threshold_rel)
    if len(px) == 0:
        return 0, np.empty((0, 2))
    edge = px.max() if ell >= 0 else px.min()
    sel = np.abs(px - edge) < pitch / 3.0
    return int(sel.sum()), np.column_stack([px, py])


def mirror_x(field_or_map):
    """Map mirrored about the vertical axis (x -> -x).

    Exact for grids symmetric about x = 0; even-length FFT-style axes drop
    the unpaired edge column on both inputs before comparison, so use
    `mirror_correlation` for those.
    """
    vals = field_or_map.values if isinstance(field_or_map, ComplexField2D) else field_or_map
    return vals[:, ::-1]


def mirror_correlation(map_pos: np.ndarray, map_neg: np.ndarray) -> float:
    """Correlation of map_neg against the x-mirror of map_pos.

    Accepts maps on centred grids; for even sizes the first row/column
    (the unpaired -Nyquist samples of an FFT grid) are dropped so the flip
    is an exact coordinate mirror.
    """
    a = np.asarray(map_pos, dtype=float)
    b = np.asarray(map_neg, dtype=float)
    if a.shape != b.shape:
        raise GeometryError("maps must share a grid")
    if a.shape[1] % 2 == 0:
        a = a[:, 1:]
        b = b[:, 1:]
    if a.shape[0] % 2 == 0:
        a = a[1:, :]
        b = b[1:, :]
    return correlation(a[:, ::-1], b)


def rotation_correlation(intensity: np.ndarray, x, y, angle: float) -> float:
    """Correlation of a map with itself rotated by `angle` about the origin."""
    from scipy.interpolate import RegularGridInterpolator

    interp = RegularGridInterpolator((np.asarray(y), np.asarray(x)), intensity,
                                     bounds_error=False, fill_value=np.nan)
    X, Y = np.meshgrid(np.asarray(x), np.asarray(y))
    c, s = math.cos(angle), math.sin(angle)
    Xr = c * X - s * Y
    Yr = s * X + c * Y
    rot = interp(np.column_stack([Yr.ravel(), Xr.ravel()])).reshape(X.shape)
    ok = np.isfinite(rot)
    return correlation(intensity[ok], rot[ok])


# ---------------------------------------------------------------------------
# Portable outputs
# ---------------------------------------------------------------------------

def tone_map(intensity: np.ndarray, bits: int = 8, tone: str = "log",
             log_floor_db: float = -20.0) -> np.ndarray:
    """Map a non-negative intensity to integer gray levels.

    Linear maps [0, max] onto the full range; log maps decibels relative to
    the peak, clipped at `log_floor_db`.
    """
    if bits not in (8, 16):
        raise DomainError("bits must be 8 or 16")
    if tone not in ("linear", "log"):
        raise DomainError("tone must be 'linear' or 'log'")
    inten = np.asarray(intensity, dtype=float)
    if np.any(inten < 0):
        raise DomainError("intensity must be non-negative")
    peak = inten.max()
    maxval = (1 << bits) - 1
    if peak == 0:
        return np.zeros(inten.shape, dtype=np.uint16 if bits == 16 else np.uint8)
    if tone == "linear":
        scaled = inten / peak
    else:
        if log_floor_db >= 0:
            raise DomainError("log floor must be negative decibels")
        with np.errstate(divide="ignore"):
            db = 10.0 * np.log10(inten / peak)
        scaled = np.clip(1.0 - db / log_floor_db, 0.0, 1.0)
    levels = np.rint(scaled * maxval)
    return levels.astype(np.uint16 if bits == 16 else np.uint8)


def write_pgm(path, gray: np.ndarray) -> None:
    """Binary P5 graymap; 16-bit data is written most-significant byte first."""
    gray = np.asarray(gray)
    if gray.dtype == np.uint8:
        maxval = 255
        payload = gray.tobytes()
    elif gray.dtype == np.uint16:
        maxval = 65535
        payload = gray.astype(">u2").tobytes()
    else:
        raise DomainError("gray levels must be uint8 or uint16")
    header = f"P5\n{gray.shape[1]} {gray.shape[0]}\n{maxval}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def write_grid_txt(path, values: np.ndarray) -> None:
    """Row-major delimited text grid with locale-independent decimals."""
    np.savetxt(path, np.asarray(values, dtype=float), fmt="%.17e", delimiter="\t")


def read_grid_txt(path) -> np.ndarray:
    return np.loadtxt(path, delimiter="\t", ndmin=2)


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
