"""Mask geometry and the analytic spectrum of a triangular aperture.

The closed rational form of the triangle Fourier amplitude,

    A~(k) = J e^{-i k.v0} [a e^{-ib} - b e^{-ia} - (a-b)] / (a b (a-b)),

with a = k.e1, b = k.e2, has removable singularities on the three lines
a = 0, b = 0, a = b and at the origin.  In double precision the rational
form loses roughly eps/|small factor| digits near those lines, so the
evaluation switches to series/limit branches there; all branches agree to
machine precision at the switch boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError

_SQRT3 = math.sqrt(3.0)
# series branch near the origin / singular lines
_ORIGIN_RADIUS = 0.8
_LINE_TOL = 1.0e-4
_SERIES_TERMS = 30
_FACTORIALS = [math.factorial(n) for n in range(_SERIES_TERMS + 3)]


@dataclass(frozen=True)
class CircleAperture:
    """Open disk of radius a centred at `center`."""

    radius: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.radius <= 0:
            raise GeometryError("circle radius must be positive")

    def signed_distance(self, x, y):
        return np.hypot(np.asarray(x) - self.center[0],
                        np.asarray(y) - self.center[1]) - self.radius

    @property
    def bounding_radius(self) -> float:
        return self.radius

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


@dataclass(frozen=True)
class TriangleAperture:
    """Filled triangle with vertices v0, v1, v2 (any non-degenerate shape)."""

    v0: tuple
    v1: tuple
    v2: tuple

    def __post_init__(self):
        if self.jacobian <= 0:
            raise GeometryError("degenerate triangle")

    @classmethod
    def equilateral(cls, side: float, center=(0.0, 0.0), orientation: float = 0.0):
        """Equilateral triangle of the given side, centroid at `center`.

        Default orientation puts v0 on the +y axis relative to the centroid;
        `orientation` rotates the whole triangle (radians, CCW).
        """
        if side <= 0:
            raise GeometryError("side must be positive")
        r = side / _SQRT3  # circumradius
        # exact mirror pairs in floating point keep the sampled mask
        # symmetric about the axis through v0
        base = ((0.0, r), (-0.5 * side, -0.5 * r), (0.5 * side, -0.5 * r))
        c, s = math.cos(orientation), math.sin(orientation)
        cx, cy = center
        v = [(cx + c * bx - s * by, cy + s * bx + c * by) for bx, by in base]
        tri = cls(*v)
        lengths = (np.hypot(*tri.e1), np.hypot(*tri.e2),
                   np.hypot(tri.e1[0] - tri.e2[0], tri.e1[1] - tri.e2[1]))
        assert all(abs(l - side) <= 1e-12 * side for l in lengths)
        return tri

    @property
    def e1(self):
        return (self.v1[0] - self.v0[0], self.v1[1] - self.v0[1])

    @property
    def e2(self):
        return (self.v2[0] - self.v0[0], self.v2[1] - self.v0[1])

    @property
    def jacobian(self) -> float:
        """|e1 x e2|, twice the area."""
        e1, e2 = self.e1, self.e2
        return abs(e1[0] * e2[1] - e1[1] * e2[0])

    @property
    def area(self) -> float:
        return 0.5 * self.jacobian

    @property
    def centroid(self):
        return ((self.v0[0] + self.v1[0] + self.v2[0]) / 3.0,
                (self.v0[1] + self.v1[1] + self.v2[1]) / 3.0)

    @property
    def bounding_radius(self) -> float:
        cx, cy = self.centroid
        return max(math.hypot(v[0] - cx, v[1] - cy)
                   for v in (self.v0, self.v1, self.v2))

    def signed_distance(self, x, y):
        """Distance to the boundary, negative inside."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        verts = (self.v0, self.v1, self.v2)
        dmin = None
        inside = None
        # orientation sign of the vertex loop
        e1, e2 = self.e1, self.e2
        orient = math.copysign(1.0, e1[0] * e2[1] - e1[1] * e2[0])
        for i in range(3):
            px, py = verts[i]
            qx, qy = verts[(i + 1) % 3]
            ex, ey = qx - px, qy - py
            # distance to the segment
            t = np.clip(((x - px) * ex + (y - py) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
            d = np.hypot(x - (px + t * ex), y - (py + t * ey))
            dmin = d if dmin is None else np.minimum(dmin, d)
            side = orient * (ex * (y - py) - ey * (x - px)) >= 0
            inside = side if inside is None else (inside & side)
        return np.where(inside, -dmin, dmin)


def transmission(aperture, x, y, smoothing_width: float = 0.0):
    """Mask transmission in [0, 1]: 1 inside, 0 outside.

    For smoothing_width w > 0 the hard edge becomes the ramp
    0.5*(1 - tanh(d/w)) on the signed boundary distance d (positive outside),
    so a point exactly on the edge transmits 0.5.
    """
    if smoothing_width < 0:
        raise DomainError("smoothing_width must be >= 0")
    d = aperture.signed_distance(x, y)
    if smoothing_width == 0.0:
        return np.where(d < 0, 1.0, np.where(d > 0, 0.0, 0.5))
    return 0.5 * (1.0 - np.tanh(d / smoothing_width))


# ---------------------------------------------------------------------------
# Simplex phase integral F(a, b) = int_0^1 ds int_0^{1-s} dt e^{-i(a s + b t)}
# ---------------------------------------------------------------------------

def _poly_int(p: int, g):
    """I_p = int_0^1 u^p e^{i g u} du by forward recurrence; needs |g| >~ 0.8."""
    g = np.asarray(g, dtype=complex)
    e = np.exp(1j * g)
    out = (e - 1.0) / (1j * g)
    for q in range(1, p + 1):
        out = (e - q * out) / (1j * g)
    return out


def _f_rational(a, b):
    return (a * np.exp(-1j * b) - b * np.exp(-1j * a) - (a - b)) / (a * b * (a - b))


def _f_origin_series(a, b):
    # F = sum_n (-i)^n h_n(a,b) / (n+2)!  with h_n the complete homogeneous
    # symmetric polynomial, built by the cancellation-free recurrence
    # h_n = a*h_{n-1} + b^n.
    h = np.ones_like(a)
    out = h / 2.0
    bn = np.ones_like(b)
    coef = -1j
    for n in range(1, _SERIES_TERMS + 1):
        bn = bn * b
        h = a * h + bn
        out = out + coef * h / _FACTORIALS[n + 2]
        coef = coef * (-1j)
    return out

def _f_small_b(a, b, mmax=4):
    # |b| small, |a| away from zero: expand the inner integral in b.
    out = np.zeros_like(a)
    ea = np.exp(-1j * a)
    for m in range(mmax + 1):
        out = out + (-1j * b) ** m / _FACTORIALS[m + 1] * (ea * _poly_int(m + 1, a))
    return out


def _f_near_diagonal(a, b, mmax=4):
    # |a - b| small, both away from zero: expand in delta = a - b.
    d = a - b
    out = np.zeros_like(a)
    for m in range(mmax + 1):
        out = out + (1j * d) ** m / (_FACTORIALS[m] * (m + 1)) * _poly_int(m + 1, -a)
    return out


def _simplex_phase_integral(alpha, beta):
    a = np.asarray(alpha, dtype=complex)
    b = np.asarray(beta, dtype=complex)
    out = np.empty(np.broadcast(a, b).shape, dtype=complex)
    a, b = np.broadcast_arrays(a, b)

    near_origin = (np.abs(a) <= _ORIGIN_RADIUS) & (np.abs(b) <= _ORIGIN_RADIUS)
    small_b = ~near_origin & (np.abs(b) < _LINE_TOL)
    small_a = ~near_origin & ~small_b & (np.abs(a) < _LINE_TOL)
    near_diag = ~near_origin & ~small_b & ~small_a & (np.abs(a - b) < _LINE_TOL)
    generic = ~(near_origin | small_b | small_a | near_diag)

    if near_origin.any():
        out[near_origin] = _f_origin_series(a[near_origin], b[near_origin])
    if small_b.any():
        out[small_b] = _f_small_b(a[small_b], b[small_b])
    if small_a.any():
        # F is symmetric in (a, b): the simplex is invariant under s <-> t
        out[small_a] = _f_small_b(b[small_a], a[small_a])
    if near_diag.any():
        out[near_diag] = _f_near_diagonal(a[near_diag], b[near_diag])
    if generic.any():
        out[generic] = _f_rational(a[generic], b[generic])
    return out


def triangle_ft(tri: TriangleAperture, k):
    """Analytic Fourier amplitude of the filled triangle at wave vector(s) k.

    `k` has shape (..., 2) in 1/length; returns a complex array of shape
    (...).  The DC value equals the triangle area.
    """
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 1
    k = np.atleast_2d(k)
    e1, e2 = tri.e1, tri.e2
    alpha = k[..., 0] * e1[0] + k[..., 1] * e1[1]
    beta = k[..., 0] * e2[0] + k[..., 1] * e2[1]
    phase = np.exp(-1j * (k[..., 0] * tri.v0[0] + k[..., 1] * tri.v0[1]))
    out = tri.jacobian * phase * _simplex_phase_integral(alpha, beta)
    return out[0] if scalar else out


def triangle_ft_bruteforce(tri: TriangleAperture, k, n_points: int = 64):
    """Gauss-Legendre quadrature of the triangle Fourier integral.

    Tensor rule on the simplex parameterization r(s, t) = v0 + s e1 + t e2
    with t = (1-s) u; independent of the closed form, used as its oracle.
    """
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 1
    k = np.atleast_2d(k)

    xs, ws = np.polynomial.legendre.leggauss(n_points)
    s = 0.5 * (xs + 1.0)
    w = 0.5 * ws
    snodes = s[:, None]
    unodes = s[None, :]
    weights = (w[:, None] * w[None, :]) * (1.0 - snodes)
    t = (1.0 - snodes) * unodes
    rx = tri.v0[0] + snodes * tri.e1[0] + t * tri.e2[0]
    ry = tri.v0[1] + snodes * tri.e1[1] + t * tri.e2[1]

    phases = np.exp(-1j * (k[..., 0, None] * rx.ravel() + k[..., 1, None] * ry.ravel()))
    out = tri.jacobian * (phases @ weights.ravel())
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Reciprocal lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReciprocalBasis:
    """G1, G2 with e_i . G_j = 2*pi*delta_ij."""

    G1: tuple
    G2: tuple


def reciprocal_basis(tri: TriangleAperture) -> ReciprocalBasis:
    """Solve e_i . G_j = 2*pi*delta_ij for the triangle's edge vectors."""
    e = np.array([tri.e1, tri.e2], dtype=float)
    det = e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]
    if abs(det) < 1e-300:
        raise GeometryError("degenerate triangle has no reciprocal basis")
    g = 2.0 * math.pi * np.linalg.inv(e)
    return ReciprocalBasis(G1=(g[0, 0], g[1, 0]), G2=(g[0, 1], g[1, 1]))


def highlighted_nodes(basis: ReciprocalBasis, ell: int):
    """Reciprocal-lattice nodes emphasized by a vortex of charge ell.

    Returns all (m, n, k) with m, n >= 0, m + n <= |ell| and
    k = m G1 + n G2; the list has (|ell|+1)(|ell|+2)/2 entries.  For
    ell < 0 the lattice indices are mirrored (m, n) -> (n, m), which is the
    reflection about the triangle's symmetry axis through v0 expressed in the
    reciprocal basis; the far-field pattern flips accordingly.
    """
    g1 = np.asarray(basis.G1)
    g2 = np.asarray(basis.G2)
    nodes = []
    for m in range(abs(ell) + 1):
        for n in range(abs(ell) + 1 - m):
            if ell >= 0:
                nodes.append((m, n, tuple(m * g1 + n * g2)))
            else:
                nodes.append((n, m, tuple(n * g1 + m * g2)))
    return nodes


def detector_pitch(side: float, wavelength: float, z: float) -> float:
    """Detector-plane lattice step 2*lambda*z / (sqrt(3)*L)."""
    if side <= 0 or wavelength <= 0 or z <= 0:
        raise DomainError("side, wavelength and z must be positive")
    return 2.0 * wavelength * z / (_SQRT3 * side)
