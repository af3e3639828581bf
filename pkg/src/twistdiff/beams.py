"""Incident twisted fields: ideal Bessel modes and Laguerre-Gaussian packets.

Both families carry orbital angular momentum ell through the helical phase
exp(i*ell*phi).  Bessel modes are exact non-normalizable free modes with a
sharp transverse momentum; LG packets are unit-norm wave packets whose
width, Gouy phase and rms radius evolve with propagation distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, jv

from .errors import DomainError, PreconditionError
from .kinematics import Kinematics


@dataclass(frozen=True)
class BesselBeam:
    """J_|ell|(kappa*rho) e^{i ell phi} e^{i k_z z} with kappa = p_perp/hbar."""

    ell: int
    kappa: float  # transverse wavenumber, 1/m
    k_z: float    # longitudinal wavenumber, 1/m
    paraxial_limit: float = 0.1

    def __post_init__(self):
        if self.kappa <= 0 or self.k_z <= 0:
            raise DomainError("kappa and k_z must be positive")
        if self.kappa / self.k_z >= self.paraxial_limit:
            raise PreconditionError(
                f"kappa/k_z = {self.kappa / self.k_z:.3g} exceeds the paraxial "
                f"limit {self.paraxial_limit}"
            )

    @property
    def k(self) -> float:
        """Total wavenumber sqrt(kappa^2 + k_z^2)."""
        return math.hypot(self.kappa, self.k_z)

    def field(self, rho, phi, z=0.0):
        return bessel_field(self, rho, phi, z)

    def field_xy(self, x, y, z=0.0):
        return bessel_field(self, np.hypot(x, y), np.arctan2(y, x), z)


def bessel_beam_from_kinematics(ell: int, p_perp_ev: float, kin: Kinematics,
                                paraxial_limit: float = 0.1) -> BesselBeam:
    """Build a Bessel mode from a transverse momentum quoted as p_perp*c in eV."""
    from .constants import HBARC_EV_M

    kappa = p_perp_ev / HBARC_EV_M
    k = kin.wavenumber_m
    if kappa >= k:
        raise DomainError("transverse momentum exceeds total momentum")
    return BesselBeam(ell=ell, kappa=kappa, k_z=math.sqrt(k * k - kappa * kappa),
                      paraxial_limit=paraxial_limit)


def bessel_field(beam: BesselBeam, rho, phi, z=0.0):
    """Evaluate the Bessel mode; total on rho >= 0."""
    rho = np.asarray(rho, dtype=float)
    return jv(abs(beam.ell), beam.kappa * rho) * np.exp(
        1j * (beam.ell * np.asarray(phi) + beam.k_z * z)
    )


@dataclass(frozen=True)
class CustomProfile:
    """Arbitrary transverse profile at fixed wavenumber.

    Covers inputs outside the two standard families: plane waves, scaled
    fields, superpositions of opposite-ell modes, and the like.  `profile`
    maps cartesian aperture coordinates (x, y) to a complex amplitude.
    """

    profile: object
    k: float
    k_z: float

    def field_xy(self, x, y, z=0.0):
        out = np.asarray(self.profile(x, y), dtype=complex)
        return out * np.exp(1j * self.k_z * z) if z else out


def plane_wave(k: float) -> CustomProfile:
    """Uniform unit-amplitude illumination at wavenumber k."""
    return CustomProfile(profile=lambda x, y: np.ones_like(np.asarray(x), dtype=complex),
                         k=k, k_z=k)


@dataclass(frozen=True)
class LGPacket:
    """Unit-norm Laguerre-Gaussian packet with OAM ell and radial index n.

    sigma0 is the initial transverse width sigma_perp(0) in metres.  The
    Rayleigh length is z_R = 2*pi*sigma0^2/lambda_dB = k*sigma0^2; spreading
    is expressed everywhere through z/z_R, with z = <u>*t mapping time to
    drift distance.
    """

    ell: int
    n: int
    sigma0: float
    kinematics: Kinematics
    paraxial_factor: float = 10.0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("radial index n must be >= 0")
        if self.sigma0 <= 0:
            raise DomainError("sigma0 must be positive")
        lam = self.kinematics.wavelength_m
        if self.sigma0 <= self.paraxial_factor * lam:
            raise PreconditionError(
                f"sigma0 = {self.sigma0:.3g} m is not paraxial: needs sigma0 > "
                f"{self.paraxial_factor:g} * lambda_dB = "
                f"{self.paraxial_factor * lam:.3g} m"
            )

    @property
    def quality_factor(self) -> int:
        """M = 2n + |ell| + 1."""
        return 2 * self.n + abs(self.ell) + 1

    @property
    def rayleigh_length(self) -> float:
        """z_R = 2*pi*sigma0^2 / lambda_dB, in metres."""
        return 2.0 * math.pi * self.sigma0**2 / self.kinematics.wavelength_m

    @property
    def norm_constant(self) -> float:
        """Plane normalization sqrt(n!/(pi (n+|ell|)!)); makes the 2D norm 1."""
        ratio = 1.0
        for j in range(self.n + 1, self.n + abs(self.ell) + 1):
            ratio /= j
        return math.sqrt(ratio / math.pi)

    def field(self, rho, phi, z=0.0):
        return lg_field(self, rho, phi, z)

    def field_xy(self, x, y, z=0.0):
        return lg_field(self, np.hypot(x, y), np.arctan2(y, x), z)


def lg_width(packet: LGPacket, z: float) -> float:
    """sigma_perp(z) = sigma0 * sqrt(1 + (z/z_R)^2)."""
    if z < 0:
        raise DomainError("z must be non-negative")
    return packet.sigma0 * math.sqrt(1.0 + (z / packet.rayleigh_length) ** 2)


def gouy_phase(packet: LGPacket, z: float) -> float:
    """M * arctan(z/z_R)."""
    if z < 0:
        raise DomainError("z must be non-negative")
    return packet.quality_factor * math.atan(z / packet.rayleigh_length)


def lg_field(packet: LGPacket, rho, phi, z=0.0):
    """Full LG amplitude at drift distance z (z >= 0).

    Product of the plane normalization, rho^|ell| / sigma(z)^(|ell|+1), the
    associated Laguerre polynomial in rho^2/sigma^2(z), the helical phase,
    the chirped Gaussian exp[-(rho^2/2 sigma^2)(1 - i z/z_R)] and the Gouy
    factor exp[-i M arctan(z/z_R)].  The 2D norm equals 1 at every z.
    """
    if z < 0:
        raise DomainError("z must be non-negative")
    rho = np.asarray(rho, dtype=float)
    aell = abs(packet.ell)
    sig = lg_width(packet, z)
    zeta = z / packet.rayleigh_length
    u = (rho / sig) ** 2
    radial = (
        packet.norm_constant
        * rho**aell
        / sig ** (aell + 1)
        * eval_genlaguerre(packet.n, aell, u)
    )
    return radial * np.exp(
        -0.5 * u * (1.0 - 1j * zeta)
        + 1j * (packet.ell * np.asarray(phi) - gouy_phase(packet, z))
    )


def rms_radius(packet: LGPacket, z: float) -> float:
    """sqrt(<rho^2>) = sigma_perp(z) * sqrt(M)."""
    return lg_width(packet, z) * math.sqrt(packet.quality_factor)


def far_field_rms(packet: LGPacket, z: float, min_ratio: float = 10.0) -> float:
    """Far-zone rms radius z*lambda*M / (2*pi*sqrt(<rho^2>(0))).

    Valid for z >> z_R; refuses below `min_ratio` Rayleigh lengths.
    """
    if z <= min_ratio * packet.rayleigh_length:
        raise PreconditionError(
            f"z = {z:.3g} m is not in the far field (needs z > {min_ratio:g} "
            f"* z_R = {min_ratio * packet.rayleigh_length:.3g} m)"
        )
    lam = packet.kinematics.wavelength_m
    return z * lam * packet.quality_factor / (2.0 * math.pi * rms_radius(packet, 0.0))


def coherence_ok(packet: LGPacket, d_sa: float, aperture_size: float) -> bool:
    """True if the packet's rms radius at the aperture covers the aperture.

    `d_sa` is the source-aperture distance, `aperture_size` the effective
    aperture size D; the criterion is sqrt(<rho^2>)(d_sa) >= D.
    """
    if d_sa < 0:
        raise DomainError("d_sa must be non-negative")
    if aperture_size <= 0:
        raise DomainError("aperture size must be positive")
    return rms_radius(packet, d_sa) >= aperture_size
