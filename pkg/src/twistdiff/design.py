"""Feasibility and optimization calculators for the beamline geometry.

Fixing the detector-lattice pitch and a far-field safety margin C turns the
aperture side and drift distance into a one-parameter family; node
brightness grows monotonically with the side, so the optimum sits on the
far-field boundary:

    L_opt = sqrt(3)/(2 C) * pitch,    z_opt = 3/(4 C) * pitch^2 / lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .aperture import detector_pitch
from .beams import LGPacket, coherence_ok
from .errors import DomainError
from .kinematics import ParticleSpecies, kinematics_for

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DesignConstraint:
    """Target lattice pitch (m), far-field margin C and wavelength (m)."""

    pitch: float
    wavelength: float
    safety_margin: float = 10.0

    def __post_init__(self):
        if self.pitch <= 0 or self.wavelength <= 0:
            raise DomainError("pitch and wavelength must be positive")
        if self.safety_margin < 1:
            raise DomainError("safety margin must be >= 1")


def fraunhofer_distance(aperture_size: float, wavelength: float) -> float:
    """Far-field crossover z_F = D^2 / lambda."""
    if aperture_size <= 0 or wavelength <= 0:
        raise DomainError("aperture size and wavelength must be positive")
    return aperture_size**2 / wavelength


def triangle_fraunhofer_distance(side: float, wavelength: float) -> float:
    """z_F for an equilateral triangle with effective size D = L/sqrt(3)."""
    return fraunhofer_distance(side / _SQRT3, wavelength)


def optimize_geometry(constraint: DesignConstraint):
    """(L_opt, z_opt) maximizing node brightness at fixed pitch.

    Consistency is asserted on output: the pitch relation reproduces the
    requested pitch exactly, and z_opt sits on the far-field boundary
    z = C * L^2 / lambda.
    """
    c = constraint.safety_margin
    lam = constraint.wavelength
    L_opt = _SQRT3 / (2.0 * c) * constraint.pitch
    z_opt = 3.0 / (4.0 * c) * constraint.pitch**2 / lam
    assert abs(detector_pitch(L_opt, lam, z_opt) / constraint.pitch - 1.0) < 1e-12
    assert abs(z_opt * lam / (c * L_opt**2) - 1.0) < 1e-12
    return L_opt, z_opt


def node_intensity(side: float, z: float, wavelength: float) -> float:
    """Relative node brightness L^4 / (lambda^2 z^2) (common scale arbitrary)."""
    if side <= 0 or z <= 0 or wavelength <= 0:
        raise DomainError("side, z and wavelength must be positive")
    return side**4 / (wavelength**2 * z**2)


def node_intensity_at_pitch(side: float, pitch: float) -> float:
    """Fixed-pitch form of the node brightness, L^2 / pitch^2."""
    if side <= 0 or pitch <= 0:
        raise DomainError("side and pitch must be positive")
    return (side / pitch) ** 2


@dataclass(frozen=True)
class DesignRow:
    """One evaluated beamline geometry (all lengths in metres)."""

    species: ParticleSpecies
    kinetic_energy_ev: float  # per nucleon for ions
    sigma0: float
    side: float
    d_sa: float
    z: float
    wavelength: float
    pitch: float
    p_min: float
    image_size: float
    z_fraunhofer: float
    coherent: bool

    def __post_init__(self):
        assert self.p_min <= self.pitch / 3.0 * (1 + 1e-12)


def design_row(species: ParticleSpecies, kinetic_energy_ev: float, sigma0: float,
               side: float, d_sa: float, z: float,
               reference_ell: int = 5, reference_n: int = 3) -> DesignRow:
    """Evaluate pitch, sampling and coherence for one geometry.

    The image size is the bounding box of the highlighted nodes for the
    reference |ell| plus one pitch of margin, (|ell|+1)*pitch.  Coherence
    uses an LG packet with the reference indices and the effective aperture
    size D = L/sqrt(3).
    """
    kin = kinematics_for(species, kinetic_energy_ev)
    lam = kin.wavelength_m
    pitch = detector_pitch(side, lam, z)
    packet = LGPacket(ell=reference_ell, n=reference_n, sigma0=sigma0, kinematics=kin)
    return DesignRow(
        species=species,
        kinetic_energy_ev=kinetic_energy_ev,
        sigma0=sigma0,
        side=side,
        d_sa=d_sa,
        z=z,
        wavelength=lam,
        pitch=pitch,
        p_min=pitch / 3.0,
        image_size=(abs(reference_ell) + 1) * pitch,
        z_fraunhofer=triangle_fraunhofer_distance(side, lam),
        coherent=coherence_ok(packet, d_sa, side / _SQRT3),
    )


def generate_design_table(rows) -> list:
    """DesignRow list for (species, E_kin_ev, sigma0, L, d_sa, z) tuples."""
    return [design_row(*row) for row in rows]


def optimization_table_text(species: ParticleSpecies, pitches_m, energies_ev,
                            safety_margin: float = 10.0) -> str:
    """Delimited optimization table, one row per pitch.

    Columns: pitch (um), L_opt (nm), then z_opt (m) for each energy.
    """
    head = ["pitch_um", "L_opt_nm"]
    head += [f"z_opt_m_at_{e / 1e6:g}MeV" for e in energies_ev]
    lines = ["\t".join(head)]
    for pitch in pitches_m:
        cells = None
        for e in energies_ev:
            kin = kinematics_for(species, e)
            L_opt, z_opt = optimize_geometry(
                DesignConstraint(pitch, kin.wavelength_m, safety_margin))
            if cells is None:
                cells = [f"{pitch / 1e-6:.2f}", f"{L_opt / 1e-9:.2f}"]
            cells.append(f"{z_opt:.2f}")
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def geometry_table_text(rows) -> str:
    """Delimited geometry table matching the design-table column order.

    Columns: species, E_kin (per nucleon, eV), sigma0 (m), L (nm),
    d_sa (cm), z (m), image size (um), pitch (um), p_min (um).
    """
    head = ("species", "E_kin_ev_per_u", "sigma0_m", "L_nm", "d_sa_cm", "z_m",
            "image_um", "pitch_um", "p_min_um")
    lines = ["\t".join(head)]
    for r in rows:
        lines.append("\t".join((
            r.species.name,
            f"{r.kinetic_energy_ev:g}",
            f"{r.sigma0:g}",
            f"{r.side / 1e-9:.0f}",
            f"{r.d_sa / 1e-2:.1f}",
            f"{r.z:.1f}",
            f"{r.image_size / 1e-6:.2f}",
            f"{r.pitch / 1e-6:.2f}",
            f"{r.p_min / 1e-6:.2f}",
        )))
    return "\n".join(lines) + "\n"
