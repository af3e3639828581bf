"""Relativistic single-particle kinematics.

Momentum, de Broglie wavelength and mean speed from kinetic energy, using
the exact dispersion law E^2 = (pc)^2 + (mc^2)^2.  Ion kinetic energies are
quoted per nucleon and scaled by the mass number internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (
    C_LIGHT,
    CARBON12_NUCLEUS_MC2_EV,
    ELECTRON_MC2_EV,
    HC_EV_M,
    PROTON_MC2_EV,
)
from .errors import DomainError


@dataclass(frozen=True)
class ParticleSpecies:
    """Rest energy (eV), charge state Z and mass number A of a projectile."""

    name: str
    rest_energy_ev: float
    charge_state: int = 1
    mass_number: int = 1

    def __post_init__(self):
        if self.rest_energy_ev <= 0:
            raise DomainError("rest_energy_ev must be positive")
        if self.charge_state < 1:
            raise DomainError("charge_state must be >= 1")
        if self.mass_number < 1:
            raise DomainError("mass_number must be >= 1")


ELECTRON = ParticleSpecies("electron", ELECTRON_MC2_EV, charge_state=1, mass_number=1)
PROTON = ParticleSpecies("proton", PROTON_MC2_EV, charge_state=1, mass_number=1)
CARBON12_6PLUS = ParticleSpecies(
    "12C6+", CARBON12_NUCLEUS_MC2_EV, charge_state=6, mass_number=12
)

SPECIES = {s.name: s for s in (ELECTRON, PROTON, CARBON12_6PLUS)}


@dataclass(frozen=True)
class Kinematics:
    """Derived kinematic state of a monochromatic beam particle.

    `kinetic_energy_ev` is the total kinetic energy (already scaled by the
    mass number for ions); `pc_ev` is the momentum times c in eV.
    """

    species: ParticleSpecies
    kinetic_energy_ev: float
    pc_ev: float
    wavelength_m: float
    speed_m_s: float

    @property
    def wavenumber_m(self) -> float:
        """k = 2*pi/lambda = p/hbar, in 1/m."""
        return 2.0 * math.pi / self.wavelength_m


def momentum_from_kinetic(species: ParticleSpecies, kinetic_energy_ev: float) -> float:
    """Momentum (as pc in eV) from kinetic energy.

    For ions `kinetic_energy_ev` is energy per nucleon and is multiplied by
    the mass number.  (pc)^2 = T(T + 2 mc^2) with T the total kinetic energy.
    """
    if kinetic_energy_ev < 0:
        raise DomainError("kinetic energy must be non-negative")
    t = kinetic_energy_ev * species.mass_number
    return math.sqrt(t * (t + 2.0 * species.rest_energy_ev))


def de_broglie(pc_ev: float) -> float:
    """de Broglie wavelength 2*pi*hbar/p = hc/(pc), in metres."""
    if pc_ev <= 0:
        raise DomainError("momentum must be positive")
    return HC_EV_M / pc_ev


def kinematics_for(species: ParticleSpecies, kinetic_energy_ev: float) -> Kinematics:
    """Bundle momentum, wavelength and speed for a species at a kinetic energy."""
    pc = momentum_from_kinetic(species, kinetic_energy_ev)
    if pc == 0.0:
        raise DomainError("zero momentum: kinematics undefined at rest")
    t = kinetic_energy_ev * species.mass_number
    e_total = t + species.rest_energy_ev
    return Kinematics(
        species=species,
        kinetic_energy_ev=t,
        pc_ev=pc,
        wavelength_m=de_broglie(pc),
        speed_m_s=C_LIGHT * pc / e_total,
    )
