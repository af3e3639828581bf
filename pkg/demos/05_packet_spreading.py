"""Packet spreading and transverse coherence at the aperture.

A localized twisted packet must spread enough between source and aperture
to illuminate the mask coherently: the rms radius at the mask should cover
the effective aperture size.  This script tabulates Rayleigh lengths and
rms radii for the species and geometries used throughout, and evaluates the
coherence criterion for each.
"""

import math

from twistdiff import (
    CARBON12_6PLUS,
    ELECTRON,
    PROTON,
    LGPacket,
    coherence_ok,
    far_field_rms,
    kinematics_for,
    lg_width,
    rms_radius,
)

CASES = [
    # label, species, kinetic energy eV (per nucleon), sigma0, L, d_sa
    ("e- 100 keV", ELECTRON, 100e3, 10e-9, 400e-9, 0.04),
    ("e- 1 MeV", ELECTRON, 1e6, 10e-9, 400e-9, 0.08),
    ("e- 3 MeV", ELECTRON, 3e6, 10e-9, 400e-9, 0.15),
    ("H+ 1 MeV/u", PROTON, 1e6, 10e-12, 40e-9, 0.10),
    ("12C6+ 1 MeV/u", CARBON12_6PLUS, 1e6, 10e-12, 40e-9, 0.10),
]

print(f"{'case':14s} {'lambda pm':>10s} {'z_R':>10s} {'sigma(d_sa)':>12s} "
      f"{'rms(d_sa)':>10s} {'D=L/sqrt3':>10s} coherent")
for label, species, e_kin, sigma0, side, d_sa in CASES:
    kin = kinematics_for(species, e_kin)
    pkt = LGPacket(ell=5, n=3, sigma0=sigma0, kinematics=kin)
    d_eff = side / math.sqrt(3.0)
    print(f"{label:14s} {kin.wavelength_m*1e12:10.4f} "
          f"{pkt.rayleigh_length:10.3e} {lg_width(pkt, d_sa):12.3e} "
          f"{rms_radius(pkt, d_sa):10.3e} {d_eff:10.3e} "
          f"{coherence_ok(pkt, d_sa, d_eff)}")

print("\nfar-zone rms radius of free 1 MeV proton packets "
      "(sign of usable drift range):")
kin = kinematics_for(PROTON, 1e6)
for sigma0 in (1e-12, 10e-12):
    pkt = LGPacket(ell=0, n=0, sigma0=sigma0, kinematics=kin)
    for z in (0.02, 0.2):
        print(f"  sigma0 = {sigma0*1e12:4.1f} pm, z = {z:5.2f} m -> "
              f"rms = {far_field_rms(pkt, z)*1e6:7.1f} um")
