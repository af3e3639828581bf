"""Beamline design: optimal geometry at a fixed detector pitch.

Fixing the detector-lattice pitch and a far-field safety margin C pins the
aperture side at L = sqrt(3)/(2C) * pitch; the drift distance then follows
from the pitch rule and grows with beam energy.  Node brightness at the
optimum is 3/(4 C^2), independent of wavelength.  This script prints the
optimization tables, a survey of representative geometries, and the count
budget of a 1 pC, 1 Hz source.
"""

from twistdiff import (
    CARBON12_6PLUS,
    ELECTRON,
    PROTON,
    BeamBudget,
    generate_design_table,
    node_intensity_at_pitch,
    optimize_geometry,
    time_to_counts,
    total_rate,
)
from twistdiff.design import (
    DesignConstraint,
    geometry_table_text,
    optimization_table_text,
)
from twistdiff.kinematics import kinematics_for

print("electron optimization table (C = 10):")
print(optimization_table_text(ELECTRON, [1e-6, 2.5e-6, 5e-6],
                              [0.1e6, 1e6, 3e6]))
print("proton optimization table (C = 10):")
print(optimization_table_text(PROTON, [0.5e-6, 1e-6, 2e-6], [1e6]))

lam = kinematics_for(ELECTRON, 1e6).wavelength_m
L, _ = optimize_geometry(DesignConstraint(1e-6, lam, 10.0))
print(f"optimized node brightness L^2/pitch^2 = "
      f"{node_intensity_at_pitch(L, 1e-6):.6f} = 3/(4*10^2), "
      f"independent of energy\n")

rows = generate_design_table([
    (PROTON, 1e6, 10e-12, 40e-9, 0.10, 2.0),
    (PROTON, 1e6, 10e-12, 200e-9, 1.00, 2.0),
    (CARBON12_6PLUS, 1e6, 10e-12, 40e-9, 0.10, 2.0),
    (ELECTRON, 100e3, 10e-9, 400e-9, 0.04, 0.2),
    (ELECTRON, 1e6, 10e-9, 400e-9, 0.08, 1.0),
    (ELECTRON, 3e6, 10e-9, 400e-9, 0.15, 2.0),
])
print("representative geometries:")
print(geometry_table_text(rows))

print("count budget at 1 pC, 1 Hz, acceptance 1e-4:")
for eta in (0.20, 0.15):
    rate = total_rate(BeamBudget(1e-12, 1.0, eta), 1e-4)
    print(f"  efficiency {eta:.2f}: rate = {rate:6.1f} 1/s, "
          f"1e5 events in {time_to_counts(1e5, rate)/60:5.1f} min")
