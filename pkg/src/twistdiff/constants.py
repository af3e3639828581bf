"""Physical constants (CODATA 2018) and unit factors.

Lengths are metres, times seconds, energies electron-volts unless a name
says otherwise.  Momenta are carried as pc in eV so that table-precision
arithmetic never leaves the eV system.
"""

import math

C_LIGHT = 299_792_458.0                 # m/s, exact
PLANCK_H = 6.626_070_15e-34             # J*s, exact
ELEMENTARY_CHARGE = 1.602_176_634e-19   # C, exact
HBAR = PLANCK_H / (2.0 * math.pi)       # J*s

# hc and hbar*c in eV*m, derived from the exact constants above
HC_EV_M = PLANCK_H * C_LIGHT / ELEMENTARY_CHARGE
HBARC_EV_M = HC_EV_M / (2.0 * math.pi)

# Rest energies, eV
ELECTRON_MC2_EV = 510_998.950_00
PROTON_MC2_EV = 938.272_088_16e6
ATOMIC_MASS_EV = 931.494_102_42e6
# Bare 12C nucleus: 12 u minus six electron masses (electronic binding,
# ~1 keV, is below the precision needed anywhere in the engine).
CARBON12_NUCLEUS_MC2_EV = 12.0 * ATOMIC_MASS_EV - 6.0 * ELECTRON_MC2_EV

# Unit multipliers for boundary-layer conversions
KEV = 1.0e3
MEV = 1.0e6
NM = 1.0e-9
UM = 1.0e-6
MM = 1.0e-3
CM = 1.0e-2
PM = 1.0e-12
PICOCOULOMB = 1.0e-12
