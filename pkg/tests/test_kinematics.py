import math

import numpy as np
import pytest

from twistdiff import (
    CARBON12_6PLUS,
    ELECTRON,
    PROTON,
    ParticleSpecies,
    de_broglie,
    kinematics_for,
    momentum_from_kinetic,
)
from twistdiff.constants import C_LIGHT, HC_EV_M
from twistdiff.errors import DomainError


def closed_form_pc(e_kin, mc2, a=1):
    # independent oracle: sqrt(E(E + 2 mc^2)) with E the total kinetic energy
    t = e_kin * a
    return math.sqrt(t * (t + 2.0 * mc2))


def test_electron_100kev_momentum():
    pc = momentum_from_kinetic(ELECTRON, 100e3)
    assert pc == pytest.approx(closed_form_pc(100e3, 0.51099895e6), rel=1e-14)
    assert pc / 1e6 == pytest.approx(0.3350, abs=5e-4)


def test_zero_kinetic_energy_is_rest():
    for sp in (ELECTRON, PROTON, CARBON12_6PLUS):
        assert momentum_from_kinetic(sp, 0.0) == 0.0


def test_proton_1mev_momentum():
    pc = momentum_from_kinetic(PROTON, 1e6)
    assert pc == pytest.approx(closed_form_pc(1e6, 938.272e6), rel=1e-5)
    assert pc / 1e6 == pytest.approx(43.33, abs=0.005)


def test_ion_energy_is_per_nucleon():
    pc = momentum_from_kinetic(CARBON12_6PLUS, 1e6)
    assert pc == pytest.approx(
        closed_form_pc(1e6, CARBON12_6PLUS.rest_energy_ev, a=12), rel=1e-14
    )


def test_negative_energy_rejected():
    with pytest.raises(DomainError):
        momentum_from_kinetic(ELECTRON, -1.0)


def test_de_broglie_examples():
    pc100 = momentum_from_kinetic(ELECTRON, 100e3)
    assert de_broglie(pc100) * 1e12 == pytest.approx(3.70, abs=0.005)
    pc1m = momentum_from_kinetic(ELECTRON, 1e6)
    assert de_broglie(pc1m) * 1e12 == pytest.approx(0.872, abs=0.001)
    # definition inversion: pc equal to hc per nm gives 1 nm
    assert de_broglie(HC_EV_M / 1e-9) == pytest.approx(1e-9, rel=1e-15)


def test_de_broglie_rejects_nonpositive():
    for bad in (0.0, -5.0):
        with pytest.raises(DomainError):
            de_broglie(bad)


def test_nonrelativistic_limit():
    e_kin = 1e-6 * ELECTRON.rest_energy_ev
    pc = momentum_from_kinetic(ELECTRON, e_kin)
    pc_classical = math.sqrt(2.0 * ELECTRON.rest_energy_ev * e_kin)
    assert abs(pc - pc_classical) / pc < 1e-3


def test_wavelength_monotonic_in_energy():
    energies = np.logspace(3, 7, 40)
    lams = [kinematics_for(ELECTRON, e).wavelength_m for e in energies]
    assert all(a > b for a, b in zip(lams, lams[1:]))


def test_round_trip_matches_direct_formula():
    for e_kin in (1e3, 1e5, 1e6, 5e6):
        lam = de_broglie(momentum_from_kinetic(ELECTRON, e_kin))
        direct = HC_EV_M / closed_form_pc(e_kin, ELECTRON.rest_energy_ev)
        assert lam == pytest.approx(direct, rel=1e-14)


def test_mean_speed_below_c():
    for e_kin in (1e3, 1e6, 1e9):
        kin = kinematics_for(ELECTRON, e_kin)
        assert 0 < kin.speed_m_s < C_LIGHT


def test_species_invariants():
    with pytest.raises(DomainError):
        ParticleSpecies("bad", -1.0)
    with pytest.raises(DomainError):
        ParticleSpecies("bad", 1.0, charge_state=0)


def test_wavenumber_consistent():
    kin = kinematics_for(ELECTRON, 1e5)
    assert kin.wavenumber_m == pytest.approx(2 * math.pi / kin.wavelength_m, rel=1e-15)
