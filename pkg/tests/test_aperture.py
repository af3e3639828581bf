import math

import numpy as np
import pytest

from twistdiff import (
    CircleAperture,
    TriangleAperture,
    detector_pitch,
    highlighted_nodes,
    kinematics_for,
    reciprocal_basis,
    transmission,
    triangle_ft,
    triangle_ft_bruteforce,
)
from twistdiff import ELECTRON, PROTON, momentum_from_kinetic, de_broglie
from twistdiff.aperture import _simplex_phase_integral, _f_rational
from twistdiff.errors import DomainError, GeometryError

TRI = TriangleAperture.equilateral(1.0)
SQ3 = math.sqrt(3.0)


def random_k(rng, n, tri=TRI, kmax=20.0):
    """Wave vectors with |k.e1|, |k.e2| <= kmax."""
    out = []
    while len(out) < n:
        k = rng.uniform(-2 * kmax, 2 * kmax, size=2)
        a = k @ np.asarray(tri.e1)
        b = k @ np.asarray(tri.e2)
        if abs(a) <= kmax and abs(b) <= kmax:
            out.append(k)
    return np.asarray(out)


# ---------------------------------------------------------------------------
# Geometry and transmission
# ---------------------------------------------------------------------------

def test_equilateral_constructor():
    tri = TriangleAperture.equilateral(400e-9)
    assert tri.area == pytest.approx(SQ3 / 4 * (400e-9) ** 2, rel=1e-12)
    assert np.allclose(tri.centroid, (0.0, 0.0), atol=1e-22)
    # default orientation: one vertex on the +y axis
    assert tri.v0[0] == pytest.approx(0.0, abs=1e-22)
    assert tri.v0[1] > 0


def test_degenerate_triangle_rejected():
    with pytest.raises(GeometryError):
        TriangleAperture((0, 0), (1, 1), (2, 2))


def test_transmission_hard_edge():
    assert transmission(TRI, *TRI.centroid, 0.0) == 1.0
    assert transmission(TRI, 10.0, 10.0, 0.0) == 0.0
    disk = CircleAperture(0.5)
    assert transmission(disk, 0.1, 0.0, 0.0) == 1.0
    assert transmission(disk, 0.6, 0.0, 0.0) == 0.0


def test_transmission_ramp_midpoint_on_edge():
    # midpoint of the edge v1-v2 lies on the boundary
    mid = (0.5 * (TRI.v1[0] + TRI.v2[0]), 0.5 * (TRI.v1[1] + TRI.v2[1]))
    assert transmission(TRI, mid[0], mid[1], 0.01) == pytest.approx(0.5, abs=1e-12)
    disk = CircleAperture(0.5)
    assert transmission(disk, 0.5, 0.0, 0.03) == pytest.approx(0.5, abs=1e-12)


def test_signed_distance_sign():
    d_in = TRI.signed_distance(*TRI.centroid)
    d_out = TRI.signed_distance(5.0, 0.0)
    assert d_in < 0 < d_out


# ---------------------------------------------------------------------------
# Analytic spectrum vs brute force
# ---------------------------------------------------------------------------

def test_dc_value_is_area():
    assert triangle_ft(TRI, [0.0, 0.0]) == pytest.approx(TRI.area, rel=1e-12)
    skew = TriangleAperture((0.1, -0.2), (1.3, 0.4), (0.2, 1.7))
    assert triangle_ft(skew, [0.0, 0.0]) == pytest.approx(skew.area, rel=1e-12)


def test_brute_force_dc_exact():
    for n in (2, 8, 64):
        assert triangle_ft_bruteforce(TRI, [0.0, 0.0], n) == pytest.approx(
            TRI.area, rel=1e-13)


def test_against_bruteforce_generic():
    rng = np.random.default_rng(11)
    ks = random_k(rng, 200)
    ours = triangle_ft(TRI, ks)
    brute = triangle_ft_bruteforce(TRI, ks, 64)
    scale = np.abs(brute).max()
    assert np.max(np.abs(ours - brute)) <= 1e-8 * scale


def test_beta_zero_limit_formula():
    # on the line k.e2 = 0 the spectrum reduces to J e^{-i k.v0} (1 - i a - e^{-i a})/a^2
    e2 = np.asarray(TRI.e2)
    perp = np.array([-e2[1], e2[0]]) / np.hypot(*e2)
    for mag in (0.7, 3.0, 11.0):
        k = perp * mag
        a = k @ np.asarray(TRI.e1)
        expected = (TRI.jacobian * np.exp(-1j * (k @ np.asarray(TRI.v0)))
                    * (1.0 - 1j * a - np.exp(-1j * a)) / a**2)
        got = triangle_ft(TRI, k)
        assert got == pytest.approx(expected, rel=1e-10)
        brute = triangle_ft_bruteforce(TRI, k, 96)
        assert abs(got - brute) <= 1e-6 * abs(brute)


def test_singular_lines_against_bruteforce():
    # points within 1e-6 of each singular line, including the origin
    rng = np.random.default_rng(5)
    e1, e2 = np.asarray(TRI.e1), np.asarray(TRI.e2)
    d12 = e1 - e2
    cases = []
    for direction in (e1, e2, d12):
        perp = np.array([-direction[1], direction[0]])
        perp /= np.hypot(*perp)  # moves along the singular line
        for mag in rng.uniform(0.5, 18.0, 35):
            off = rng.uniform(-1e-6, 1e-6)
            cases.append(perp * mag + off * direction / np.hypot(*direction))
    cases.append(np.array([1e-7, -1e-7]))
    ks = np.asarray(cases)
    ours = triangle_ft(TRI, ks)
    brute = triangle_ft_bruteforce(TRI, ks, 96)
    assert np.max(np.abs(ours - brute) / np.abs(brute)) <= 1e-6


def test_branch_continuity_at_switch():
    # branch and rational evaluations agree at the switch distance
    rng = np.random.default_rng(17)
    for _ in range(100):
        a = rng.uniform(1.0, 20.0) * rng.choice([-1.0, 1.0])
        for pair in ((a, 1e-4), (1e-4, a), (a, a - 1e-4)):
            branch = _simplex_phase_integral(*pair)
            rational = _f_rational(complex(pair[0]), complex(pair[1]))
            assert abs(branch - rational) <= 1e-5 * abs(branch)


def test_scaling_law():
    rng = np.random.default_rng(23)
    unit = TriangleAperture.equilateral(1.0)
    for side in (0.3, 2.0, 400e-9):
        big = TriangleAperture.equilateral(side)
        ks = random_k(rng, 100, tri=big, kmax=20.0 / 1.0) / side
        lhs = triangle_ft(big, ks)
        rhs = side**2 * triangle_ft(unit, ks * side)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_hermitian_symmetry():
    rng = np.random.default_rng(29)
    ks = random_k(rng, 100)
    np.testing.assert_allclose(triangle_ft(TRI, -ks), np.conj(triangle_ft(TRI, ks)),
                               rtol=1e-12)


def test_edge_permutation_invariance():
    rng = np.random.default_rng(31)
    ks = random_k(rng, 1000)
    perms = [
        TriangleAperture(TRI.v1, TRI.v2, TRI.v0),
        TriangleAperture(TRI.v2, TRI.v0, TRI.v1),
    ]
    base = np.abs(triangle_ft(TRI, ks))
    for tri in perms:
        np.testing.assert_allclose(np.abs(triangle_ft(tri, ks)), base, rtol=1e-11)


def test_parseval():
    # sum |A~|^2 (dk/2pi)^2 over a wide fine grid approximates the area
    n, kmax = 1200, 260.0
    kv = np.linspace(-kmax, kmax, n)
    dk = kv[1] - kv[0]
    KX, KY = np.meshgrid(kv, kv)
    ks = np.stack([KX.ravel(), KY.ravel()], axis=-1)
    vals = triangle_ft(TRI, ks)
    total = np.sum(np.abs(vals) ** 2) * (dk / (2 * math.pi)) ** 2
    assert total == pytest.approx(TRI.area, rel=0.01)


# ---------------------------------------------------------------------------
# Reciprocal lattice
# ---------------------------------------------------------------------------

def test_reciprocal_basis_equilateral():
    tri = TriangleAperture.equilateral(400e-9)
    rb = reciprocal_basis(tri)
    expected = 4 * math.pi / (SQ3 * 400e-9)
    assert np.hypot(*rb.G1) == pytest.approx(expected, rel=1e-12)
    assert np.hypot(*rb.G2) == pytest.approx(expected, rel=1e-12)
    # dual of a 60-degree edge pair sits at 120 degrees; the acute angle
    # between the lattice directions is the quoted 60
    cosang = np.dot(rb.G1, rb.G2) / (np.hypot(*rb.G1) * np.hypot(*rb.G2))
    assert abs(cosang) == pytest.approx(0.5, abs=1e-12)


def test_reciprocal_duality():
    rng = np.random.default_rng(37)
    for _ in range(20):
        verts = rng.uniform(-1, 1, (3, 2))
        try:
            tri = TriangleAperture(*map(tuple, verts))
        except GeometryError:
            continue
        rb = reciprocal_basis(tri)
        for i, e in enumerate((tri.e1, tri.e2)):
            for j, g in enumerate((rb.G1, rb.G2)):
                target = 2 * math.pi if i == j else 0.0
                assert np.dot(e, g) == pytest.approx(
                    target, abs=1e-12 * np.hypot(*e) * np.hypot(*g))


def test_reciprocal_rotation_covariance():
    rb0 = reciprocal_basis(TriangleAperture.equilateral(1.0))
    theta = 0.7
    rbr = reciprocal_basis(TriangleAperture.equilateral(1.0, orientation=theta))
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    np.testing.assert_allclose(rbr.G1, rot @ np.asarray(rb0.G1), atol=1e-12 * 4 * math.pi)
    np.testing.assert_allclose(rbr.G2, rot @ np.asarray(rb0.G2), atol=1e-12 * 4 * math.pi)


def test_highlighted_nodes_census():
    rb = reciprocal_basis(TRI)
    assert highlighted_nodes(rb, 0) == [(0, 0, (0.0, 0.0))]
    assert len(highlighted_nodes(rb, 1)) == 3
    assert len(highlighted_nodes(rb, 4)) == 15
    for ell in range(21):
        nodes = highlighted_nodes(rb, ell)
        # independent enumeration of the index set
        expected = {(m, n) for m in range(ell + 1) for n in range(ell + 1)
                    if m + n <= ell}
        assert len(nodes) == (ell + 1) * (ell + 2) // 2
        assert {(m, n) for m, n, _ in nodes} == expected


def test_highlighted_nodes_flip():
    rb = reciprocal_basis(TRI)
    g1, g2 = np.asarray(rb.G1), np.asarray(rb.G2)
    plus = highlighted_nodes(rb, 3)
    minus = highlighted_nodes(rb, -3)
    assert len(minus) == len(plus)
    # indices are mirrored and every node satisfies k = m G1 + n G2
    assert sorted((n, m) for m, n, _ in minus) == sorted((m, n) for m, n, _ in plus)
    for m, n, k in minus:
        np.testing.assert_allclose(k, m * g1 + n * g2, atol=1e-9)


# ---------------------------------------------------------------------------
# Detector pitch
# ---------------------------------------------------------------------------

def test_pitch_reference_values():
    lam100 = de_broglie(momentum_from_kinetic(ELECTRON, 100e3))
    assert detector_pitch(400e-9, lam100, 0.2) == pytest.approx(2.137e-6, abs=5e-9)
    lam_p = de_broglie(momentum_from_kinetic(PROTON, 1e6))
    assert detector_pitch(40e-9, lam_p, 2.0) == pytest.approx(1.652e-6, abs=5e-9)


def test_pitch_inverse_in_side():
    lam = 1e-12
    assert detector_pitch(2e-7, lam, 1.0) == pytest.approx(
        0.5 * detector_pitch(1e-7, lam, 1.0), rel=1e-14)


def test_pitch_equals_mapped_reciprocal_spacing():
    kin = kinematics_for(ELECTRON, 1e6)
    lam, z, side = kin.wavelength_m, 1.7, 3.3e-7
    rb = reciprocal_basis(TriangleAperture.equilateral(side))
    via_lattice = lam * z / (2 * math.pi) * np.hypot(*rb.G1)
    assert detector_pitch(side, lam, z) == pytest.approx(via_lattice, rel=1e-13)


def test_pitch_rejects_bad_input():
    with pytest.raises(DomainError):
        detector_pitch(0.0, 1e-12, 1.0)


def test_bruteforce_needs_two_points():
    with pytest.raises(DomainError):
        triangle_ft_bruteforce(TRI, [1.0, 1.0], 1)
