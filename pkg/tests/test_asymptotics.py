"""Per-zone asymptotic formulas, phases and the creeping-mode table."""

import math

import numpy as np
import pytest

from curvjump import asymptotics as A
from curvjump import geometry as G
from curvjump import oracle as O
from curvjump import special as S
from curvjump.errors import DomainError, RegionError

P = G.ProblemParams(k=1e12, h=1.0)


def test_psi1_critical_point_is_stationary():
    q = (2.0, 30.0)
    xi1 = A.critical_point(A.PhaseId.Psi1, q)
    assert xi1 == 26
    h = 1e-5
    d = (A.phase(A.PhaseId.Psi1, xi1 + h, q) - A.phase(A.PhaseId.Psi1, xi1 - h, q)) / (2 * h)
    assert abs(d) <= 1e-9


def test_psi1_at_origin():
    assert A.phase("Psi1", 0.0, (1.3, 9.0)) == pytest.approx(2 / 3 * 27, rel=1e-15)


def test_psi2_value_at_critical_point():
    s, n = 2.0, 30.0
    xi2 = A.critical_point(A.PhaseId.Psi2, (s, n))
    assert xi2 == -42.25
    expected = 0.5 * (s * n + n * n / (2 * s) - s ** 3 / 6)
    assert A.phase(A.PhaseId.Psi2, xi2, (s, n)) == pytest.approx(expected, rel=1e-14)


def test_psi2_tilde_critical_point():
    assert A.critical_point(A.PhaseId.Psi2_tilde, (2.0, 25.0)) == -9
    with pytest.raises(DomainError):
        A.critical_point(A.PhaseId.Psi2_tilde, (6.0, 25.0))
    with pytest.raises(DomainError):
        A.critical_point(A.PhaseId.Psi2, (6.0, 25.0))
    with pytest.raises(DomainError):
        A.critical_point(A.PhaseId.Psi3, (2.0, 25.0))


def test_far_phases_match_integrand_modulus():
    # |I'/w1' w1(xi - nu) e^{i sigma xi}| against e^{Re Psi5} / (xi^{9/4} (xi - nu)^{1/4})
    s, n, xi = 1.0, 2.0, 40.0
    f = S.I_prime(xi) / S.w1_prime(xi) * S.w1(xi - n) * np.exp(1j * s * xi)
    model = np.exp(A.phase(A.PhaseId.Psi5, xi, (s, n))) / (xi ** 2.25 * (xi - n) ** 0.25)
    assert abs(f) == pytest.approx(abs(model), rel=0.05)


def test_diffraction_coefficient():
    params = G.ProblemParams(k=100.0, h=1.0)
    a = A.diffraction_coefficient(0.1, params, check_floor=False)
    assert abs(a) == pytest.approx(159.577, abs=1e-3)
    assert np.angle(a) == pytest.approx(-math.pi / 4, abs=1e-15)
    double_h = G.ProblemParams(k=100.0, h=2.0)
    assert A.diffraction_coefficient(0.1, double_h, check_floor=False) / a == 2
    assert A.diffraction_coefficient(0.2, params, check_floor=False) / a == 1 / 16
    with pytest.raises(DomainError):
        A.diffraction_coefficient(0.1, params)
    with pytest.raises(DomainError):
        A.diffraction_coefficient(0.0, params, check_floor=False)


def test_d2_remainder_order_and_region_guard():
    res = A.u0_D2((2.0, 30.0), P)
    assert res.remainder_order == pytest.approx(8 / 26 ** 3, rel=1e-14)
    assert res.est_error == pytest.approx(abs(res.value) * res.remainder_order)
    with pytest.raises(RegionError):
        A.u0_D2((5.0, 25.0), P)


def test_d2_coefficient_against_oracle():
    # deviation of the stationary-phase value decays like 1/(nu - sigma^2); the alternative
    # doubled normalization stays a factor two away
    q = (2.0, 120.0)
    ref = O.u0_direct(q).value
    ours = A.u0_D2(q, P).value
    doubled = A.u0_D2(q, P, coefficient=A.DOUBLED_D2_COEFFICIENT).value
    assert abs(ours / ref - 1) < 0.01
    assert abs(doubled / ref - 2) < 0.02


def test_d2_phase_at_60():
    q = (2.0, 60.0)
    d = np.angle(A.u0_D2(q, P).value / O.u0_direct(q).value)
    assert abs(d) <= 0.05


def test_penumbra_arguments():
    a = A.penumbra_args((5.0, 25.0))
    assert a.zcap == 0
    assert a.theta == pytest.approx(2 / 3 * 125, rel=1e-15)
    assert A.fresnel_part((5.0, 25.0)) == pytest.approx(np.exp(1j * a.theta) / 2, rel=1e-14)
    assert A.penumbra_args((4.9, 25.0)).zcap > 0


def test_penumbra_geometry():
    # Theta ~ k(x - s) and Z ~ sqrt(kr/2) phi near the limit ray
    k, h = 1e12, 1.0
    params = G.ProblemParams(k=k, h=h)
    q = G.StretchedCoords(4.95, 25.0)
    p = G.unstretch(q, params)
    pt = G.cartesian_from_surface(p, params).point
    a = A.penumbra_args(q)
    assert k * (pt.x - p.s) == pytest.approx(a.theta, rel=0.02)
    assert math.sqrt(k * pt.r / 2) * pt.phi == pytest.approx(a.zcap, rel=0.05)


def test_penumbra_continuity_across_limit_ray():
    r = 5.0
    below = A.w0_D4((r - 1e-4, 25.0), P).value
    above = A.w0_D4((r + 1e-4, 25.0), P).value
    assert abs(below - above) <= 1e-3 * abs(below)


def test_penumbra_against_oracle():
    q = (4.99, 25.0)
    ref = O.w0_direct(q).value
    assert abs(A.w0_D4(q, P).value - ref) <= 0.05 * abs(ref)


def test_d3_ray_rotation_is_immaterial():
    q = (4.2, 25.0)
    a = A.u0_D3(q, P, check_region=False)
    b = A.u0_D3(q, P, check_region=False, ray_angle=-math.pi / 3 + 0.1)
    assert abs(a.value - b.value) <= a.est_error + b.est_error
    assert a.remainder_order is None


def test_d3_agrees_with_reduced_stationary_phase_far_from_ray():
    q = (2.0, 49.0)
    u3 = A.u0_D3(q, P, check_region=False).value
    ref = A.reduced_stationary_phase(q)
    assert abs(u3 - ref) <= 0.10 * abs(ref)


def test_q_terms():
    assert A.q_terms(1.0, 16.0, variant="real") == pytest.approx(0.078735, abs=1e-6)
    assert A.q_terms(1.0, 16.0) == pytest.approx(1 / 64 + 1j / 16 + 5 / (32 * 256), rel=1e-15)
    assert A.q_terms(1.0, 16.0, q_order=0) == 0
    assert A.q_terms(1.0, 16.0, q_order=1) == 1 / 64
    with pytest.raises(DomainError):
        A.q_terms(1.0, 16.0, q_order=4)
    with pytest.raises(DomainError):
        A.q_terms(1.0, 16.0, variant="other")


def test_d5_ray_rotation_is_immaterial():
    q = (5.4, 25.0)
    a = A.w0_D5(q, P, check_region=False)
    b = A.w0_D5(q, P, check_region=False, ray_angle=math.pi / 4 + 0.1)
    assert abs(a.value - b.value) <= a.est_error + b.est_error


def test_d5_far_from_ray_tracks_oracle():
    # (20.7, 400) is inside D5 only for k/h ~ 1e16
    params = G.ProblemParams(k=1e16, h=1.0)
    q = (20.7, 400.0)
    assert G.region_classify(G.StretchedCoords(*q), params) == G.RegionLabel.D5_shadow_near
    ref = O.w0_direct(q).value
    err0 = abs(A.w0_D5(q, params, q_order=0).value - ref)
    err2 = abs(A.w0_D5(q, params, q_order=2).value - ref)
    assert err2 < err0
    assert err2 <= 0.05 * abs(ref)


def test_creeping_mode_table():
    tab = A.creeping_modes(5)
    assert abs(tab.zeros[0]) == pytest.approx(1.0187929716, abs=1e-8)
    assert tab.zeros[0].imag == pytest.approx(0.88231, abs=1e-5)
    assert tab.zeros[4].imag < tab.epsilon < S.w1_prime_zeros(6).zeros[5].imag
    assert np.all(np.isfinite(tab.coefficients))
    with pytest.raises(DomainError):
        A.creeping_modes(0)
    with pytest.raises(DomainError):
        A.creeping_modes(21)


def test_excitation_forms_agree():
    z = S.w1_prime_zeros(5).zeros
    a_i = A.excitation_coefficients(z, "I")
    a_h = A.excitation_coefficients(z, "H")
    assert np.max(np.abs(a_i - a_h)) <= 1e-9
    # the literal -i H' form differs by the factor -i
    literal = -1j * S.H_prime(z) / (z * S.w1(z))
    assert np.allclose(literal / a_i, -1j, atol=1e-9)


def test_single_mode_dominance():
    tab = A.creeping_modes(2)
    (z1, a1), (z2, a2) = tab.modes
    s, n = 8.0, 1.0
    t1 = a1 * S.w1(z1 - n) * np.exp(1j * s * z1)
    t2 = a2 * S.w1(z2 - n) * np.exp(1j * s * z2)
    amp = abs(a2 * S.w1(z2 - n) / (a1 * S.w1(z1 - n)))
    assert abs(t2 / t1) == pytest.approx(amp * math.exp(-s * (z2.imag - z1.imag)), rel=1e-12)
    assert abs(t2 / t1) < 1e-5


def test_residue_series_against_oracle():
    q = (12.0, 12.0)
    ref = O.w0_direct(q).value
    res = A.w0_D6(q, P)
    assert abs(res.value - ref) <= 1e-6 * abs(ref)
    assert res.est_error == pytest.approx(math.exp(-A.creeping_modes(3).epsilon * 12.0))


def test_residue_far_form():
    q = (12.0, 10.0)
    near = A.w0_D6(q, P).value
    far = A.w0_D6_far(q, P)
    assert abs(far.value - near) <= abs(near) * far.remainder_order


def test_creeping_remainder_shrinks():
    tab = A.creeping_modes(1)
    prev = None
    for s in (6.0, 8.0, 10.0):
        resid = abs(O.w0_direct((s, 1.0)).value - A.w0_D6((s, 1.0), P, n=1).value)
        assert resid <= 10 * math.exp(-tab.epsilon * s)
        if prev is not None:
            assert resid < prev
        prev = resid
