"""Direct quadrature of the exact spectral integrals."""

import io
import json
import math

import numpy as np
import pytest

from curvjump import oracle as O
from curvjump import special as S
from curvjump.errors import DomainError, PoleProximityError
from curvjump.quadrature import ALTERNATE_TAIL_ROTATION, Leg, QuadratureConfig


def test_incident_attenuation():
    assert O.incident_attenuation((-0.5, 3.0)) == 1
    assert O.incident_attenuation((1.0, 1.0)) == pytest.approx(np.exp(2j / 3), rel=1e-15)
    for sigma, nu in [(0.3, 2.0), (4.0, 0.0), (2.5, 9.1)]:
        assert abs(O.incident_attenuation((sigma, nu))) == pytest.approx(1.0, rel=1e-15)
    assert O.incident_shifted((-0.5, 3.0)) == 0


@pytest.mark.parametrize("sigma,nu", [(-1.0, 2.0), (-0.1, 0.0), (-2.0, 5.0)])
def test_causality(sigma, nu):
    assert abs(O.u0_direct((sigma, nu)).value) <= 1e-6


def test_sigma_zero_is_zero_by_continuity():
    res = O.u0_direct((0.0, 4.0))
    assert res.value == 0 and res.est_error == 0


@pytest.mark.parametrize("sigma", [1.0, 2.0])
def test_boundary_condition(sigma):
    assert O.neumann_residual(sigma) <= 1e-6


def test_neumann_requires_positive_sigma():
    with pytest.raises(DomainError):
        O.neumann_integral(-1.0)


def test_split_identity():
    q = (1.5, 8.0)
    u = O.u0_direct(q)
    parts = [O.f_direct(q), O.d_direct(q), O.g_direct(q)]
    total = sum(p.value for p in parts)
    assert abs(total - u.value) <= u.est_error + sum(p.est_error for p in parts)


def test_representations_agree():
    q = (2.0, 10.0)
    a = O.w0_direct(q, representation="W")
    b = O.w0_direct(q, representation="W1")
    assert abs(a.value - b.value) <= 2 * (a.est_error + b.est_error)


def test_incident_conventions_before_jump():
    q = (-1.0, 1.0)
    assert O.w0_direct(q, incident="V").value == pytest.approx(1.0, abs=1e-6)
    assert abs(O.w0_direct(q, incident="W").value) <= 1e-6
    assert O.w0_direct(q, representation="W1").value == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(DomainError):
        O.w0_direct(q, representation="X")
    with pytest.raises(DomainError):
        O.w0_direct(q, incident="X")


def test_deep_shadow_bound():
    # first residue term bounds the field: |A_1 w1(zeta_1 - nu)| e^{-Im zeta_1 sigma}
    zeta = S.w1_prime_zeros(1).zeros[0]
    a1 = -1j * S.I_prime(zeta) / (zeta * S.w1(zeta))
    c = abs(a1 * S.w1(zeta - 1.0))
    w = O.w0_direct((6.0, 1.0)).value
    assert abs(w) <= 1.05 * c * math.exp(-zeta.imag * 6.0)


def test_background_integrand_decays():
    xi, nu = 10.0, 2.0
    val = abs(S.I_prime(xi) / S.w1_prime(xi) * S.w1(xi - nu))
    assert val <= math.exp(-nu * math.sqrt(xi) * 2 / 3 * (1 - 0.2))


def test_fresnel_reduction_of_f():
    nu, sigma = 25.0, 4.99
    theta = sigma * nu - sigma ** 3 / 3
    zc = (math.sqrt(nu) - sigma) * nu ** 0.25
    ref = -np.exp(1j * theta) * S.fresnel_phi(-zc)
    f = O.f_direct((sigma, nu)).value
    assert abs(f - ref) <= 0.05 * abs(ref)


def test_contour_independence():
    q = (1.2, 4.0)
    a = O.u0_direct(q)
    b = O.u0_direct(q, QuadratureConfig(tail_rotation=dict(ALTERNATE_TAIL_ROTATION)))
    assert abs(a.value - b.value) <= a.est_error + b.est_error


def test_tolerance_honesty():
    q = (2.2, 6.0)
    a = O.u0_direct(q, QuadratureConfig(rel_tol=1e-8))
    b = O.u0_direct(q, QuadratureConfig(rel_tol=5e-9))
    assert abs(a.value - b.value) < a.est_error
    assert a.est_error <= 1e-8 * abs(a.value) + 1e-13


def test_pole_clearance_guard():
    zeta = S.w1_prime_zeros(1).zeros[0]
    with pytest.raises(PoleProximityError):
        O.check_pole_clearance([Leg(zeta - 0.05, zeta + 0.05)])
    O.check_pole_clearance([Leg(-5, 5)])


def test_split_needs_nonzero_sigma():
    with pytest.raises(DomainError):
        O.f_direct((0.0, 1.0))


def test_pde_residual_guard():
    with pytest.raises(DomainError):
        O.pde_residual((0.005, 3.0), 1e-2)


def test_trace_lists_integral():
    buf = io.StringIO()
    O.u0_direct((1.0, 2.0), QuadratureConfig(trace=buf))
    rec = json.loads(buf.getvalue().splitlines()[-1])
    assert rec["integral"] == "U0"
    assert set(rec) == {"integral", "panel_count", "contour", "value_re", "value_im", "est_error"}
