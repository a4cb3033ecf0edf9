"""Direct quadrature of the exact spectral representations of the attenuation factor.

    U0 = -(1/2 pi) int I'(xi)/w1'(xi) w1(xi - nu) e^{i sigma xi} dxi
    U0 = F + D + G
    W0 = theta(sigma) e^{i(sigma nu - sigma^3/3)} + U0
       = (1/2 pi) int [I(xi - nu) - I'(xi)/w1'(xi) w1(xi - nu)] e^{i sigma xi} dxi

All integrands are assembled from log-scaled factors, so growth of ``w1``
and ``H`` far from the real axis never overflows.  Contours follow the real
axis over the region carrying the physics and leave it along rays on which
the integrand decays exponentially:

* on the far left, ``I'/w1' = -i sqrt(pi) + i H'/w1'``; the Airy part is sent
  down and the ``H'`` part up (for ``sigma > 0``), since each decays only on
  one side;
* on the right, a ray at ``tail_rotation["right_up"]`` (below the pole line
  ``arg xi = pi/3``) or ``["right_down"]`` for ``sigma < 0``.
"""

import math

import numpy as np

from . import special
from .errors import DomainError, PoleProximityError
from .geometry import as_stretched, heaviside
from .quadrature import (AttenuationResult, QuadratureConfig, Leg, integrate, integrate_on_layout,
                         segment, truncated_ray)

_SQRT_PI = special.SQRT_PI
_TWO_PI = 2.0 * math.pi
_ROT_CONJ = np.exp(-2j * np.pi / 3)
_FAC_I = np.exp(-1j * np.pi / 6 - 2j * np.pi * np.arange(3) / 3)
_POLE_CLEARANCE = 0.1

# ---------------------------------------------------------------------------
# log-scaled factors
# ---------------------------------------------------------------------------


def _w1f(z, d=0):
    return special._w1_scaled(z, d)


def _hf(z, d):
    m, l = special._h_scaled(z)
    return m[:, d], l


def _if(z, d):
    m, l = special._h_scaled(z * _ROT_CONJ)
    return _FAC_I[d] * m[:, d], l


def _assemble(coef, num, den, sigma, xi):
    mant = np.full(xi.shape, coef, dtype=complex)
    lsc = np.zeros(xi.shape)
    for m, l in num:
        mant = mant * m
        lsc = lsc + l
    for m, l in den:
        mant = mant / m
        lsc = lsc - l
    expo = lsc - sigma * xi.imag
    return mant * np.exp(np.minimum(expo, 700.0) + 1j * sigma * xi.real)


class _Integrands:
    """Integrand family for one observation point."""

    def __init__(self, sigma, nu):
        self.sigma = float(sigma)
        self.nu = float(nu)

    def F(self, xi):
        return _assemble(1j / (2 * _SQRT_PI), [_w1f(xi - self.nu)], [], self.sigma, xi)

    def D(self, xi):
        return _assemble(-1j / _TWO_PI, [_hf(xi, 1), _w1f(xi - self.nu)], [_w1f(xi, 1)],
                         self.sigma, xi)

    def G(self, xi):
        return _assemble(-1.0 / _TWO_PI, [_if(xi, 1), _w1f(xi - self.nu)], [_w1f(xi, 1)],
                         self.sigma, xi)

    def J_left(self, xi):
        # (1/2pi)[I(xi-nu) - (I'/w1') w1(xi-nu)] e^{i sigma xi} in cancellation-free form
        return (_assemble(1j / _TWO_PI, [_hf(xi - self.nu, 0)], [], self.sigma, xi)
                + self.D(xi))

    def J_right(self, xi):
        return (_assemble(1.0 / _TWO_PI, [_if(xi - self.nu, 0)], [], self.sigma, xi)
                + self.G(xi))

    def Ip(self, xi):
        return _assemble(1.0 / _TWO_PI, [_if(xi, 1)], [], self.sigma, xi)

    def Ip_airy(self, xi):
        return _assemble(-1j * _SQRT_PI / _TWO_PI, [_w1f(xi, 1)], [], self.sigma, xi)

    def Ip_scorer(self, xi):
        return _assemble(1j / _TWO_PI, [_hf(xi, 1)], [], self.sigma, xi)


# ---------------------------------------------------------------------------
# contour pieces
# ---------------------------------------------------------------------------


def _incoming(leg):
    """Reverse a ray leg so it runs from its far end back to the axis."""
    return Leg(leg.end, leg.start, leg.n_init, leg.tail_bound, leg.label, leg.func)


def _left_tail(f, start, up, rate, osc, cfg, label):
    ang = cfg.tail_rotation["left_up" if up else "left_down"]
    eff = rate * abs(math.sin(ang))
    return _incoming(truncated_ray(f, start, ang, eff, osc, cfg, label))


def _right_tail(f, start, up, rate, osc, cfg, label):
    ang = cfg.tail_rotation["right_up" if up else "right_down"]
    eff = rate * abs(math.sin(ang))
    return truncated_ray(f, start, ang, eff, osc, cfg, label)


def _L_F(sigma, nu):
    return max(4.0, (max(sigma, 0.0) + 2.0) ** 2 - nu)


def _L_D(sigma, nu):
    if sigma <= 0:
        return 4.0
    return max(4.0, ((nu - sigma ** 2 / 4.0) / sigma) ** 2)


def _L_G(nu):
    return max(4.0, nu + 4.0)


def _rate_F(sigma, nu, L):
    return math.sqrt(nu + L) - sigma


def _rate_D(sigma, nu, L):
    return abs(sigma - (math.sqrt(nu + L) - math.sqrt(L)))


def _seg_to_point_dist(a, b, p):
    d = b - a
    t = 0.0 if d == 0 else min(1.0, max(0.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(a + t * d - p)


def check_pole_clearance(legs, clearance=_POLE_CLEARANCE, n_zeros=20):
    """Raise :class:`PoleProximityError` if a leg passes near a zero of ``w1'``."""
    zeros = special.w1_prime_zeros(n_zeros).zeros
    for leg in legs:
        for z in zeros:
            if _seg_to_point_dist(leg.start, leg.end, z) < clearance:
                raise PoleProximityError(f"contour {leg.label} within {clearance} of pole {z:.6g}")


def _run(f, legs, cfg, name, poles=True):
    if poles:
        check_pole_clearance(legs)
    return integrate(f, legs, cfg, name)


def _sigma_nu(q):
    q = as_stretched(q)
    return q.sigma, q.nu


# ---------------------------------------------------------------------------
# public integrals
# ---------------------------------------------------------------------------


def incident_attenuation(q):
    """Main term of the incident factor ``V = 1 - theta + theta e^{i(sigma nu - sigma^3/3)}``."""
    sigma, nu = _sigma_nu(q)
    th = heaviside(sigma)
    return complex(1.0 - th + th * np.exp(1j * (sigma * nu - sigma ** 3 / 3.0)))


def incident_shifted(q):
    """Incident term as written in the W representation: ``theta e^{i(...)}`` only."""
    sigma, nu = _sigma_nu(q)
    return complex(heaviside(sigma) * np.exp(1j * (sigma * nu - sigma ** 3 / 3.0)))


def _phase_rate_D(sigma, nu):
    """|d/dxi| of the phase of the D integrand on xi < 0."""
    return lambda x: abs(sigma - math.sqrt(nu - x) + math.sqrt(-x))


def _phase_rate_F(sigma, nu):
    return lambda x: abs(sigma - math.sqrt(nu - x))


def _graded_axis(a, b, rate, cfg, label, func):
    """Split ``[a, b]`` (a < b <= 0) into pieces growing geometrically away from ``b``.

    ``rate`` is a monotone phase-rate bound; each piece gets initial panels
    from the larger endpoint value, so slowly oscillating far pieces stay cheap.
    """
    edges = [b]
    w = 4.0
    while edges[-1] - w > a:
        edges.append(edges[-1] - w)
        w *= 2.0
    edges.append(a)
    legs = []
    for hi, lo in zip(edges[:-1], edges[1:]):
        r = max(rate(lo), rate(hi)) + 1.0
        legs.append(segment(lo, hi, r, cfg, label, func))
    return legs


def _u0_legs(sigma, nu, cfg):
    fam = _Integrands(sigma, nu)
    LR = _L_G(nu) + 3.0
    if sigma > 0:
        # Airy part of I'/w1' leaves the axis at -L1 (downwards), the H' part
        # continues along the axis to -L2 and leaves upwards
        L1 = 1.25 * _L_F(sigma, nu) + 3.0
        L2 = max(1.25 * _L_D(sigma, nu) + 3.0, L1)
        osc = sigma + math.sqrt(nu + L1) + 1.0
        legs = [_left_tail(fam.F, -L1, False, _rate_F(sigma, nu, L1), osc, cfg, "left_airy")]
        if L2 > L1:
            legs += _graded_axis(-L2, -L1, _phase_rate_D(sigma, nu), cfg, "axis_scorer", fam.D)
        legs += [
            _left_tail(fam.D, -L2, True, _rate_D(sigma, nu, L2), osc, cfg, "left_scorer"),
            segment(-L1, LR, osc, cfg, "axis", fam.G),
            _right_tail(fam.G, LR, True, sigma, sigma + 1.0, cfg, "right"),
        ]
        return legs
    L = 4.0
    osc = abs(sigma) + math.sqrt(nu + L) + 1.0
    return [
        _left_tail(fam.G, -L, False, _rate_F(sigma, nu, L), osc, cfg, "left"),
        segment(-L, LR, osc, cfg, "axis", fam.G),
        _right_tail(fam.G, LR, False, abs(sigma), abs(sigma) + 1.0, cfg, "right"),
    ]


def _rebind(legs, sigma, nu):
    """Same contour geometry with the integrands of another observation point."""
    fam = _Integrands(sigma, nu)
    pick = {"left_airy": fam.F, "left_scorer": fam.D, "axis_scorer": fam.D, "left": fam.G,
            "axis": fam.G, "right": fam.G}
    return [Leg(l.start, l.end, l.n_init, l.tail_bound, l.label, pick[l.label]) for l in legs]


def u0_direct(q, cfg=None):
    """Outgoing attenuation factor ``U0`` from its single spectral integral.

    Zero at ``sigma = 0`` by continuity from ``sigma < 0``.
    """
    cfg = cfg or QuadratureConfig()
    sigma, nu = _sigma_nu(q)
    if sigma == 0:
        return AttenuationResult(0j, 0.0, 0, "sigma=0: zero by continuity", 0)
    return _run(None, _u0_legs(sigma, nu, cfg), cfg, "U0")


def _need_nonzero(sigma):
    if sigma == 0:
        raise DomainError("the split integrals are evaluated for sigma != 0")


def f_direct(q, cfg=None):
    """``F = (i / 2 sqrt(pi)) int_{-inf}^0 w1(xi - nu) e^{i sigma xi} dxi``."""
    cfg = cfg or QuadratureConfig()
    sigma, nu = _sigma_nu(q)
    _need_nonzero(sigma)
    fam = _Integrands(sigma, nu)
    L = _L_F(sigma, nu)
    osc = max(abs(sigma - math.sqrt(nu)), abs(sigma - math.sqrt(nu + L))) + 1.0
    legs = [_left_tail(fam.F, -L, False, _rate_F(sigma, nu, L), osc, cfg, "left")]
    legs += _graded_axis(-L, 0.0, _phase_rate_F(sigma, nu), cfg, "axis", fam.F)
    return _run(None, legs, cfg, "F", poles=False)


def d_direct(q, cfg=None):
    """``D = -(i / 2 pi) int_{-inf}^0 H'/w1' w1(xi - nu) e^{i sigma xi} dxi``."""
    cfg = cfg or QuadratureConfig()
    sigma, nu = _sigma_nu(q)
    _need_nonzero(sigma)
    fam = _Integrands(sigma, nu)
    L = _L_D(sigma, nu)
    osc = max(abs(sigma - math.sqrt(nu)), _rate_D(sigma, nu, L)) + 1.0
    legs = [_left_tail(fam.D, -L, sigma > 0, _rate_D(sigma, nu, L), osc, cfg, "left")]
    legs += _graded_axis(-L, 0.0, _phase_rate_D(sigma, nu), cfg, "axis", fam.D)
    return _run(None, legs, cfg, "D")


def g_direct(q, cfg=None):
    """``G = -(1 / 2 pi) int_0^inf I'/w1' w1(xi - nu) e^{i sigma xi} dxi``."""
    cfg = cfg or QuadratureConfig()
    sigma, nu = _sigma_nu(q)
    _need_nonzero(sigma)
    fam = _Integrands(sigma, nu)
    if sigma > 0:
        L = _L_G(nu)
        legs = [
            segment(0.0, L, sigma + math.sqrt(nu) + 1.0, cfg, "axis", fam.G),
            _right_tail(fam.G, L, True, sigma, sigma + 1.0, cfg, "right"),
        ]
    else:
        legs = [_right_tail(fam.G, 0.0, False, abs(sigma), abs(sigma) + math.sqrt(nu) + 1.0,
                            cfg, "right")]
    return _run(None, legs, cfg, "G")


def w1_form(q, cfg=None):
    """``(1/2 pi) int [I(xi - nu) - I'/w1' w1(xi - nu)] e^{i sigma xi} dxi``.

    Equals ``theta(sigma) e^{i(sigma nu - sigma^3/3)} + U0``.
    """
    cfg = cfg or QuadratureConfig()
    sigma, nu = _sigma_nu(q)
    if sigma == 0:
        raise DomainError("the single-integral form is evaluated for sigma != 0")
    fam = _Integrands(sigma, nu)
    LR = _L_G(nu) + 1.0
    L = _L_D(sigma, nu) + 1.0
    osc_l = max(abs(sigma - math.sqrt(nu)), _rate_D(sigma, nu, L), abs(sigma)) + 1.0
    osc_r = abs(sigma) + math.sqrt(nu) + 1.0
    legs = [
        _left_tail(fam.J_left, -L, sigma > 0, min(abs(sigma), _rate_D(sigma, nu, L)), osc_l,
                   cfg, "left"),
        *_graded_axis(-L, 0.0, lambda x: max(_phase_rate_D(sigma, nu)(x), abs(sigma)), cfg,
                      "axis_left", fam.J_left),
        segment(0.0, LR, osc_r, cfg, "axis_right", fam.J_right),
        _right_tail(fam.J_right, LR, sigma > 0, abs(sigma), abs(sigma) + 1.0, cfg, "right"),
    ]
    return _run(None, legs, cfg, "W1")


def w0_direct(q, cfg=None, representation="W", incident="V"):
    """Total attenuation factor ``W0``.

    ``representation`` is ``"W"`` (incident term plus :func:`u0_direct`) or
    ``"W1"`` (:func:`w1_form`).  ``incident="V"`` uses the full incident factor
    ``1 - theta + theta e^{i(...)}``; ``incident="W"`` keeps only
    ``theta e^{i(...)}``, which is what both integral forms produce for
    ``sigma <= 0`` as written.
    """
    if incident not in ("V", "W"):
        raise DomainError("incident must be 'V' or 'W'")
    sigma, nu = _sigma_nu(q)
    extra = (1.0 - heaviside(sigma)) if incident == "V" else 0.0
    if representation == "W":
        u = u0_direct(q, cfg)
        return u.scaled(1.0, incident_shifted(q) + extra)
    if representation == "W1":
        if sigma == 0:
            return AttenuationResult(complex(extra), 0.0, 0, "sigma=0: incident only", 0)
        return w1_form(q, cfg).scaled(1.0, extra)
    raise DomainError("representation must be 'W' or 'W1'")


def neumann_integral(sigma, cfg=None):
    """``(1/2 pi) int I'(xi) e^{i sigma xi} dxi``, the normal derivative of ``U0`` at ``nu = 0``."""
    cfg = cfg or QuadratureConfig()
    if not sigma > 0:
        raise DomainError("neumann_integral needs sigma > 0")
    fam = _Integrands(sigma, 0.0)
    L = max(4.0, (sigma + 2.0) ** 2)
    LR = 4.0
    osc = sigma + math.sqrt(L) + 1.0
    legs = [
        _left_tail(fam.Ip_airy, -L, False, math.sqrt(L) - sigma, osc, cfg, "left_airy"),
        _left_tail(fam.Ip_scorer, -L, True, sigma, osc, cfg, "left_scorer"),
        segment(-L, LR, osc, cfg, "axis", fam.Ip),
        _right_tail(fam.Ip, LR, True, sigma, sigma + 1.0, cfg, "right"),
    ]
    return _run(None, legs, cfg, "dU0/dnu", poles=False)


def neumann_residual(sigma, cfg=None):
    """Relative mismatch of the boundary condition ``dU0/dnu = -i sigma e^{-i sigma^3/3}``."""
    r = neumann_integral(sigma, cfg)
    target = -1j * sigma * np.exp(-1j * sigma ** 3 / 3.0)
    return abs(r.value - target) / abs(sigma)


def pde_residual(q, step, cfg=None):
    """Finite-difference residual of ``U_nunu + i U_sigma + nu theta U = 0``, relative to ``|U0|``.

    The five stencil values share the contour and panel layout of the centre
    point, so quadrature error enters the differences smoothly.
    """
    sigma, nu = _sigma_nu(q)
    if not (sigma > step and nu > step and step > 0):
        raise DomainError("pde_residual needs an interior point: sigma, nu > step > 0")
    cfg = cfg or QuadratureConfig(rel_tol=1e-12, abs_floor=1e-15)
    legs = _u0_legs(sigma, nu, cfg)
    check_pole_clearance(legs)
    centre = integrate(None, legs, cfg, "U0")
    layout = centre.layout
    u = lambda s, n: integrate_on_layout(_rebind(legs, s, n), layout, cfg).value
    u0 = centre.value
    u_nn = (u(sigma, nu + step) - 2 * u0 + u(sigma, nu - step)) / step ** 2
    u_s = (u(sigma + step, nu) - u(sigma - step, nu)) / (2 * step)
    return abs(u_nn + 1j * u_s + nu * heaviside(sigma) * u0) / abs(u0)


def pde_convergence(q, step, halvings=2, cfg=None):
    """Residuals at ``step, step/2, ...`` and the observed log2 slopes between them."""
    steps = [step / 2 ** j for j in range(halvings + 1)]
    res = [pde_residual(q, s, cfg) for s in steps]
    slopes = [math.log2(res[j] / res[j + 1]) for j in range(halvings)]
    return steps, res, slopes
