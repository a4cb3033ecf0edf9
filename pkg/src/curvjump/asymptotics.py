"""Zone-by-zone asymptotic formulas for the attenuation factors.

Illuminated far zone (D2): stationary-phase closed form.  Penumbra (D4):
Fresnel part plus two background integrals.  Near zones on either side of the
limit ray (D3, D5): reduced integrals in ``c = sigma - sqrt(nu)``.  Deep
shadow (D6): creeping-wave residue series.  Also the phase functions, their
critical points and the diffraction coefficient of the jump point.

Every formula checks zone membership unless ``check_region=False``; zones
overlap near their borders and any zone containing the point is accepted.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import math

import numpy as np

from . import special
from .errors import DomainError, RegionError
from .geometry import RegionLabel, as_stretched, region_memberships
from .oracle import _assemble, _graded_axis, _hf, _if, _left_tail, _w1f
from .quadrature import AttenuationResult, QuadratureConfig, integrate, segment, truncated_ray

_SQRT_PI = special.SQRT_PI
_E_M_PI4 = complex(np.exp(-0.25j * np.pi))

D3_RAY_ANGLE = -math.pi / 3
D5_RAY_ANGLE = math.pi / 4

# ---------------------------------------------------------------------------
# phases and critical points
# ---------------------------------------------------------------------------


class PhaseId(Enum):
    Psi1 = "Psi1"
    Psi2 = "Psi2"
    Psi3 = "Psi3"
    Psi4 = "Psi4"
    Psi5 = "Psi5"
    Psi2_tilde = "Psi2_tilde"


def _p32(z):
    return np.asarray(z, dtype=complex) ** 1.5


def phase(pid, xi, q):
    """Phase function ``pid`` at ``xi`` (principal branches of the 3/2 powers).

    * Psi1 = (2/3)(nu - xi)^{3/2} + sigma xi
    * Psi2 = Psi1 - (2/3)(-xi)^{3/2}
    * Psi2_tilde = -(2/3)(-xi)^{3/2} + (sigma - sqrt(nu)) xi
    * Psi3 = i(sigma xi + (2/3)(nu - xi)^{3/2}) - (2/3) xi^{3/2}
    * Psi4 = i sigma xi - (2/3) xi^{3/2}
    * Psi5 = i sigma xi - (2/3)(xi^{3/2} - (xi - nu)^{3/2})
    """
    q = as_stretched(q)
    s, n = q.sigma, q.nu
    xi = np.asarray(xi, dtype=complex)
    pid = PhaseId(pid)
    if pid is PhaseId.Psi1:
        out = 2 / 3 * _p32(n - xi) + s * xi
    elif pid is PhaseId.Psi2:
        out = 2 / 3 * _p32(n - xi) + s * xi - 2 / 3 * _p32(-xi)
    elif pid is PhaseId.Psi2_tilde:
        out = -2 / 3 * _p32(-xi) + (s - math.sqrt(n)) * xi
    elif pid is PhaseId.Psi3:
        out = 1j * (s * xi + 2 / 3 * _p32(n - xi)) - 2 / 3 * _p32(xi)
    elif pid is PhaseId.Psi4:
        out = 1j * s * xi - 2 / 3 * _p32(xi)
    else:
        out = 1j * s * xi - 2 / 3 * (_p32(xi) - _p32(xi - n))
    return complex(out) if out.ndim == 0 else out


def critical_point(pid, q):
    """Closed-form critical point of Psi1, Psi2 or Psi2_tilde.

    Psi1: ``nu - sigma^2`` (needs ``sigma > 0``).  Psi2:
    ``-((nu - sigma^2)/(2 sigma))^2`` (needs ``sigma > 0`` and ``nu > sigma^2``,
    so that it lies on the negative half-line).  Psi2_tilde:
    ``-(sqrt(nu) - sigma)^2`` (needs ``sigma < sqrt(nu)``).
    """
    q = as_stretched(q)
    s, n = q.sigma, q.nu
    pid = PhaseId(pid)
    if pid is PhaseId.Psi1:
        if s <= 0:
            raise DomainError("Psi1 has no critical point for sigma <= 0")
        return complex(n - s * s)
    if pid is PhaseId.Psi2:
        if s <= 0 or n <= s * s:
            raise DomainError("Psi2 has a critical point on xi < 0 only for 0 < sigma^2 < nu")
        return complex(-((n - s * s) / (2 * s)) ** 2)
    if pid is PhaseId.Psi2_tilde:
        if s >= math.sqrt(n):
            raise DomainError("Psi2_tilde has a critical point only for sigma < sqrt(nu)")
        return complex(-(math.sqrt(n) - s) ** 2)
    raise DomainError(f"no closed-form critical point for {pid.value}")


def diffraction_coefficient(phi, params, check_floor=True):
    """``A(phi; k) = sqrt(2/pi) (h/k) (2/phi^4) e^{-i pi/4}``.

    The formula holds for ``phi >> (h/k)^{1/3}``; with ``check_floor`` angles
    below ``(h/k)^{1/3} * big_threshold`` raise :class:`DomainError`.
    """
    hk = params.h / params.k
    if not phi > 0:
        raise DomainError("phi must be positive")
    floor = hk ** (1 / 3) * params.big_threshold
    if check_floor and phi < floor:
        raise DomainError(f"phi = {phi:.4g} below the far-zone floor {floor:.4g}")
    return complex(math.sqrt(2 / math.pi) * hk * 2.0 / phi ** 4 * _E_M_PI4)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _require(q, params, label, check_region):
    if check_region and label not in region_memberships(q, params):
        raise RegionError(f"({q.sigma:.6g}, {q.nu:.6g}) is not in {label.value}")


def _prefactor(nu):
    """``(e^{-i pi/4}/2 pi) e^{i(2/3) nu^{3/2}} / nu^{1/4}``."""
    return _E_M_PI4 / (2 * math.pi) * np.exp(2j / 3 * nu ** 1.5) / nu ** 0.25


def _ratio_H(c, mult=None):
    """``H'(xi)/w1'(xi) e^{i c xi}`` (times ``mult(xi)``)."""
    def f(xi):
        v = _assemble(1.0, [_hf(xi, 1)], [_w1f(xi, 1)], c, xi)
        return v if mult is None else v * mult(xi)
    return f


def _ratio_I(c):
    def f(xi):
        return _assemble(1.0, [_if(xi, 1)], [_w1f(xi, 1)], c, xi)
    return f


def _left_legs(f, c, cfg):
    """``(-inf, 0]``: axis past the critical point ``-c^2`` (if any), then up."""
    L = 4.0 + (2.25 * c * c if c < 0 else 0.0)
    rate = math.sqrt(L) + c
    legs = [_left_tail(f, -L, True, rate, math.sqrt(L) + abs(c) + 1.0, cfg, "left")]
    legs += _graded_axis(-L, 0.0, lambda x: abs(math.sqrt(-x) + c), cfg, "axis_left", f)
    return legs


def _ray_leg(f, c, angle, cfg):
    rate = c * math.sin(angle)
    if rate <= 0:
        raise DomainError("the ray integral needs e^{i c xi} to decay along the ray")
    return truncated_ray(f, 0.0, angle, rate, abs(c) + 1.0, cfg, "ray")


_I_AXIS_END = 16.0  # I'/w1' ~ e^{-(4/3) xi^{3/2}} is below 1e-30 here


def _right_axis_leg(f, c, cfg):
    return segment(0.0, _I_AXIS_END, abs(c) + 2.0, cfg, "axis_right", f)


def _penumbra_c(q):
    return q.sigma - math.sqrt(q.nu)


# ---------------------------------------------------------------------------
# D2: illuminated far zone
# ---------------------------------------------------------------------------

DOUBLED_D2_COEFFICIENT = 2.0
D2_COEFFICIENT = 1.0


def u0_D2(q, params, check_region=True, coefficient=D2_COEFFICIENT):
    """Stationary-phase value of ``U0`` in the illuminated far zone.

    ``U0 ~ (C e^{-i pi/4}/sqrt(pi sigma)) (2 sigma)^4/(nu - sigma^2)^4 e^{i Psi2(xi2)}``
    with ``Psi2(xi2) = (sigma nu + nu^2/(2 sigma) - sigma^3/6)/2``.  The
    stationary-phase evaluation of the ``D`` integral gives ``C = 1``; pass
    ``coefficient=DOUBLED_D2_COEFFICIENT`` for the alternative normalization.
    The relative remainder order is ``sigma^3/(nu - sigma^2)^3``;
    ``est_error`` is that order times ``|U0|``.
    """
    q = as_stretched(q)
    _require(q, params, RegionLabel.D2_illuminated_far, check_region)
    s, n = q.sigma, q.nu
    if s <= 0 or n <= s * s:
        raise DomainError("the D2 formula needs 0 < sigma^2 < nu")
    psi = 0.5 * (s * n + n * n / (2 * s) - s ** 3 / 6.0)
    val = (coefficient * _E_M_PI4 / math.sqrt(math.pi * s) * (2 * s) ** 4 / (n - s * s) ** 4
           * np.exp(1j * psi))
    order = abs(s ** 3 / (n - s * s) ** 3)
    return AttenuationResult(complex(val), abs(val) * order, 0, "stationary phase at xi2", 0,
                             remainder_order=order)


def reduced_stationary_phase(q, coefficient=D2_COEFFICIENT):
    """Near-limit form of the D2 value, valid where D2 and D3 overlap.

    ``(C e^{-i pi/4}/sqrt(pi)) nu^{-1/4} (sqrt(nu) - sigma)^{-4}
    e^{i((2/3) nu^{3/2} + (sqrt(nu) - sigma)^3/3)}``.
    """
    q = as_stretched(q)
    d = math.sqrt(q.nu) - q.sigma
    if d <= 0:
        raise DomainError("needs sigma < sqrt(nu)")
    return complex(coefficient * _E_M_PI4 / math.sqrt(math.pi) * q.nu ** -0.25 * d ** -4
                   * np.exp(1j * (2 / 3 * q.nu ** 1.5 + d ** 3 / 3)))


# ---------------------------------------------------------------------------
# D4: penumbra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PenumbraArgs:
    """Phase ``theta`` and Fresnel argument ``zcap`` (positive on the lit side)."""

    theta: float
    zcap: float


def penumbra_args(q):
    """``Theta = (2/3) nu^{3/2} - sqrt(nu)(sigma - sqrt(nu))^2``, ``Z = nu^{1/4}(sqrt(nu) - sigma)``."""
    q = as_stretched(q)
    if q.nu <= 0:
        raise DomainError("penumbra arguments need nu > 0")
    r = math.sqrt(q.nu)
    return PenumbraArgs(2 / 3 * q.nu ** 1.5 - r * (q.sigma - r) ** 2, q.nu ** 0.25 * (r - q.sigma))


def fresnel_part(q):
    """``e^{i Theta} Phi(Z)``, the incident-plus-Fresnel part of ``W0`` near the limit ray."""
    a = penumbra_args(q)
    return complex(np.exp(1j * a.theta) * special.fresnel_phi(a.zcap))


def f_penumbra(q):
    """Fresnel reduction of the ``F`` integral: ``-e^{i Theta} Phi(-Z)``."""
    a = penumbra_args(q)
    return complex(-np.exp(1j * a.theta) * special.fresnel_phi(-a.zcap))


def background_integrals(q, cfg=None):
    """``int_{-inf}^0 (H'/w1') e^{i c xi}`` and ``int_0^inf (I'/w1') e^{i c xi}``, ``c = sigma - sqrt(nu)``."""
    cfg = cfg or QuadratureConfig()
    q = as_stretched(q)
    c = _penumbra_c(q)
    fh, fi = _ratio_H(c), _ratio_I(c)
    left = integrate(None, _left_legs(fh, c, cfg), cfg, "background H'/w1'")
    right = integrate(None, [_right_axis_leg(fi, c, cfg)], cfg, "background I'/w1'")
    return left, right


def w0_D4(q, params, cfg=None, check_region=True):
    """Penumbra form ``W0 ~ e^{i Theta} Phi(Z) + P [B_H - i B_I]``.

    ``P = (e^{-i pi/4}/2 pi) e^{i(2/3) nu^{3/2}}/nu^{1/4}`` and ``B_H``, ``B_I``
    are the :func:`background_integrals`.  ``est_error`` is the quadrature
    error plus ``|c|^3`` times the Fresnel part (its remainder order);
    the background remainder has no rate and is not included.
    """
    q = as_stretched(q)
    _require(q, params, RegionLabel.D4_penumbra, check_region)
    c = _penumbra_c(q)
    left, right = background_integrals(q, cfg)
    pre = _prefactor(q.nu)
    fr = fresnel_part(q)
    val = fr + pre * (left.value - 1j * right.value)
    est = abs(pre) * (left.est_error + right.est_error) + abs(fr) * abs(c) ** 3
    return AttenuationResult(complex(val), est, left.evaluations + right.evaluations,
                             f"fresnel + background[{left.contour_descriptor} | "
                             f"{right.contour_descriptor}]",
                             left.panel_count + right.panel_count,
                             left.roundoff_limited or right.roundoff_limited,
                             remainder_order=abs(c) ** 3)


# ---------------------------------------------------------------------------
# D3 / D5: near zones on either side of the limit ray
# ---------------------------------------------------------------------------


def u0_D3(q, params, cfg=None, check_region=True, ray_angle=D3_RAY_ANGLE):
    """Reduced integral for ``U0`` on the lit side of the limit ray.

    ``U0 ~ P [int_{-inf}^0 + int_0^{inf e^{i ray_angle}}] (H'/w1') e^{i c xi} dxi``
    with ``c = sigma - sqrt(nu) < 0``.  ``est_error`` covers quadrature only;
    the remainder of the reduction has no rate (``remainder_order`` is None).
    """
    cfg = cfg or QuadratureConfig()
    q = as_stretched(q)
    _require(q, params, RegionLabel.D3_illuminated_near, check_region)
    c = _penumbra_c(q)
    if c >= 0:
        raise DomainError("the D3 integral needs sigma < sqrt(nu)")
    if not -math.pi / 2 < ray_angle < 0:
        raise DomainError("the D3 ray must lie in the fourth quadrant")
    f = _ratio_H(c)
    legs = _left_legs(f, c, cfg) + [_ray_leg(f, c, ray_angle, cfg)]
    r = integrate(None, legs, cfg, "U0 (D3)")
    pre = _prefactor(q.nu)
    return AttenuationResult(complex(pre * r.value), abs(pre) * r.est_error, r.evaluations,
                             r.contour_descriptor, r.panel_count, r.roundoff_limited)


Q_VARIANTS = ("phase", "real")


def q_terms(xi, nu, q_order=3, variant="phase"):
    """Partial sum of ``Q = xi/(4 nu) + a xi^2/(4 sqrt(nu)) + 5 xi^2/(32 nu^2)``.

    ``q_order`` (0..3) counts terms in the order written.  The middle term
    comes from expanding ``e^{i xi^2/(4 sqrt(nu))}`` in the phase of
    ``w1(xi - nu)``, so ``variant="phase"`` uses ``a = i``; ``"real"`` uses
    ``a = 1``.
    """
    if not 0 <= q_order <= 3:
        raise DomainError("q_order must be 0, 1, 2 or 3")
    if variant not in Q_VARIANTS:
        raise DomainError(f"variant must be one of {Q_VARIANTS}")
    xi = np.asarray(xi, dtype=complex)
    a = 1j if variant == "phase" else 1.0
    terms = (xi / (4 * nu), a * xi ** 2 / (4 * math.sqrt(nu)), 5 * xi ** 2 / (32 * nu ** 2))
    out = np.zeros_like(xi)
    for t in terms[:q_order]:
        out = out + t
    return complex(out) if out.ndim == 0 else out


def w0_D5(q, params, cfg=None, q_order=2, check_region=True, variant="phase",
          ray_angle=D5_RAY_ANGLE):
    """Reduced integral for ``W0`` on the shadow side of the limit ray.

    ``W0 ~ P [int_{-inf}^0 + int_0^{inf e^{i pi/4}}] (H'/w1') e^{i c xi} (1 + Q) dxi``
    with ``c = sigma - sqrt(nu) > 0`` and ``Q`` from :func:`q_terms`.
    ``est_error`` covers quadrature only.
    """
    cfg = cfg or QuadratureConfig()
    q = as_stretched(q)
    _require(q, params, RegionLabel.D5_shadow_near, check_region)
    c = _penumbra_c(q)
    if c <= 0:
        raise DomainError("the D5 integral needs sigma > sqrt(nu)")
    if not 0 < ray_angle < math.pi / 3 - 0.05:
        raise DomainError("the D5 ray must lie between the real axis and the pole ray")
    q_terms(0.0, q.nu, q_order, variant)
    mult = None if q_order == 0 else (lambda x: 1.0 + q_terms(x, q.nu, q_order, variant))
    f = _ratio_H(c, mult)
    legs = _left_legs(f, c, cfg) + [_ray_leg(f, c, ray_angle, cfg)]
    r = integrate(None, legs, cfg, "W0 (D5)")
    pre = _prefactor(q.nu)
    return AttenuationResult(complex(pre * r.value), abs(pre) * r.est_error, r.evaluations,
                             r.contour_descriptor, r.panel_count, r.roundoff_limited)


# ---------------------------------------------------------------------------
# D6: creeping waves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CreepingModeTable:
    """Pairs ``(zeta_j, A_j)`` and the separator ``Im zeta_n < epsilon < Im zeta_{n+1}``."""

    modes: tuple
    epsilon: float

    @property
    def zeros(self):
        return np.array([z for z, _ in self.modes])

    @property
    def coefficients(self):
        return np.array([a for _, a in self.modes])


def excitation_coefficients(zeta, form="I"):
    """``A_j = -i I'(zeta)/(zeta w1(zeta))``.

    ``form="H"`` uses the equivalent ``H'(zeta)/(zeta w1(zeta))``: at a zero
    of ``w1'`` the relation ``sqrt(pi) w1 = i I + H`` gives ``I' = i H'``.
    """
    zeta = np.asarray(zeta, dtype=complex)
    if form == "I":
        return -1j * special.I_prime(zeta) / (zeta * special.w1(zeta))
    if form == "H":
        return special.H_prime(zeta) / (zeta * special.w1(zeta))
    raise DomainError("form must be 'I' or 'H'")


@lru_cache(maxsize=None)
def _mode_table(n):
    z = special.w1_prime_zeros(n + 1).zeros
    a = excitation_coefficients(z[:n])
    eps = 0.5 * (z[n - 1].imag + z[n].imag)
    return CreepingModeTable(tuple((complex(zj), complex(aj)) for zj, aj in zip(z[:n], a)),
                             float(eps))


def creeping_modes(n, params=None):
    """Table of the first ``n`` (1..20) creeping modes; depends on no physical parameter."""
    if not 1 <= int(n) <= 20:
        raise DomainError("mode count must lie in 1..20")
    return _mode_table(int(n))


def w0_D6(q, params, n=3, check_region=True):
    """Residue series ``W0 ~ sum_j A_j w1(zeta_j - nu) e^{i sigma zeta_j}``.

    ``est_error = e^{-epsilon sigma}``, the remainder bound with unit constant.
    """
    q = as_stretched(q)
    _require(q, params, RegionLabel.D6_deep_shadow, check_region)
    tab = creeping_modes(n, params)
    z, a = tab.zeros, tab.coefficients
    terms = a * special.w1(z - q.nu) * np.exp(1j * q.sigma * z)
    order = math.exp(-tab.epsilon * q.sigma)
    return AttenuationResult(complex(terms.sum()), order, 0, f"{n} residues", 0,
                             remainder_order=order)


def w0_D6_far(q, params, n=3, check_region=True):
    """Far form of the residue series for large ``nu``.

    ``W0 ~ (e^{i pi/4}/nu^{1/4}) sum_j A_j e^{i((2/3) nu^{3/2} + zeta_j (sigma - sqrt(nu)))}``
    with relative remainder order ``nu^{-1/2}``.
    """
    q = as_stretched(q)
    _require(q, params, RegionLabel.D6_deep_shadow, check_region)
    if q.nu <= 0:
        raise DomainError("the far form needs nu > 0")
    tab = creeping_modes(n, params)
    z, a = tab.zeros, tab.coefficients
    c = q.sigma - math.sqrt(q.nu)
    val = (np.exp(0.25j * np.pi) / q.nu ** 0.25
           * np.sum(a * np.exp(1j * (2 / 3 * q.nu ** 1.5 + z * c))))
    order = q.nu ** -0.5
    return AttenuationResult(complex(val), abs(val) * order + math.exp(-tab.epsilon * q.sigma), 0,
                             f"{n} residues, far form", 0, remainder_order=order)
