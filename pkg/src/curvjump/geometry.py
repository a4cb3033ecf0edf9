"""Coordinates, curvature model, stretching, validity limits and zone labels.

The boundary is straight for ``s <= 0`` and has curvature ``h`` for ``s > 0``.
Stretched coordinates are ``sigma = (h^2 k / 2)^{1/3} s`` and
``nu = (2 h k^2)^{1/3} n``.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import DomainError, ValidityError


@dataclass(frozen=True)
class ProblemParams:
    """Wavenumber ``k``, curvature jump ``h`` and the thresholds realizing >> and <<."""

    k: float
    h: float
    big_threshold: float = 3.0
    small_threshold: float = 1.0 / 3.0

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError("k must be positive and finite")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise DomainError("h must be positive (convex side only)")
        if not 0 < self.small_threshold < 1 < self.big_threshold:
            raise DomainError("need 0 < small_threshold < 1 < big_threshold")
        if self.k / self.h < self.big_threshold ** 3:
            raise DomainError("k/h must be at least big_threshold^3")

    @property
    def ratio(self):
        """The large parameter ``k/h``."""
        return self.k / self.h


@dataclass(frozen=True)
class SurfaceCoords:
    s: float
    n: float

    def __post_init__(self):
        if not self.n >= 0:
            raise DomainError("normal distance n must be >= 0")


@dataclass(frozen=True)
class StretchedCoords:
    sigma: float
    nu: float

    def __post_init__(self):
        if not self.nu >= 0:
            raise DomainError("nu must be >= 0")


@dataclass(frozen=True)
class PhysicalPoint:
    x: float
    y: float

    @property
    def r(self):
        return math.hypot(self.x, self.y)

    @property
    def phi(self):
        """Polar angle in [-pi, pi)."""
        a = math.atan2(self.y, self.x)
        return -math.pi if a == math.pi else a

    @classmethod
    def from_polar(cls, r, phi):
        if r < 0:
            raise DomainError("r must be >= 0")
        return cls(r * math.cos(phi), r * math.sin(phi))


class RegionLabel(str, Enum):
    D1_core = "D1_core"
    D2_illuminated_far = "D2_illuminated_far"
    D3_illuminated_near = "D3_illuminated_near"
    D4_penumbra = "D4_penumbra"
    D5_shadow_near = "D5_shadow_near"
    D6_deep_shadow = "D6_deep_shadow"
    OutsideValidity = "OutsideValidity"

    def __str__(self):
        return self.value


def heaviside(x):
    """theta(x) with theta(0) = 0."""
    return 1.0 if x > 0 else 0.0


def curvature(x, params):
    """Boundary curvature at arc length ``x``: 0 for ``x <= 0``, ``h`` after."""
    return params.h * heaviside(x)


def _scales(params):
    return (params.h ** 2 * params.k / 2.0) ** (1 / 3), (2.0 * params.h * params.k ** 2) ** (1 / 3)


def stretch(p, params):
    cs, cn = _scales(params)
    return StretchedCoords(cs * p.s, cn * p.n)


def unstretch(q, params):
    cs, cn = _scales(params)
    return SurfaceCoords(q.sigma / cs, q.nu / cn)


@dataclass(frozen=True)
class CartesianResult:
    """Main-term Cartesian position plus remainder estimates (lengths and relative)."""

    point: PhysicalPoint
    remainder_x: float
    remainder_y: float
    relative_remainder: float


def cartesian_from_surface(p, params, check=True):
    """``(s, n) -> (x, y)`` from the truncated expansion about the jump point.

    For ``s > 0``: ``x = s + h n s - h^2 s^3/6``, ``y = n - h s^2/2``; the
    remainders ``h^3 s^3 (n + h s^2)`` and ``h^2 s^2 (n + h s^2)`` are reported
    relative to the distance scale ``max(|s|, n)``.
    """
    s, n, h = p.s, p.n, params.h
    if s <= 0:
        return CartesianResult(PhysicalPoint(float(s), float(n)), 0.0, 0.0, 0.0)
    x = s + h * n * s - h ** 2 * s ** 3 / 6.0
    y = n - h * s ** 2 / 2.0
    rx = h ** 3 * s ** 3 * (n + h * s ** 2)
    ry = h ** 2 * s ** 2 * (n + h * s ** 2)
    rel = max(rx, ry) / max(abs(s), n)
    if check and rel > params.small_threshold:
        raise ValidityError(f"expansion remainder {rel:.3g} exceeds {params.small_threshold:.3g}")
    return CartesianResult(PhysicalPoint(x, y), rx, ry, rel)


def surface_from_cartesian(pt, params, check=True):
    """Invert :func:`cartesian_from_surface` (main terms) by Newton iteration."""
    x, y, h = pt.x, pt.y, params.h
    if x <= 0:
        if y < 0:
            raise ValidityError("point lies below the boundary")
        return SurfaceCoords(float(x), float(y))
    s, n = x, y + h * x * x / 2.0
    for _ in range(50):
        fx = s + h * n * s - h * h * s ** 3 / 6.0 - x
        fy = n - h * s * s / 2.0 - y
        j11 = 1.0 + h * n - h * h * s * s / 2.0
        j12 = h * s
        j21 = -h * s
        j22 = 1.0
        det = j11 * j22 - j12 * j21
        ds = (fx * j22 - fy * j12) / det
        dn = (j11 * fy - j21 * fx) / det
        s -= ds
        n -= dn
        if abs(ds) + abs(dn) <= 1e-15 * (abs(s) + abs(n) + 1e-300):
            break
    if -1e-12 * max(abs(s), 1.0) < n < 0:
        n = 0.0  # rounding on the boundary itself
    if n < 0 or s <= 0:
        raise ValidityError("point is not representable in boundary coordinates")
    p = SurfaceCoords(s, n)
    cartesian_from_surface(p, params, check=check)
    return p


@dataclass(frozen=True)
class PolarRelations:
    """Main terms of ``k(r - s)`` and ``phi`` with their remainder orders."""

    k_r_minus_s: float
    phi: float
    remainder_k_r_minus_s: float
    remainder_phi: float


def polar_relations(q, params):
    sigma, nu = q.sigma, q.nu
    if sigma == 0:
        raise DomainError("polar relations are singular at sigma = 0")
    th = heaviside(sigma)
    hk = params.h / params.k
    krs = 0.5 * (nu ** 2 / (2 * sigma) + th * (nu * sigma - sigma ** 3 / 6.0))
    phi = (2 * hk) ** (1 / 3) * (nu - th * sigma ** 2) / (2 * sigma)
    r_krs = hk ** (2 / 3) * abs(sigma ** 3 * (nu + sigma ** 2) + sigma * (nu - sigma ** 2 / 3) ** 2)
    r_phi = hk * abs(sigma * (nu + sigma ** 2) + (nu - sigma ** 2) ** 2 / sigma)
    return PolarRelations(krs, phi, r_krs, r_phi)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    sigma_limit: float
    nu_limit: float
    sigma_margin: float
    nu_margin: float

    def __bool__(self):
        return self.valid


def validity_check(q, params):
    """``sigma <= c (k/h)^{2/15}`` and ``nu <= c (k/h)^{4/15}`` with ``c = small_threshold``."""
    c = params.small_threshold
    sl = c * params.ratio ** (2 / 15)
    nl = c * params.ratio ** (4 / 15)
    return ValidityReport(bool(q.sigma <= sl and q.nu <= nl), sl, nl, sl - q.sigma, nl - q.nu)


def _near_limit(sigma, nu, B, s):
    d = abs(math.sqrt(nu) - sigma)
    return nu >= B and d <= s * nu ** 0.125 and nu ** 0.25 * d >= B


def region_memberships(q, params):
    """Every zone whose defining inequalities hold (zones overlap near their borders)."""
    if not validity_check(q, params):
        return {RegionLabel.OutsideValidity}
    sigma, nu = q.sigma, q.nu
    B, s = params.big_threshold, params.small_threshold
    if nu + sigma < B:
        return {RegionLabel.D1_core}
    out = set()
    if nu >= B and nu - sigma ** 2 >= B * sigma:
        out.add(RegionLabel.D2_illuminated_far)
    if sigma >= B and sigma ** 2 - nu >= B * sigma:
        out.add(RegionLabel.D6_deep_shadow)
    if nu >= B and abs(math.sqrt(nu) - sigma) <= s:
        out.add(RegionLabel.D4_penumbra)
    if _near_limit(sigma, nu, B, s):
        out.add(RegionLabel.D3_illuminated_near if sigma < math.sqrt(nu)
                else RegionLabel.D5_shadow_near)
    return out or {RegionLabel.D1_core}


_PRECEDENCE = (
    RegionLabel.OutsideValidity,
    RegionLabel.D1_core,
    RegionLabel.D2_illuminated_far,
    RegionLabel.D6_deep_shadow,
    RegionLabel.D4_penumbra,
    RegionLabel.D3_illuminated_near,
    RegionLabel.D5_shadow_near,
)


def region_classify(q, params):
    """Single zone label; overlaps are resolved in the order D2, D6, D4, D3, D5."""
    m = region_memberships(q, params)
    for lab in _PRECEDENCE:
        if lab in m:
            return lab
    return RegionLabel.D1_core  # pragma: no cover


def as_stretched(q):
    """Accept a StretchedCoords or a ``(sigma, nu)`` pair."""
    if isinstance(q, StretchedCoords):
        return q
    sigma, nu = q
    return StretchedCoords(float(sigma), float(nu))
