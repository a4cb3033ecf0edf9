"""Fock-Airy functions, Scorer-type functions, Fresnel integral, zeros of w1'.

Conventions
-----------
``w1(z) = 2 sqrt(pi) e^{i pi/6} Ai(z e^{2 pi i/3})``, ``w2(z) = conj(w1(conj z))``,
``v = (w1 + w2) / 2i``.  The inhomogeneous functions are

    H(z) = int_0^inf exp(z t - t^3/3) dt          (H'' - z H = 1)
    I(z) = int_0^inf exp(-i(s z + s^3/3)) ds      (I'' - z I = i)

and ``sqrt(pi) w1 = i I + H``.

Evaluation
----------
* ``w1``/``w2`` and first derivatives come from the exponentially scaled AMOS
  Airy routines (``scipy.special.airye``), so they carry a log-scale and never
  overflow internally.
* ``H`` and its first two derivatives are computed by Gauss-Legendre
  quadrature along a straight ray ``arg t = theta`` chosen per point so that
  the integrand never exceeds the size of the result by more than a few
  e-folds.  Where no such ray exists (large ``|z|`` with ``40 deg < |arg z| <
  70 deg``) the connection formula ``H(z) = sqrt(pi) w2(z) + e^{2 pi i/3}
  H(z e^{2 pi i/3})`` (or its mirror image) moves the quadrature into a
  well-conditioned sector.  ``I`` is a rotated ``H``.
* Scaled results are reported as ``mantissa * exp(log_scale)``.
"""

from dataclasses import dataclass
from functools import lru_cache
import csv
import math

import numpy as np
from scipy import special as sp

from ._kernels import scorer_ray, airy_series
from .errors import ConvergenceError, DomainError, OverflowGuardError, SectorError

SQRT_PI = math.sqrt(math.pi)
Z_CAP = 1.0e4
SWITCHOVER_RADIUS = 6.5
# amplification (in e-folds) tolerated on a direct quadrature ray
_LOSS_MAX = 5.0
_LOG_MAX = 709.0

_ROT = np.exp(2j * np.pi / 3)
_W1_PREF = 2.0 * SQRT_PI * np.exp(1j * np.pi / 6)
_W1P_PREF = 2.0 * SQRT_PI * np.exp(5j * np.pi / 6)
_THETAS = np.linspace(-np.pi / 9, np.pi / 9, 17)


@dataclass(frozen=True)
class ScaledComplex:
    """Complex number ``mantissa * exp(log_scale)`` with ``1 <= |mantissa| < e``.

    Zero is stored as ``(0, 0)``.  Fields may be numpy arrays of equal shape.
    """

    mantissa: object
    log_scale: object

    @classmethod
    def from_parts(cls, mant, lsc):
        mant = np.asarray(mant, dtype=complex)
        lsc = np.asarray(lsc, dtype=float)
        mod = np.abs(mant)
        nz = mod > 0
        total = np.where(nz, lsc + np.log(np.where(nz, mod, 1.0)), 0.0)
        ls = np.floor(total)
        m = np.where(nz, mant * np.exp(np.where(nz, lsc - ls, 0.0)), 0.0)
        ls = np.where(nz, ls, 0.0)
        if m.ndim == 0:
            return cls(complex(m), float(ls))
        return cls(m, ls)

    def to_complex(self):
        """Plain value; raises :class:`OverflowGuardError` if it does not fit."""
        if np.any(np.asarray(self.log_scale) > _LOG_MAX):
            raise OverflowGuardError("value exceeds double range; use the scaled form")
        return self.mantissa * np.exp(self.log_scale)

    def log(self):
        """Complex logarithm (branch of ``np.log`` on the mantissa)."""
        return np.log(self.mantissa) + self.log_scale

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex.from_parts(self.mantissa * other.mantissa,
                                            self.log_scale + other.log_scale)
        return ScaledComplex.from_parts(self.mantissa * other, self.log_scale)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _prep(z):
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr).ravel()
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) > Z_CAP):
        raise OverflowGuardError(f"|z| must be finite and <= {Z_CAP:g}")
    return arr, scalar, np.shape(z)


def _finish(mant, lsc, scalar, shape, scaled):
    if scaled:
        sc = ScaledComplex.from_parts(mant, lsc)
        if scalar:
            return ScaledComplex(complex(sc.mantissa[0]), float(sc.log_scale[0]))
        return ScaledComplex(sc.mantissa.reshape(shape), sc.log_scale.reshape(shape))
    mod = np.abs(mant)
    with np.errstate(divide="ignore"):
        top = lsc + np.log(mod)
    if np.any(top > _LOG_MAX):
        raise OverflowGuardError("value exceeds double range; pass scaled=True")
    val = mant * np.exp(lsc)
    return complex(val[0]) if scalar else val.reshape(shape)


def _add_scaled(m1, l1, m2, l2):
    top = np.maximum(l1, l2)
    return m1 * np.exp(l1 - top) + m2 * np.exp(l2 - top), top


def _airy_scaled(x):
    """Ai, Ai' of complex ``x`` as (mant_ai, mant_aip, log_scale)."""
    eai, eaip, _, _ = sp.airye(x)
    zeta = (2.0 / 3.0) * x * np.sqrt(x)
    phase = np.exp(-1j * zeta.imag)
    return eai * phase, eaip * phase, -zeta.real


def _w1_scaled(z, deriv):
    mai, maip, lsc = _airy_scaled(z * _ROT)
    if deriv == 0:
        return _W1_PREF * mai, lsc
    if deriv == 1:
        return _W1P_PREF * maip, lsc
    if deriv == 2:
        return z * _W1_PREF * mai, lsc
    raise DomainError("deriv must be 0, 1 or 2")


def _w2_scaled(z, deriv):
    m, l = _w1_scaled(np.conj(z), deriv)
    return np.conj(m), l


def _best_rays(z):
    """Per-point ray angle and the peak log-modulus reached on that ray."""
    rot = np.exp(1j * _THETAS)
    ar = (z[:, None] * rot[None, :]).real
    br = np.cos(3 * _THETAS) / 3.0
    pos = np.maximum(ar, 0.0)
    phimax = (2.0 / 3.0) * pos * np.sqrt(pos / (3.0 * br))
    k = np.argmin(phimax + 1e-3 * ar, axis=1)
    rows = np.arange(z.size)
    return _THETAS[k], phimax[rows, k]


def _expected_log_h(z):
    r = np.maximum(np.abs(z), 1.0)
    alg = -np.log(r)
    expo = ((2.0 / 3.0) * z * np.sqrt(z)).real - 0.25 * np.log(r) + math.log(SQRT_PI)
    expo = np.where(np.abs(np.angle(z)) < 2 * np.pi / 3, expo, -np.inf)
    return np.maximum(alg, expo)


def _h_direct(z):
    theta, _ = _best_rays(z)
    return scorer_ray(z, theta)


def _h_scaled(z):
    """H, H', H'' for 1-d complex ``z`` as (mant[n, 3], log_scale[n])."""
    theta, phimax = _best_rays(z)
    # e-folds by which the integrand peak exceeds the result (the algebraic
    # -1/z decay is not counted: the integrand does not cancel there)
    loss = phimax - np.maximum(_expected_log_h(z), 0.0)
    bad = loss > _LOSS_MAX
    mant = np.empty((z.size, 3), dtype=complex)
    lsc = np.empty(z.size)
    good = ~bad
    if np.any(good):
        mant[good], lsc[good] = scorer_ray(z[good], theta[good])
    if np.any(bad):
        zc = z[bad]
        _, up_pk = _best_rays(zc * _ROT)
        _, dn_pk = _best_rays(zc * np.conj(_ROT))
        upper = up_pk <= dn_pk
        rot = np.where(upper, _ROT, np.conj(_ROT))
        rm, rl = _h_direct(zc * rot)
        cm = np.empty_like(rm)
        w2m, w2l = _w2_scaled(zc, 0)
        w1m, w1l = _w1_scaled(zc, 0)
        wl = np.where(upper, w2l, w1l)
        top = np.maximum(wl, rl)
        for d in range(3):
            w2m, _ = _w2_scaled(zc, d)
            w1m, _ = _w1_scaled(zc, d)
            wm = np.where(upper, w2m, w1m)
            cm[:, d] = (SQRT_PI * wm * np.exp(wl - top)
                        + rot ** (d + 1) * rm[:, d] * np.exp(rl - top))
        mant[bad] = cm
        lsc[bad] = top
    return mant, lsc


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------


def w1(z, deriv=0, scaled=False):
    """Fock's Airy function ``w1`` (``deriv`` = 0, 1 or 2)."""
    arr, scalar, shape = _prep(z)
    m, l = _w1_scaled(arr, deriv)
    return _finish(m, l, scalar, shape, scaled)


def w1_prime(z, scaled=False):
    return w1(z, 1, scaled)


def w2(z, deriv=0, scaled=False):
    """``w2(z) = conj(w1(conj z))``."""
    arr, scalar, shape = _prep(z)
    m, l = _w2_scaled(arr, deriv)
    return _finish(m, l, scalar, shape, scaled)


def w2_prime(z, scaled=False):
    return w2(z, 1, scaled)


def v(z, deriv=0, scaled=False):
    """``v = (w1 - w2) / 2i = sqrt(pi) Ai``, the classical Airy companion."""
    arr, scalar, shape = _prep(z)
    m1, l1 = _w1_scaled(arr, deriv)
    m2, l2 = _w2_scaled(arr, deriv)
    m, l = _add_scaled(m1, l1, -m2, l2)
    return _finish(m / 2j, l, scalar, shape, scaled)


def scorer_H(z, deriv=0, scaled=False):
    """``H(z) = pi Hi(z) = int_0^inf exp(z t - t^3/3) dt`` and derivatives."""
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    arr, scalar, shape = _prep(z)
    mant, lsc = _h_scaled(arr)
    return _finish(mant[:, deriv], lsc, scalar, shape, scaled)


def scorer_I(z, deriv=0, scaled=False):
    """``I(z) = int_0^inf exp(-i(s z + s^3/3)) ds = e^{-i pi/6} H(z e^{-2 pi i/3})``."""
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    arr, scalar, shape = _prep(z)
    mant, lsc = _h_scaled(arr * np.conj(_ROT))
    fac = np.exp(-1j * np.pi / 6 - 2j * np.pi * deriv / 3)
    return _finish(fac * mant[:, deriv], lsc, scalar, shape, scaled)


def H_prime(z, scaled=False):
    return scorer_H(z, 1, scaled)


def I_prime(z, scaled=False):
    return scorer_I(z, 1, scaled)


def w1_contour(z, deriv=0):
    """``w1`` and derivatives from its defining contour integral.

    ``sqrt(pi) w1^(m)(z) = int_gamma t^m exp(z t - t^3/3) dt`` with gamma running
    in from ``inf e^{-2 pi i/3}`` and out along the positive axis.  Uses the
    Scorer ray quadrature only, so it is independent of the AMOS path; meant
    for ``|z| <= 8``.
    """
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    arr, scalar, shape = _prep(z)
    if np.any(np.abs(arr) > 8.0):
        raise DomainError("w1_contour is restricted to |z| <= 8")
    ma, la = _h_direct(arr)
    mb, lb = _h_direct(arr * np.conj(_ROT))
    fac = np.exp(-2j * np.pi * (deriv + 1) / 3)
    val = (ma[:, deriv] * np.exp(la) - fac * mb[:, deriv] * np.exp(lb)) / SQRT_PI
    return complex(val[0]) if scalar else val.reshape(shape)


def w1_series(z, deriv=0):
    """``w1`` from the Maclaurin series of Ai (small ``|z|`` only)."""
    arr, scalar, shape = _prep(z)
    out = airy_series(arr * _ROT)
    if deriv == 0:
        val = _W1_PREF * out[:, 0]
    elif deriv == 1:
        val = _W1P_PREF * out[:, 1]
    else:
        raise DomainError("series path provides deriv 0 or 1")
    return complex(val[0]) if scalar else val.reshape(shape)


def fresnel_phi(z):
    """``Phi(z) = e^{-i pi/4}/sqrt(pi) int_{-inf}^z e^{i t^2} dt = erfc(-e^{-i pi/4} z)/2``."""
    arr = np.asarray(z)
    val = 0.5 * sp.erfc(-np.exp(-0.25j * np.pi) * arr.astype(complex))
    return complex(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# leading-order asymptotics
# ---------------------------------------------------------------------------


def _arg_in(z, lo, hi, lo_closed=True, hi_closed=True):
    """Representative of ``arg z`` in [lo, lo + 2 pi) if it lies inside (lo, hi)."""
    a = np.angle(z)
    a = np.where(a < lo, a + 2 * np.pi, a)
    a = np.where(a >= lo + 2 * np.pi, a - 2 * np.pi, a)
    tol = 1e-14
    ok_lo = a >= lo - tol if lo_closed else a > lo + tol
    ok_hi = a <= hi + tol if hi_closed else a < hi - tol
    return a, ok_lo & ok_hi


def _pow_branch(r, a, p):
    return r ** p * np.exp(1j * p * a)


def _check_asym(arr, min_radius):
    if np.any(np.abs(arr) < min_radius):
        raise DomainError(f"asymptotic forms need |z| >= {min_radius}")


def asymptotic_w1(z, sector=None, min_radius=SWITCHOVER_RADIUS):
    """Leading-order ``w1`` with its error order ``|z|^{-3/2}``.

    ``sector`` is ``"single"`` (``-4 pi/3 <= arg z <= 0``, one exponential) or
    ``"double"`` (``0 < arg z < 2 pi/3``, both exponentials); ``None`` picks the
    one containing ``arg z``.  Returns ``(ScaledComplex, error_order)``.
    """
    arr, scalar, shape = _prep(z)
    _check_asym(arr, min_radius)
    r = np.abs(arr)
    a1, in1 = _arg_in(arr, -4 * np.pi / 3, 0.0)
    a2, in2 = _arg_in(arr, 0.0, 2 * np.pi / 3, lo_closed=False, hi_closed=False)
    if sector is None:
        use_single = in1
    elif sector == "single":
        if not np.all(in1):
            raise SectorError("single-exponential branch needs -4pi/3 <= arg z <= 0")
        use_single = np.ones(arr.shape, bool)
    elif sector == "double":
        if not np.all(in2):
            raise SectorError("two-exponential branch needs 0 < arg z < 2pi/3")
        use_single = np.zeros(arr.shape, bool)
    else:
        raise DomainError(f"unknown sector {sector!r}")
    a = np.where(use_single, a1, a2)
    q = _pow_branch(r, a, -0.25)
    e = (2.0 / 3.0) * _pow_branch(r, a, 1.5)
    m_plus, l_plus = q * np.exp(1j * e.imag), e.real
    m_minus, l_minus = 1j * q * np.exp(-1j * e.imag), -e.real
    m2, l2 = _add_scaled(m_plus, l_plus, m_minus, l_minus)
    mant = np.where(use_single, m_plus, m2)
    lsc = np.where(use_single, l_plus, l2)
    return _finish(mant, lsc, scalar, shape, True), r ** -1.5 if not scalar else float(r[0] ** -1.5)


def asymptotic_H(z, min_radius=SWITCHOVER_RADIUS):
    """Leading-order ``H``; returns ``(ScaledComplex, error_order)``."""
    arr, scalar, shape = _prep(z)
    _check_asym(arr, min_radius)
    r = np.abs(arr)
    a, inner = _arg_in(arr, -2 * np.pi / 3, 2 * np.pi / 3)
    alg_m, alg_l = -1.0 / arr, np.zeros(arr.size)
    e = (2.0 / 3.0) * _pow_branch(r, a, 1.5)
    ex_m = SQRT_PI * _pow_branch(r, a, -0.25) * np.exp(1j * e.imag)
    m2, l2 = _add_scaled(alg_m, alg_l, ex_m, e.real)
    mant = np.where(inner, m2, alg_m)
    lsc = np.where(inner, l2, alg_l)
    err = np.where(inner, np.maximum(r ** -2.0, r ** -1.5), r ** -2.0)
    return _finish(mant, lsc, scalar, shape, True), float(err[0]) if scalar else err


def asymptotic_I(z, min_radius=SWITCHOVER_RADIUS):
    """Leading-order ``I``; returns ``(ScaledComplex, error_order)``."""
    arr, scalar, shape = _prep(z)
    _check_asym(arr, min_radius)
    r = np.abs(arr)
    a, outer = _arg_in(arr, 0.0, 4 * np.pi / 3)
    alg_m, alg_l = -1j / arr, np.zeros(arr.size)
    e = (2.0 / 3.0) * _pow_branch(r, a, 1.5)
    ex_m = SQRT_PI * _pow_branch(r, a, -0.25) * np.exp(-1j * e.imag)
    m2, l2 = _add_scaled(alg_m, alg_l, ex_m, -e.real)
    mant = np.where(outer, m2, alg_m)
    lsc = np.where(outer, l2, alg_l)
    err = np.where(outer, np.maximum(r ** -2.0, r ** -1.5), r ** -2.0)
    return _finish(mant, lsc, scalar, shape, True), float(err[0]) if scalar else err


# ---------------------------------------------------------------------------
# zeros of w1'
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroTable:
    """First ``count`` zeros of ``w1'`` ordered by modulus (read-only array)."""

    zeros: np.ndarray
    count: int


def _airy_prime_zero_seed(k):
    t = 3 * np.pi * (4 * k - 3) / 8
    return -t ** (2 / 3) * (1 - 7 / (48 * t ** 2) + 35 / (288 * t ** 4))


def airy_prime_zero(k):
    """k-th zero of Ai' (negative real) by Newton iteration from the asymptotic seed."""
    x = _airy_prime_zero_seed(k)
    for _ in range(50):
        ai, aip, _, _ = sp.airy(x)
        dx = aip / (x * ai)
        x -= dx
        if abs(dx) <= 4e-16 * abs(x):
            break
    else:
        raise ConvergenceError(f"Newton iteration for a'_{k} did not converge")
    return x


@lru_cache(maxsize=None)
def _zero_table(n):
    zs = np.array([abs(airy_prime_zero(k)) * np.exp(1j * np.pi / 3) for k in range(1, n + 1)])
    d1 = np.abs(w1(zs, 1))
    d2 = np.abs(zs * w1(zs, 0))
    if np.any(d1 > 1e-10 * d2 * np.abs(zs)):
        raise ConvergenceError("zero of w1' fails the residual bound")
    zs.setflags(write=False)
    return ZeroTable(zs, n)


def w1_prime_zeros(n):
    """Zeros ``zeta_j = |a'_j| e^{i pi/3}`` of ``w1'``, j = 1..n (1 <= n <= 50)."""
    if not 1 <= int(n) <= 50:
        raise DomainError("zero count must lie in 1..50")
    return _zero_table(int(n))


# ---------------------------------------------------------------------------
# table dump
# ---------------------------------------------------------------------------

TABLE_FUNCTIONS = {
    "w1": lambda z: w1(z),
    "w1_prime": lambda z: w1(z, 1),
    "w2": lambda z: w2(z),
    "w2_prime": lambda z: w2(z, 1),
    "v": lambda z: v(z),
    "I": lambda z: scorer_I(z),
    "I_prime": lambda z: scorer_I(z, 1),
    "H": lambda z: scorer_H(z),
    "H_prime": lambda z: scorer_H(z, 1),
}


def dump_table(fh, z, names=tuple(TABLE_FUNCTIONS)):
    """Write ``re_z,im_z,re_f,im_f,f_name`` rows (17 significant digits)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["re_z", "im_z", "re_f", "im_f", "f_name"])
    for name in names:
        vals = np.atleast_1d(TABLE_FUNCTIONS[name](z))
        for zz, f in zip(z, vals):
            writer.writerow([f"{zz.real:.16e}", f"{zz.imag:.16e}",
                             f"{f.real:.16e}", f"{f.imag:.16e}", name])
