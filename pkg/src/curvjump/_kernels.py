"""Inner loops: ray quadrature for the Scorer-type integral and Airy series.

Each kernel has a numba implementation (``*_nb``) and a numpy fallback
(``*_np``); the public dispatchers pick one according to
:data:`curvjump._accel.USE_NUMBA`.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)

# e-folds kept below the peak of the integrand before a ray is cut off
RAY_CUTOFF = 46.0
# phase+log-modulus variation allowed across one Gauss-Legendre panel
PANEL_BUDGET = 9.0

AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840


# ---------------------------------------------------------------------------
# int_0^{inf e^{i theta}} t^m exp(z t - t^3/3) dt, m = 0, 1, 2
# ---------------------------------------------------------------------------


@njit
def _ray_extent(ar, br):
    """Return (peak position, peak log-modulus, cutoff radius)."""
    if ar > 0.0:
        rpk = math.sqrt(ar / (3.0 * br))
        phimax = ar * rpk - br * rpk ** 3
    else:
        rpk = 0.0
        phimax = 0.0
    target = phimax - RAY_CUTOFF
    hi = rpk + 1.0
    while ar * hi - br * hi ** 3 + 2.0 * math.log(1.0 + hi) > target:
        hi *= 2.0
    lo = rpk
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ar * mid - br * mid ** 3 + 2.0 * math.log(1.0 + mid) > target:
            lo = mid
        else:
            hi = mid
    return rpk, phimax, hi


@njit
def _panel_width(r, a_abs, b_abs, rmax):
    h = rmax - r
    for _ in range(3):
        rate = a_abs + 3.0 * b_abs * (r + h) ** 2 + 1e-300
        h = min(PANEL_BUDGET / rate, rmax - r)
    return h


def _scorer_ray_nb_impl(z, theta, gx, gw, out, shift):
    n = z.shape[0]
    for i in range(n):
        rot = complex(math.cos(theta[i]), math.sin(theta[i]))
        a = z[i] * rot
        b = rot * rot * rot / 3.0
        rpk, phimax, rmax = _ray_extent(a.real, b.real)
        shift[i] = phimax
        a_abs = abs(a)
        b_abs = abs(b)
        s0 = 0j
        s1 = 0j
        s2 = 0j
        r = 0.0
        while r < rmax:
            h = _panel_width(r, a_abs, b_abs, rmax)
            half = 0.5 * h
            for j in range(gx.shape[0]):
                rr = r + half * (gx[j] + 1.0)
                e = np.exp(a * rr - b * rr ** 3 - phimax) * (half * gw[j])
                t = rr * rot
                s0 += e
                s1 += e * t
                s2 += e * t * t
            r += h
        out[i, 0] = s0 * rot
        out[i, 1] = s1 * rot
        out[i, 2] = s2 * rot


_scorer_ray_nb = njit(_scorer_ray_nb_impl)


def _scorer_ray_np(z, theta, gx, gw, out, shift):
    for i in range(z.shape[0]):
        rot = np.exp(1j * theta[i])
        a = z[i] * rot
        b = rot ** 3 / 3.0
        rpk, phimax, rmax = _ray_extent(a.real, b.real)
        shift[i] = phimax
        edges = [0.0]
        while edges[-1] < rmax:
            edges.append(edges[-1] + _panel_width(edges[-1], abs(a), abs(b), rmax))
        edges = np.asarray(edges)
        half = 0.5 * np.diff(edges)
        rr = (edges[:-1, None] + half[:, None] * (gx[None, :] + 1.0)).ravel()
        wts = (half[:, None] * gw[None, :]).ravel()
        e = np.exp(a * rr - b * rr ** 3 - phimax) * wts
        t = rr * rot
        out[i, 0] = e.sum() * rot
        out[i, 1] = (e * t).sum() * rot
        out[i, 2] = (e * t * t).sum() * rot


def scorer_ray(z, theta, use_numba=None):
    """Moments ``int t^m exp(z t - t^3/3) dt`` along ``arg t = theta``.

    Returns ``(mant, shift)`` with ``mant`` of shape ``(n, 3)``; the
    integrals equal ``mant * exp(shift)``.  ``|theta|`` must stay below
    ``pi/6`` so that the cubic term decays along the ray.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    theta = np.ascontiguousarray(np.broadcast_to(theta, z.shape), dtype=np.float64)
    out = np.empty((z.size, 3), dtype=np.complex128)
    shift = np.empty(z.size, dtype=np.float64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        _scorer_ray_nb(z, theta, _GL_X, _GL_W, out, shift)
    else:
        _scorer_ray_np(z, theta, _GL_X, _GL_W, out, shift)
    return out, shift


# ---------------------------------------------------------------------------
# Maclaurin series of Ai and Ai'
# ---------------------------------------------------------------------------


def _airy_series_nb_impl(x, out):
    for i in range(x.shape[0]):
        xi = x[i]
        x3 = xi * xi * xi
        f = 1.0 + 0j
        g = xi
        fp = 0j
        gp = 1.0 + 0j
        tf = 1.0 + 0j
        tg = xi
        tfp = xi * xi / 2.0
        tgp = 1.0 + 0j
        fp = tfp
        k = 0
        while k < 400:
            tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
            tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
            tgp = tgp * x3 / ((3 * k + 3) * (3 * k + 1))
            if k > 0:
                tfp = tfp * x3 / (3 * k * (3 * k + 2))
                fp += tfp
            f += tf
            g += tg
            gp += tgp
            k += 1
            scale = abs(f) + abs(g) + abs(fp) + abs(gp)
            if abs(tf) + abs(tg) + abs(tfp) + abs(tgp) < 1e-18 * scale and k > 2:
                break
        out[i, 0] = AI0 * f + AIP0 * g
        out[i, 1] = AI0 * fp + AIP0 * gp


_airy_series_nb = njit(_airy_series_nb_impl)


def _airy_series_np(x, out):
    x3 = x ** 3
    f = np.ones_like(x)
    g = x.copy()
    tf = np.ones_like(x)
    tg = x.copy()
    tfp = x * x / 2.0
    fp = tfp.copy()
    tgp = np.ones_like(x)
    gp = np.ones_like(x)
    for k in range(400):
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        tgp = tgp * x3 / ((3 * k + 3) * (3 * k + 1))
        if k > 0:
            tfp = tfp * x3 / (3 * k * (3 * k + 2))
            fp += tfp
        f += tf
        g += tg
        gp += tgp
        scale = np.abs(f) + np.abs(g) + np.abs(fp) + np.abs(gp)
        small = np.abs(tf) + np.abs(tg) + np.abs(tfp) + np.abs(tgp) < 1e-18 * scale
        if k > 2 and small.all():
            break
    out[:, 0] = AI0 * f + AIP0 * g
    out[:, 1] = AI0 * fp + AIP0 * gp


def airy_series(x, use_numba=None):
    """Ai and Ai' from their Maclaurin series; columns (Ai, Ai')."""
    x = np.ascontiguousarray(x, dtype=np.complex128).ravel()
    out = np.empty((x.size, 2), dtype=np.complex128)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        _airy_series_nb(x, out)
    else:
        _airy_series_np(x, out)
    return out
