"""Globally adaptive Gauss-Kronrod (7/15) quadrature over piecewise-linear contours.

A contour is a list of :class:`Leg` objects (straight pieces in the complex
plane).  Infinite rays are truncated by the contour builders, which attach an
explicit bound for the dropped tail.  All legs are refined together: at every
sweep the panels whose error exceeds their share of the global tolerance are
bisected, and all new panels are evaluated in a single vectorized call of the
integrand.
"""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import QuadratureError, ToleranceNotMet

# QUADPACK G7-K15 abscissae and weights
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

KRONROD_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _j, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_j] = _w
    GAUSS_WEIGHTS[14 - _j] = _w
GAUSS_WEIGHTS[7] = _WG[3]


DEFAULT_TAIL_ROTATION = {
    "left_up": math.pi / 2,
    "left_down": -math.pi / 2,
    "right_up": math.pi / 4,
    "right_down": -math.pi / 4,
}

ALTERNATE_TAIL_ROTATION = {
    "left_up": 2 * math.pi / 3,
    "left_down": -2 * math.pi / 3,
    "right_up": math.pi / 6,
    "right_down": -math.pi / 6,
}


@dataclass
class QuadratureConfig:
    """Tolerances and contour options for the oracle integrals.

    ``tail_rotation`` maps a tail identity to the direction (radians) of the
    ray replacing it: ``left_up``/``left_down`` leave the negative real axis,
    ``right_up``/``right_down`` leave the positive real axis.
    ``tail_truncation_bound`` is the dropped-tail target relative to the
    integrand size at the start of the ray.  ``noise_level`` is the relative
    accuracy of one integrand evaluation: a panel whose Kronrod-Gauss
    difference is below ``noise_level * int |f|`` is not refined further.
    """

    rel_tol: float = 1e-10
    abs_floor: float = 1e-13
    max_subdivisions: int = 2000
    tail_rotation: dict = field(default_factory=lambda: dict(DEFAULT_TAIL_ROTATION))
    tail_truncation_bound: float = 1e-14
    panel_phase: float = 2.0
    noise_level: float = 1e-13
    trace: object = None

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.abs_floor < 0:
            raise ValueError("abs_floor must be non-negative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        for key in DEFAULT_TAIL_ROTATION:
            self.tail_rotation.setdefault(key, DEFAULT_TAIL_ROTATION[key])
        up, down = self.tail_rotation["left_up"], self.tail_rotation["left_down"]
        if not (math.pi / 2 - 1e-12 <= up < math.pi and -math.pi < down <= -math.pi / 2 + 1e-12):
            raise ValueError("left tails must leave the axis into the left half-plane")
        r_up, r_down = self.tail_rotation["right_up"], self.tail_rotation["right_down"]
        if not (0 < r_up < math.pi / 3 - 0.05 and -math.pi / 2 < r_down < 0):
            raise ValueError("right tails must stay between the real axis and the pole ray")

    def replace(self, **kw):
        data = dict(self.__dict__)
        data["tail_rotation"] = dict(self.tail_rotation)
        data.update(kw)
        return QuadratureConfig(**data)


@dataclass(frozen=True)
class Leg:
    """Straight piece ``start -> end`` traversed with ``n_init`` initial panels."""

    start: complex
    end: complex
    n_init: int = 1
    tail_bound: float = 0.0
    label: str = "segment"
    func: object = field(default=None, compare=False, repr=False)


@dataclass
class AttenuationResult:
    """Value of one attenuation-factor integral (or asymptotic formula).

    ``est_error`` is an absolute error estimate.  Asymptotic formulas also set
    ``remainder_order``, the relative remainder order with unit constant, or
    leave it ``None`` when the remainder carries no rate.
    """

    value: complex
    est_error: float
    evaluations: int = 0
    contour_descriptor: str = ""
    panel_count: int = 0
    roundoff_limited: bool = False
    layout: object = field(default=None, repr=False, compare=False)
    remainder_order: object = None

    def __add__(self, other):
        return AttenuationResult(
            self.value + other.value,
            self.est_error + other.est_error,
            self.evaluations + other.evaluations,
            f"{self.contour_descriptor} + {other.contour_descriptor}",
            self.panel_count + other.panel_count,
            self.roundoff_limited or other.roundoff_limited,
        )

    def scaled(self, factor, shift=0.0):
        """``factor * value + shift`` with the error scaled accordingly."""
        return AttenuationResult(factor * self.value + shift, abs(factor) * self.est_error,
                                 self.evaluations, self.contour_descriptor,
                                 self.panel_count, self.roundoff_limited)


def describe(legs):
    parts = []
    for leg in legs:
        parts.append(f"{leg.label}[{leg.start.real:.4g}{leg.start.imag:+.4g}j"
                     f"->{leg.end.real:.4g}{leg.end.imag:+.4g}j]")
    return " ".join(parts)


def _panel_rules(funcs, idx, leg_start, leg_delta, a, b, noise):
    """K15 value, |K15 - G7| and roundoff scale for panels ``[a, b]`` (leg parameter)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    t = mid[:, None] + half[:, None] * KRONROD_NODES[None, :]
    xi = leg_start[:, None] + leg_delta[:, None] * t
    vals = np.empty(xi.shape, dtype=complex)
    for g, members in funcs:
        sel = np.isin(idx, members)
        if sel.any():
            vals[sel] = np.asarray(g(xi[sel].ravel()), dtype=complex).reshape(-1, 15)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand returned a non-finite value on the contour")
    jac = (leg_delta * half)[:, None]
    k = (vals * jac) @ KRONROD_WEIGHTS
    g = (vals * jac) @ GAUSS_WEIGHTS
    ro = noise * (np.abs(vals * jac) @ KRONROD_WEIGHTS)
    return k, np.abs(k - g), ro


def integrate(f, legs, cfg=None, name="integral"):
    """Integrate the vectorized function ``f`` along ``legs``.

    A leg with its own ``func`` uses that integrand instead of ``f`` (which
    may then be ``None``); this lets equivalent forms of one integrand be
    used where each is numerically stable.

    Returns an :class:`AttenuationResult`.  Raises :class:`ToleranceNotMet`
    (carrying the partial result) when more than ``cfg.max_subdivisions``
    bisections beyond the initial partition would be needed.
    """
    cfg = cfg or QuadratureConfig()
    legs = [leg for leg in legs if leg.end != leg.start]
    descriptor = describe(legs)
    tails = float(sum(leg.tail_bound for leg in legs))
    if not legs:
        return AttenuationResult(0j, tails, 0, descriptor, 0)
    starts = np.array([leg.start for leg in legs], dtype=complex)
    deltas = np.array([leg.end - leg.start for leg in legs], dtype=complex)
    groups = {}
    for i, leg in enumerate(legs):
        g = leg.func if leg.func is not None else f
        if g is None:
            raise QuadratureError(f"no integrand for leg {leg.label}")
        groups.setdefault(id(g), (g, []))[1].append(i)
    funcs = [(g, np.array(m)) for g, m in groups.values()]

    idx, a, b = [], [], []
    for i, leg in enumerate(legs):
        edges = np.linspace(0.0, 1.0, max(1, int(leg.n_init)) + 1)
        idx.extend([i] * (edges.size - 1))
        a.extend(edges[:-1])
        b.extend(edges[1:])
    idx = np.array(idx)
    a = np.array(a)
    b = np.array(b)
    val, err, ro = _panel_rules(funcs, idx, starts[idx], deltas[idx], a, b, cfg.noise_level)
    evals = 15 * idx.size
    roundoff_limited = False
    splits = 0

    while True:
        total = val.sum()
        est = np.maximum(err, ro).sum() + tails
        tol = max(cfg.rel_tol * abs(total), cfg.abs_floor)
        if est <= tol:
            break
        live = err > ro
        if not live.any() or err[live].sum() <= ro.sum():
            roundoff_limited = True
            break
        share = tol / (2.0 * idx.size)
        pick = live & (err > share)
        if not pick.any():
            pick = live & (err >= err[live].max())
        if splits + pick.sum() > cfg.max_subdivisions:
            partial = AttenuationResult(complex(total), float(est), evals, descriptor, idx.size)
            _emit_trace(cfg, name, partial)
            raise ToleranceNotMet(
                f"{name}: {cfg.max_subdivisions} subdivisions exhausted (error {est:.3g} > {tol:.3g})",
                partial)
        splits += int(pick.sum())
        mid = 0.5 * (a[pick] + b[pick])
        na = np.concatenate([a[pick], mid])
        nb = np.concatenate([mid, b[pick]])
        nidx = np.concatenate([idx[pick], idx[pick]])
        nv, ne, nr = _panel_rules(funcs, nidx, starts[nidx], deltas[nidx], na, nb, cfg.noise_level)
        evals += 15 * nidx.size
        keep = ~pick
        idx = np.concatenate([idx[keep], nidx])
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        ro = np.concatenate([ro[keep], nr])

    res = AttenuationResult(complex(total), float(est), evals, descriptor, int(idx.size),
                            roundoff_limited, (idx, a, b))
    _emit_trace(cfg, name, res)
    return res


def _emit_trace(cfg, name, res):
    if cfg.trace is None:
        return
    rec = {
        "integral": name,
        "panel_count": res.panel_count,
        "contour": res.contour_descriptor,
        "value_re": res.value.real,
        "value_im": res.value.imag,
        "est_error": res.est_error,
    }
    if hasattr(cfg.trace, "write"):
        cfg.trace.write(json.dumps(rec) + "\n")
    else:
        with open(cfg.trace, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")


def segment(start, end, rate, cfg, label="segment", func=None):
    """Leg with initial panels sized to ``cfg.panel_phase`` radians of phase."""
    length = abs(end - start)
    n = max(1, int(math.ceil(length * max(rate, 1e-3) / cfg.panel_phase)))
    return Leg(complex(start), complex(end), n, 0.0, label, func)


def truncated_ray(f, start, direction, rate, osc, cfg, label="ray"):
    """Ray from ``start`` in direction ``e^{i direction}`` cut where ``f`` is negligible.

    ``rate`` is a lower estimate of the exponential decay rate of ``|f|``
    along the ray, ``osc`` an estimate of its phase rate.  The cut radius is
    extended until the sampled envelope ``|f(end)|/rate`` is below the
    truncation target; that envelope is reported as the tail bound.
    """
    if rate <= 0:
        raise QuadratureError(f"{label}: ray does not decay (rate {rate:.3g})")
    unit = complex(math.cos(direction), math.sin(direction))
    start = complex(start)
    f0 = abs(complex(np.asarray(f(np.array([start])))[0]))
    target = cfg.tail_truncation_bound * max(f0, 1e-300) / rate + 1e-2 * cfg.abs_floor
    length = (math.log(1.0 / cfg.tail_truncation_bound) + 5.0) / rate
    for _ in range(8):
        tail = abs(complex(np.asarray(f(np.array([start + length * unit])))[0])) / rate
        if np.isfinite(tail) and tail <= target:
            break
        length *= 1.5
    else:
        raise QuadratureError(f"{label}: integrand does not decay along the ray")
    n = max(1, int(math.ceil(length * (rate + abs(osc)) / cfg.panel_phase)))
    return Leg(start, start + length * unit, n, float(tail), label, f)


def integrate_on_layout(legs, layout, cfg=None, name="integral"):
    """Kronrod sum over a frozen panel layout (no refinement).

    ``layout`` is the ``(leg index, a, b)`` triple of a previous adaptive run
    on geometrically identical legs.  With the nodes held fixed the result is
    a smooth function of any parameters inside the integrand, which keeps
    finite differences of it free of refinement jitter.
    """
    cfg = cfg or QuadratureConfig()
    legs = [leg for leg in legs if leg.end != leg.start]
    idx, a, b = layout
    starts = np.array([leg.start for leg in legs], dtype=complex)
    deltas = np.array([leg.end - leg.start for leg in legs], dtype=complex)
    groups = {}
    for i, leg in enumerate(legs):
        groups.setdefault(id(leg.func), (leg.func, []))[1].append(i)
    funcs = [(g, np.array(m)) for g, m in groups.values()]
    val, err, ro = _panel_rules(funcs, idx, starts[idx], deltas[idx], a, b, cfg.noise_level)
    est = float(np.maximum(err, ro).sum() + sum(leg.tail_bound for leg in legs))
    return AttenuationResult(complex(val.sum()), est, 15 * idx.size, describe(legs),
                             int(idx.size), False, layout)
