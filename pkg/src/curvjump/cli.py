"""Command-line front end: field maps, oracle/asymptotic comparison, zero tables, self-test.

Usage::

    curvjump fieldmap --grid -2:4:7 --grid 0:12:5 --method both --out map.csv
    curvjump compare --grid 2:2:1 --grid 30:120:4
    curvjump zeros --modes 5
    curvjump selftest

Exit codes: 0 success, 1 usage error, 2 when more than 10% of the points fail
(numerical failure, or a failed accuracy gate in ``compare``).
"""

import argparse
import contextlib
from dataclasses import asdict, dataclass, field
import json
import math
import sys
import time

import numpy as np

from . import asymptotics as asy
from . import oracle, special
from .errors import CurvjumpError, DomainError
from .geometry import (PhysicalPoint, ProblemParams, RegionLabel, StretchedCoords,
                       cartesian_from_surface, region_classify, stretch,
                       surface_from_cartesian, unstretch)
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_USAGE, EXIT_FAILURES = 0, 1, 2
FAILURE_FRACTION = 0.10

CSV_HEADER = ("sigma,nu,x,y,region,method,re_inc,im_inc,re_out,im_out,re_tot,im_tot,"
              "est_error,error")

DEFAULT_GATES = {
    RegionLabel.D2_illuminated_far.value: 0.05,
    RegionLabel.D3_illuminated_near.value: 0.05,
    RegionLabel.D4_penumbra.value: 0.05,
    RegionLabel.D5_shadow_near.value: 0.05,
    RegionLabel.D6_deep_shadow.value: 0.10,
}

_QUAD_KEYS = ("rel_tol", "abs_floor", "max_subdivisions", "tail_truncation_bound",
              "panel_phase", "noise_level")


class UsageError(Exception):
    """Malformed command line or configuration."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxisSpec:
    """``count`` equispaced values from ``start`` to ``stop`` (``start`` alone if count is 1)."""

    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text):
        parts = str(text).split(":")
        if len(parts) != 3:
            raise UsageError(f"axis spec {text!r} is not start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"axis spec {text!r}: {exc}") from None
        spec = cls(start, stop, count)
        spec.validate()
        return spec

    def validate(self):
        if self.count < 1:
            raise UsageError("axis count must be >= 1")
        if self.count > 1 and not self.stop > self.start:
            raise UsageError("axis stop must exceed start")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise UsageError("axis bounds must be finite")

    def values(self):
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.count}"


@dataclass
class RunConfig:
    """Everything that determines a run; identical configs give identical output."""

    params: ProblemParams = field(default_factory=lambda: ProblemParams(k=1e12, h=1.0))
    grid: tuple = (AxisSpec(1.0, 1.0, 1), AxisSpec(3.0, 3.0, 1))
    coords: str = "stretched"
    method: str = "direct"
    output: str = "csv"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    mode_count: int = 3
    q_order: int = 2
    gates: dict = field(default_factory=lambda: dict(DEFAULT_GATES))
    region: str = None
    out: str = None

    def validate(self):
        if len(self.grid) != 2:
            raise UsageError("exactly two grid axes are required")
        for ax in self.grid:
            ax.validate()
        if self.coords not in ("stretched", "physical"):
            raise UsageError("coords must be stretched or physical")
        if self.method not in ("direct", "asymptotic", "both"):
            raise UsageError("method must be direct, asymptotic or both")
        if self.output not in ("csv", "json"):
            raise UsageError("output must be csv or json")
        if not 1 <= self.mode_count <= 20:
            raise UsageError("modes must lie in 1..20")
        if not 0 <= self.q_order <= 3:
            raise UsageError("q_order must lie in 0..3")
        if self.region is not None and self.region not in {r.value for r in RegionLabel}:
            raise UsageError(f"unknown region {self.region!r}")

    def to_json(self):
        return {
            "params": asdict(self.params),
            "grid": [str(a) for a in self.grid],
            "coords": self.coords,
            "method": self.method,
            "output": self.output,
            "quadrature": {k: getattr(self.quadrature, k) for k in _QUAD_KEYS},
            "mode_count": self.mode_count,
            "q_order": self.q_order,
            "gates": dict(self.gates),
            "region": self.region,
        }


def _params_from(data, base):
    kw = asdict(base)
    kw.update({k: float(v) for k, v in data.items() if k in kw})
    try:
        return ProblemParams(**kw)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def config_from_json(data, base=None):
    """Build a :class:`RunConfig` from a JSON mapping that mirrors its fields."""
    cfg = base or RunConfig()
    unknown = set(data) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if "params" in data:
        cfg.params = _params_from(data["params"], cfg.params)
    if "grid" in data:
        cfg.grid = tuple(AxisSpec.parse(a) for a in data["grid"])
    for key in ("coords", "method", "output", "region", "out"):
        if key in data:
            setattr(cfg, key, data[key])
    for key in ("mode_count", "q_order"):
        if key in data:
            setattr(cfg, key, int(data[key]))
    if "gates" in data:
        cfg.gates.update({k: float(v) for k, v in data["gates"].items()})
    if "quadrature" in data:
        bad = set(data["quadrature"]) - set(_QUAD_KEYS) - {"tail_rotation"}
        if bad:
            raise UsageError(f"unknown quadrature keys: {sorted(bad)}")
        try:
            cfg.quadrature = cfg.quadrature.replace(**data["quadrature"])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"quadrature: {exc}") from None
    return cfg


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@dataclass
class FieldSample:
    """One output row: attenuation factors at one grid point by one method."""

    sigma: float
    nu: float
    x: float
    y: float
    region: str
    method: str
    incident: complex
    outgoing: complex
    total: complex
    est_error: float
    error: str = ""
    failed: bool = False


_NAN = complex(math.nan, math.nan)


def _grid_points(cfg):
    """Row-major list of ``(sigma, nu, x, y, note)``; ``note`` flags unusable points."""
    a, b = cfg.grid[0].values(), cfg.grid[1].values()
    pts = []
    for u in a:
        for v in b:
            u, v = float(u), float(v)
            if cfg.coords == "stretched":
                try:
                    q = StretchedCoords(u, v)
                    pt = cartesian_from_surface(unstretch(q, cfg.params), cfg.params,
                                                check=False).point
                    pts.append((u, v, pt.x, pt.y, ""))
                except CurvjumpError as exc:
                    pts.append((u, v, math.nan, math.nan, f"invalid point: {exc}"))
            else:
                try:
                    p = surface_from_cartesian(PhysicalPoint(u, v), cfg.params)
                    q = stretch(p, cfg.params)
                    pts.append((q.sigma, q.nu, u, v, ""))
                except CurvjumpError as exc:
                    pts.append((math.nan, math.nan, u, v, f"outside validity: {exc}"))
    return pts


def _direct(q, cfg):
    inc = oracle.incident_attenuation(q)
    r = oracle.u0_direct(q, cfg.quadrature)
    return inc, r.value, r.est_error


def _asymptotic(q, region, cfg):
    """``(incident, outgoing, est_error)`` from the formula of ``region``."""
    p, qc = cfg.params, cfg.quadrature
    inc = oracle.incident_attenuation(q)
    if q.sigma <= 0 and region != RegionLabel.D1_core:
        return inc, 0j, 0.0  # U0 vanishes identically before the jump point
    if region == RegionLabel.D2_illuminated_far:
        r = asy.u0_D2(q, p)
        return inc, r.value, r.est_error
    if region == RegionLabel.D3_illuminated_near:
        r = asy.u0_D3(q, p, qc)
        return inc, r.value, r.est_error
    if region == RegionLabel.D4_penumbra:
        r = asy.w0_D4(q, p, qc)
    elif region == RegionLabel.D5_shadow_near:
        r = asy.w0_D5(q, p, qc, q_order=cfg.q_order)
    elif region == RegionLabel.D6_deep_shadow:
        r = asy.w0_D6(q, p, n=cfg.mode_count)
    else:
        return None
    return inc, r.value - inc, r.est_error


def evaluate_point(sigma, nu, x, y, note, cfg, methods):
    """Samples for one grid point; failures are recorded, never raised."""
    out = []
    if note:
        for m in methods:
            out.append(FieldSample(sigma, nu, x, y, RegionLabel.OutsideValidity.value, m,
                                   _NAN, _NAN, _NAN, math.nan, note, False))
        return out
    q = StretchedCoords(sigma, nu)
    region = region_classify(q, cfg.params)
    for m in methods:
        failed, err = False, ""
        try:
            res = _direct(q, cfg) if m == "direct" else _asymptotic(q, region, cfg)
            if res is None:
                err = f"no asymptotic formula in {region.value}"
        except (CurvjumpError, ArithmeticError) as exc:
            res, failed, err = None, True, f"{type(exc).__name__}: {exc}"
        if res is None:
            out.append(FieldSample(sigma, nu, x, y, region.value, m, _NAN, _NAN, _NAN,
                                   math.nan, err, failed))
            continue
        inc, outg, est = res
        out.append(FieldSample(sigma, nu, x, y, region.value, m, complex(inc), complex(outg),
                               complex(inc) + complex(outg), float(est), err, False))
    return out


def run_samples(cfg):
    methods = ("direct", "asymptotic") if cfg.method == "both" else (cfg.method,)
    rows = []
    for pt in _grid_points(cfg):
        rows.extend(evaluate_point(*pt, cfg, methods))
    return rows


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def fmt(v):
    """17 significant digits, lowercase scientific notation, ``nan`` for missing values."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".16e")


def _csv_field(text):
    text = str(text).replace("\n", " ")
    if any(ch in text for ch in ',"'):
        return '"' + text.replace('"', '""') + '"'
    return text


def samples_to_csv(rows):
    lines = [CSV_HEADER]
    for r in rows:
        vals = [r.sigma, r.nu, r.x, r.y]
        cplx = [r.incident.real, r.incident.imag, r.outgoing.real, r.outgoing.imag,
                r.total.real, r.total.imag, r.est_error]
        lines.append(",".join([fmt(v) for v in vals] + [r.region, r.method]
                              + [fmt(v) for v in cplx] + [_csv_field(r.error)]))
    return "\n".join(lines) + "\n"


def _jnum(v):
    v = float(v)
    return None if math.isnan(v) else float(fmt(v))


def samples_to_json(rows, cfg):
    names = CSV_HEADER.split(",")
    out = []
    for r in rows:
        vals = [r.sigma, r.nu, r.x, r.y, r.region, r.method, r.incident.real, r.incident.imag,
                r.outgoing.real, r.outgoing.imag, r.total.real, r.total.imag, r.est_error,
                r.error]
        out.append({k: (_jnum(v) if isinstance(v, float) else v) for k, v in zip(names, vals)})
    return json.dumps({"config": cfg.to_json(), "rows": out}, indent=1, sort_keys=True) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_for(n_failed, n_total):
    return EXIT_FAILURES if n_total and n_failed > FAILURE_FRACTION * n_total else EXIT_OK


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def run_fieldmap(cfg):
    """Evaluate the grid and write one row per point and method; returns the exit code."""
    rows = run_samples(cfg)
    text = samples_to_csv(rows) if cfg.output == "csv" else samples_to_json(rows, cfg)
    _emit(text, cfg.out)
    return _exit_for(sum(r.failed for r in rows), len(rows))


@dataclass
class Comparison:
    sigma: float
    nu: float
    region: str
    quantity: str
    direct: complex
    asymptotic: complex
    deviation: float
    gate: float
    passed: bool
    error: str = ""


_DEV_FLOOR = 1e-300


def compare_point(sigma, nu, x, y, note, cfg):
    if note:
        return None
    d, a = evaluate_point(sigma, nu, x, y, note, cfg, ("direct", "asymptotic"))
    if a.error and not a.failed:
        return None
    outgoing_only = a.region in (RegionLabel.D2_illuminated_far.value,
                                 RegionLabel.D3_illuminated_near.value)
    qty = "outgoing" if outgoing_only else "total"
    dv = d.outgoing if outgoing_only else d.total
    av = a.outgoing if outgoing_only else a.total
    gate = cfg.gates.get(a.region, math.nan)
    dev = abs(av - dv) / max(abs(dv), _DEV_FLOOR)
    err = "; ".join(e for e in (d.error, a.error) if e)
    return Comparison(sigma, nu, a.region, qty, dv, av, dev, gate,
                      bool(math.isfinite(dev) and dev <= gate), err)


def comparison_report(comps, cfg):
    """Per-point lines followed by the per-region summary block."""
    lines = ["sigma,nu,region,quantity,rel_deviation,gate,result,error"]
    for c in comps:
        lines.append(",".join([fmt(c.sigma), fmt(c.nu), c.region, c.quantity, fmt(c.deviation),
                               fmt(c.gate), "pass" if c.passed else "fail",
                               _csv_field(c.error)]))
    lines.append("")
    lines.append("# summary")
    lines.append("# gates: " + ", ".join(f"{k}={v:g}" for k, v in sorted(cfg.gates.items())))
    if not comps:
        where = f" {cfg.region}" if cfg.region else ""
        lines.append(f"# no points in region{where}")
    for region in sorted({c.region for c in comps}):
        devs = np.array([c.deviation for c in comps if c.region == region])
        npass = sum(c.passed for c in comps if c.region == region)
        lines.append(f"# {region}: points={devs.size} pass={npass} max={fmt(np.nanmax(devs))} "
                     f"mean={fmt(np.nanmean(devs))}")
    return "\n".join(lines) + "\n"


def comparison_json(comps, cfg):
    pts = [{"sigma": c.sigma, "nu": c.nu, "region": c.region, "quantity": c.quantity,
            "rel_deviation": _jnum(c.deviation), "gate": c.gate, "pass": c.passed,
            "error": c.error} for c in comps]
    summary = {}
    for region in sorted({c.region for c in comps}):
        devs = np.array([c.deviation for c in comps if c.region == region])
        summary[region] = {"points": int(devs.size), "max": _jnum(np.nanmax(devs)),
                           "mean": _jnum(np.nanmean(devs)),
                           "pass": int(sum(c.passed for c in comps if c.region == region))}
    body = {"config": cfg.to_json(), "points": pts, "summary": summary, "gates": cfg.gates}
    if not comps:
        body["message"] = "no points in region"
    return json.dumps(body, indent=1, sort_keys=True) + "\n"


def run_compare(cfg):
    """Oracle-versus-asymptotic deviations with region gates; returns the exit code."""
    comps = []
    for pt in _grid_points(cfg):
        c = compare_point(*pt, cfg)
        if c is not None and (cfg.region is None or c.region == cfg.region):
            comps.append(c)
    text = comparison_report(comps, cfg) if cfg.output == "csv" else comparison_json(comps, cfg)
    _emit(text, cfg.out)
    return _exit_for(sum(not c.passed for c in comps), len(comps))


def zeros_table(n):
    """Rows ``(j, |zeta_j|, arg zeta_j, Re A_j, Im A_j)`` at 12 significant digits."""
    tab = asy.creeping_modes(n)
    lines = ["j |zeta_j| arg_zeta_j re_A_j im_A_j"]
    for j, (z, a) in enumerate(tab.modes, 1):
        lines.append(" ".join([str(j)] + [format(v, ".12g") for v in
                                          (abs(z), np.angle(z), a.real, a.imag)]))
    return "\n".join(lines) + "\n"


def run_zeros(n, out=None):
    if not 1 <= n <= 20:
        raise UsageError("zero count must lie in 1..20")
    _emit(zeros_table(n), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# self-test
# ---------------------------------------------------------------------------


@contextlib.contextmanager
def perturbed_w1(delta):
    """Test hook: scale ``special.w1`` by ``1 + delta`` while the context is active."""
    if not delta:
        yield
        return
    orig = special.w1

    def w1(z, deriv=0, scaled=False):
        return orig(z, deriv, scaled) * (1.0 + delta)

    special.w1 = w1
    try:
        yield
    finally:
        special.w1 = orig


def _grid_z(n=100, radius=6.0):
    rng = np.random.default_rng(20240601)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def _chk_w1_relation():
    z = _grid_z()
    return float(np.max(np.abs(special.SQRT_PI * special.w1(z) - 1j * special.scorer_I(z)
                               - special.scorer_H(z)))), 1e-9


def _ode_residual(f2, f, z, rhs):
    return float(np.max(np.abs(f2 - z * f - rhs) / np.maximum(np.abs(f2), 1.0)))


def _chk_airy_ode():
    z = _grid_z()
    return _ode_residual(special.w1(z, 2), special.w1(z), z, 0.0), 1e-9


def _chk_scorer_I_ode():
    z = _grid_z()
    return _ode_residual(special.scorer_I(z, 2), special.scorer_I(z), z, 1j), 1e-9


def _chk_scorer_H_ode():
    z = _grid_z()
    return _ode_residual(special.scorer_H(z, 2), special.scorer_H(z), z, 1.0), 1e-9


def _chk_wronskian():
    # relative to the size of the two products, which reach 3e8 near z = 6
    z = _grid_z()
    a, b = special.w1(z) * special.w2_prime(z), special.w1_prime(z) * special.w2(z)
    return float(np.max(np.abs(a - b - 2j) / (np.abs(a) + np.abs(b)))), 1e-12


def _chk_zeros():
    zt = special.w1_prime_zeros(10).zeros
    err = max(abs(abs(zt[0]) - 1.0187929716), abs(abs(zt[1]) - 3.2481975822))
    return max(err, float(np.max(np.abs(np.angle(zt) - np.pi / 3)))), 1e-8


def _chk_excitation():
    z = special.w1_prime_zeros(5).zeros
    a_i = asy.excitation_coefficients(z, "I")
    a_h = asy.excitation_coefficients(z, "H")
    return float(np.max(np.abs(a_i - a_h))), 1e-9


def _chk_causality():
    vals = [abs(oracle.u0_direct((s, n)).value) for s in (-1.0, -0.1) for n in (0.0, 5.0)]
    return max(vals), 1e-6


def _chk_split():
    q = (1.5, 8.0)
    parts = [oracle.f_direct(q), oracle.d_direct(q), oracle.g_direct(q)]
    u = oracle.u0_direct(q)
    tot = sum(p.value for p in parts)
    return abs(tot - u.value) / (sum(p.est_error for p in parts) + u.est_error), 1.0


def _chk_representation():
    q = (2.0, 10.0)
    a = oracle.w0_direct(q, representation="W")
    b = oracle.w0_direct(q, representation="W1")
    return abs(a.value - b.value) / (a.est_error + b.est_error), 1.0


def _chk_neumann():
    return max(oracle.neumann_residual(s) for s in (1.0, 2.0)), 1e-6


def _chk_pde():
    _, res, slopes = oracle.pde_convergence((1.0, 3.0), 1e-2, halvings=1)
    ok_slope = all(1.7 <= s <= 2.3 for s in slopes)
    return (res[0] if ok_slope else math.inf), 1e-3


def _chk_d2():
    q = (2.0, 120.0)
    p = ProblemParams(k=1e12, h=1.0)
    u = oracle.u0_direct(q).value
    return abs(asy.u0_D2(q, p).value - u) / abs(u), 0.05


def _chk_d6():
    q = (8.0, 1.0)
    p = ProblemParams(k=1e12, h=1.0)
    w = oracle.w0_direct(q).value
    return abs(asy.w0_D6(q, p).value - w) / abs(w), 0.10


def _chk_penumbra_continuity():
    p = ProblemParams(k=1e12, h=1.0)
    a = asy.w0_D4((5.0 - 1e-4, 25.0), p).value
    b = asy.w0_D4((5.0 + 1e-4, 25.0), p).value
    return abs(a - b) / abs(a), 1e-3


def _chk_diffraction():
    p = ProblemParams(k=100.0, h=1.0)
    a = asy.diffraction_coefficient(0.1, p, check_floor=False)
    return abs(abs(a) - 159.577), 1e-3


SELFTEST_CHECKS = (
    ("w1 = (iI + H)/sqrt(pi)", _chk_w1_relation),
    ("Airy equation for w1", _chk_airy_ode),
    ("I'' - zI = i", _chk_scorer_I_ode),
    ("H'' - zH = 1", _chk_scorer_H_ode),
    ("Wronskian constant", _chk_wronskian),
    ("zeros of w1'", _chk_zeros),
    ("excitation coefficient forms", _chk_excitation),
    ("causality U0 = 0 for sigma < 0", _chk_causality),
    ("split identity F + D + G = U0", _chk_split),
    ("W and W1 representations agree", _chk_representation),
    ("Neumann boundary condition", _chk_neumann),
    ("parabolic equation residual", _chk_pde),
    ("D2 stationary phase vs oracle", _chk_d2),
    ("D6 residue series vs oracle", _chk_d6),
    ("penumbra continuity on the limit ray", _chk_penumbra_continuity),
    ("diffraction coefficient magnitude", _chk_diffraction),
)


def run_selftest(perturb_w1=0.0, stream=None):
    """Run every named check, print one line each; returns the exit code."""
    stream = stream or sys.stdout
    n_fail = 0
    with perturbed_w1(perturb_w1):
        for name, fn in SELFTEST_CHECKS:
            t0 = time.perf_counter()
            try:
                val, tol = fn()
                ok = bool(val <= tol)
                detail = f"value={val:.3e} tol={tol:.1e}"
            except (CurvjumpError, ArithmeticError) as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            n_fail += not ok
            stream.write(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}  "
                         f"({time.perf_counter() - t0:.2f}s)\n")
    stream.write(f"{len(SELFTEST_CHECKS) - n_fail}/{len(SELFTEST_CHECKS)} checks passed\n")
    return EXIT_OK if n_fail == 0 else EXIT_FAILURES


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_flags(p):
    p.add_argument("--config", help="JSON file mirroring RunConfig; flags override it")
    p.add_argument("--k", type=float, help="wavenumber")
    p.add_argument("--h", type=float, help="curvature of the curved part")
    p.add_argument("--grid", action="append", metavar="START:STOP:COUNT",
                   help="axis spec, given twice (sigma then nu, or x then y)")
    p.add_argument("--coords", choices=("stretched", "physical"))
    p.add_argument("--method", choices=("direct", "asymptotic", "both"))
    p.add_argument("--output", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--modes", type=int, help="creeping modes in the deep shadow")
    p.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    p.add_argument("--big-threshold", type=float)
    p.add_argument("--small-threshold", type=float)


def build_parser():
    p = _Parser(prog="curvjump", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    _add_run_flags(sub.add_parser("fieldmap", help="attenuation factors on a grid"))
    c = sub.add_parser("compare", help="oracle versus asymptotic formulas")
    _add_run_flags(c)
    c.add_argument("--region", help="restrict the comparison to one region label")
    z = sub.add_parser("zeros", help="zeros of w1' and excitation coefficients")
    z.add_argument("--modes", type=int, default=5)
    z.add_argument("--out")
    s = sub.add_parser("selftest", help="run the invariant suite")
    s.add_argument("--perturb-w1", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


def config_from_args(args):
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        cfg = config_from_json(data, cfg)
    over = {k: v for k, v in (("k", args.k), ("h", args.h),
                              ("big_threshold", args.big_threshold),
                              ("small_threshold", args.small_threshold)) if v is not None}
    if over:
        cfg.params = _params_from(over, cfg.params)
    if args.grid is not None:
        cfg.grid = tuple(AxisSpec.parse(g) for g in args.grid)
    for key in ("coords", "method", "output", "out"):
        if getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    if args.modes is not None:
        cfg.mode_count = args.modes
    if args.rel_tol is not None:
        try:
            cfg.quadrature = cfg.quadrature.replace(rel_tol=args.rel_tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "region", None) is not None:
        cfg.region = args.region
    cfg.validate()
    return cfg


def _join_grid_values(argv):
    """Glue ``--grid VALUE`` so that axis specs starting with ``-`` are not read as flags."""
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_grid_values(argv))
    try:
        if args.verb == "zeros":
            return run_zeros(args.modes, args.out)
        if args.verb == "selftest":
            return run_selftest(args.perturb_w1)
        cfg = config_from_args(args)
        return run_fieldmap(cfg) if args.verb == "fieldmap" else run_compare(cfg)
    except UsageError as exc:
        sys.stderr.write(f"curvjump: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
