"""The thirteen acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line (printed in the terminal summary) and
then asserts the same verdict.  Thresholds are the stated ones; criteria that
cannot be met are left failing.
"""

import math
import time

import numpy as np
import pytest

from curvjump import asymptotics as A
from curvjump import geometry as G
from curvjump import oracle as O
from curvjump import special as S
from curvjump.quadrature import ALTERNATE_TAIL_ROTATION, QuadratureConfig

from conftest import ACCEPTANCE_LINES

# k/h = 1e12 puts sigma <= 13.27 and nu <= 176 inside the validity limits
P = G.ProblemParams(k=1e12, h=1.0)


class Verdict:
    """Named sub-checks plus the wall-clock budget of one criterion."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.checks = []
        self.t0 = time.perf_counter()

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def finish(self):
        elapsed = time.perf_counter() - self.t0
        if self.budget is not None:
            self.check("runtime", elapsed < self.budget, f"{elapsed:.2f}s < {self.budget:g}s")
        failed = [c for c in self.checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        detail = "; ".join(f"{n}: {d}" for n, ok, d in (failed or self.checks[:3]))
        ACCEPTANCE_LINES.append(f"criterion {self.number}: {status}  {self.title}  [{detail}]")
        assert not failed, "; ".join(f"{n} ({d})" for n, _, d in failed)


def _disk(n=100, radius=6.0, seed=5):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_identities():
    v = Verdict(1, "special-function identities on |z| <= 6", 5.0)
    z = _disk()
    rel = np.max(np.abs(S.SQRT_PI * S.w1(z) - 1j * S.scorer_I(z) - S.scorer_H(z)))
    v.check("sqrt(pi) w1 = iI + H", rel <= 1e-9, f"{rel:.2e}")

    def ode(f, f2, rhs):
        return float(np.max(np.abs(f2 - z * f - rhs) / np.maximum(np.abs(f2), np.abs(z * f))))

    for name, f, f2, rhs in (("w1'' = z w1", S.w1(z), S.w1(z, 2), 0.0),
                             ("I'' - zI = i", S.scorer_I(z), S.scorer_I(z, 2), 1j),
                             ("H'' - zH = 1", S.scorer_H(z), S.scorer_H(z, 2), 1.0)):
        r = ode(f, f2, rhs)
        v.check(name, r <= 1e-9, f"{r:.2e}")
    wr = S.w1(z) * S.w2_prime(z) - S.w1_prime(z) * S.w2(z)
    spread = float(np.max(np.abs(wr - np.mean(wr))) * 2)
    v.check("Wronskian spread", spread <= 1e-9, f"{spread:.2e}")
    v.finish()


def test_criterion_02_zero_table():
    v = Verdict(2, "zeros of w1'", 1.0)
    zt = S.w1_prime_zeros(10).zeros
    d1, d2 = abs(abs(zt[0]) - 1.0187929716), abs(abs(zt[1]) - 3.2481975822)
    v.check("|zeta_1|", d1 <= 1e-8, f"{d1:.1e}")
    v.check("|zeta_2|", d2 <= 1e-8, f"{d2:.1e}")
    darg = float(np.max(np.abs(np.angle(zt) - math.pi / 3)))
    v.check("arg = pi/3", darg <= 1e-10, f"{darg:.1e}")
    v.finish()


def test_criterion_03_causality():
    v = Verdict(3, "U0 = 0 before the jump", 30.0)
    worst = max(abs(O.u0_direct((s, n)).value) for s in (-2.0, -1.0, -0.1) for n in (0.0, 1.0, 5.0))
    v.check("max |U0|", worst <= 1e-6, f"{worst:.1e}")
    v.finish()


def test_criterion_04_boundary_condition():
    v = Verdict(4, "Neumann boundary condition", 10.0)
    for s in (1.0, 2.0, 3.0):
        r = O.neumann_residual(s)
        v.check(f"sigma={s:g}", r <= 1e-5, f"{r:.1e}")
    v.finish()


def test_criterion_05_parabolic_residual():
    v = Verdict(5, "parabolic-equation residual", 120.0)
    for q in ((1.0, 3.0), (0.5, 6.0)):
        steps, res, slopes = O.pde_convergence(q, 1e-2, halvings=2)
        v.check(f"residual at {q}", res[0] <= 1e-3, f"{res[0]:.2e}")
        v.check(f"slope at {q}", 1.7 <= slopes[0] <= 2.3, f"{slopes[0]:.2f}")
    v.finish()


def test_criterion_06_split_identity():
    v = Verdict(6, "F + D + G = U0", 60.0)
    rng = np.random.default_rng(6)
    worst = 0.0
    for s, n in zip(rng.uniform(0.5, 3.0, 10), rng.uniform(2.0, 12.0, 10)):
        parts = [O.f_direct((s, n)), O.d_direct((s, n)), O.g_direct((s, n))]
        u = O.u0_direct((s, n))
        gap = abs(sum(p.value for p in parts) - u.value)
        budget = u.est_error + sum(p.est_error for p in parts)
        worst = max(worst, gap / budget)
    v.check("gap / summed est_error", worst <= 1.0, f"{worst:.2e}")
    v.finish()


def test_criterion_07_stationary_phase():
    v = Verdict(7, "D2 stationary phase at sigma = 2", 60.0)
    devs = []
    for n in (30.0, 60.0, 120.0):
        q = (2.0, n)
        assert G.region_classify(G.StretchedCoords(*q), P) == G.RegionLabel.D2_illuminated_far
        devs.append(_rel(A.u0_D2(q, P).value, O.u0_direct(q).value))
    for n, d in zip((30, 60, 120), devs):
        v.check(f"nu={n}", d <= 0.05, f"{d:.3%}")
    v.check("decreasing", devs[0] > devs[1] > devs[2], " > ".join(f"{d:.2e}" for d in devs))
    v.finish()


def test_criterion_08_penumbra():
    v = Verdict(8, "penumbra at nu = 25", 60.0)
    for s in (4.9, 5.0, 5.1):
        q = (s, 25.0)
        assert G.region_classify(G.StretchedCoords(*q), P) == G.RegionLabel.D4_penumbra
        d = _rel(A.w0_D4(q, P).value, O.w0_direct(q).value)
        v.check(f"W0 sigma={s:g}", d <= 0.05, f"{d:.2%}")
        f = O.f_direct(q).value
        bound = 5 * abs(5.0 - s) ** 3
        df = _rel(A.f_penumbra(q), f)
        v.check(f"Fresnel part sigma={s:g}", df <= bound, f"{df:.2%} vs {bound:.2%}")
    v.finish()


def test_criterion_09_illuminated_resummation():
    v = Verdict(9, "D3 resummation", 60.0)
    # (4.2, 25) lies in the D1_core gap under B = 3, s = 1/3; evaluated without the zone guard
    q = (4.2, 25.0)
    d = _rel(A.u0_D3(q, P, check_region=False).value, O.u0_direct(q).value)
    v.check("u0_D3 at (4.2, 25)", d <= 0.05, f"{d:.1%}")
    # D2 and D3 overlap only for nu >~ 2e5; k/h = 1e27 keeps this point valid
    big = G.ProblemParams(k=1e27, h=1.0)
    q = G.StretchedCoords(998.2, 1e6)
    m = G.region_memberships(q, big)
    assert {G.RegionLabel.D2_illuminated_far, G.RegionLabel.D3_illuminated_near} <= m
    a, b = A.u0_D2(q, big), A.u0_D3(q, big)
    gap, budget = abs(a.value - b.value), a.est_error + b.est_error
    v.check("D2 vs D3 in the overlap", gap <= budget, f"{gap:.2e} vs {budget:.2e}")
    v.finish()


def test_criterion_10_shadow():
    v = Verdict(10, "D5 shadow near the limit ray", 60.0)
    # (5.4, 25) lies in the D1_core gap; evaluated without the zone guard
    q = (5.4, 25.0)
    ref = O.w0_direct(q).value
    e2 = _rel(A.w0_D5(q, P, q_order=2, check_region=False).value, ref)
    e0 = _rel(A.w0_D5(q, P, q_order=0, check_region=False).value, ref)
    v.check("q_order=2", e2 <= 0.05, f"{e2:.1%}")
    v.check("beats q_order=0", e2 <= e0, f"{e2:.1%} vs {e0:.1%}")
    v.finish()


def test_criterion_11_deep_shadow():
    v = Verdict(11, "creeping modes along nu = 1", 120.0)
    sig = np.array([6.0, 8.0, 10.0])
    direct = []
    for s in sig:
        assert G.region_classify(G.StretchedCoords(s, 1.0), P) == G.RegionLabel.D6_deep_shadow
        ref = O.w0_direct((s, 1.0)).value
        direct.append(ref)
        d = _rel(A.w0_D6((s, 1.0), P, n=3).value, ref)
        v.check(f"sigma={s:g}", d <= 0.10, f"{d:.1e}")
    slope = np.polyfit(sig, np.log(np.abs(direct)), 1)[0]
    target = -1.0187929716 * math.sin(math.pi / 3)
    v.check("decay slope", abs(slope / target - 1) <= 0.05, f"{slope:.4f} vs {target:.4f}")
    v.finish()


def test_criterion_12_diffraction_coefficient():
    v = Verdict(12, "diffraction coefficient", None)
    base = G.ProblemParams(k=100.0, h=1.0)
    a = A.diffraction_coefficient(0.1, base, check_floor=False)
    lin = A.diffraction_coefficient(0.1, G.ProblemParams(k=100.0, h=2.0), check_floor=False) / a
    hom = A.diffraction_coefficient(0.2, base, check_floor=False) / a
    v.check("linear in h", abs(lin - 2) <= 4 * np.finfo(float).eps, f"{abs(lin - 2):.1e}")
    v.check("phi^-4", abs(hom - 1 / 16) <= np.finfo(float).eps, f"{abs(hom - 1 / 16):.1e}")
    v.check("|A|", abs(abs(a) - 159.577) <= 1e-3, f"{abs(a):.6f}")
    v.finish()


def test_criterion_13_quadrature_honesty():
    v = Verdict(13, "quadrature honesty and contour independence", 120.0)
    alt = QuadratureConfig(tail_rotation=dict(ALTERNATE_TAIL_ROTATION))
    for q in ((0.5, 2.0), (1.0, 5.0), (1.7, 9.0), (2.5, 4.0), (3.0, 12.0)):
        coarse = O.u0_direct(q, QuadratureConfig(rel_tol=1e-8))
        fine = O.u0_direct(q, QuadratureConfig(rel_tol=5e-9))
        moved = abs(fine.value - coarse.value)
        v.check(f"halving at {q}", moved < coarse.est_error,
                f"{moved:.1e} < {coarse.est_error:.1e}")
        a, b = O.u0_direct(q), O.u0_direct(q, alt)
        gap = abs(a.value - b.value)
        v.check(f"rotation at {q}", gap <= a.est_error + b.est_error,
                f"{gap:.1e} <= {a.est_error + b.est_error:.1e}")
    v.finish()
