"""Self-check suites on the built-in scenes, run by ``flatext check``."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .classify import (Tolerances, condition_D, condition_E, curve_type, dual_curve_jet,
                       detect_osculating_tangent, detect_swallowtail_tangent,
                       swallowtail_distance)
from .envelope import (dual_curve_point, envelope_max_abs_K, envelope_mesh,
                       flat_extension)
from .frames import (BoundaryJets, SurfacePatch, check_kappa_tau, gaussian_curvature,
                     invariants, invariants_from)
from .jets import Jet, jet_lift
from .scenes import builtin


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _surface(name):
    return builtin(name).surface


def suite_jets(tol):
    """k-th jet derivative against a central difference of the (k-1)-th."""
    exprs = ["exp(sin(t)) * sqrt(2 + cos(t)) / (3 + t^2)", "sin(t^2) * cos(exp(t / 2))",
             "sqrt(1 + t^4) - exp(-t) * t^3"]
    t0, h = 0.4, 1e-5
    err = 0.0
    for e in exprs:
        j = jet_lift(e, (np.array([t0 - h, t0, t0 + h]), 0.0), "t", 4)
        for k in range(1, 4):
            lower = j.derivative(k - 1)
            fd = (lower[2] - lower[0]) / (2 * h)
            err = max(err, abs(j.derivative(k)[1] - fd) / max(abs(fd), 1e-300))
    p = jet_lift("(t - 1)^3 * (t + 2)", (0.5, 0.0), "t", 5).derivatives()
    poly = np.poly1d([1.0, -1.0]) ** 3 * np.poly1d([1.0, 2.0])
    exact = np.array([poly.deriv(k)(0.5) if k else poly(0.5) for k in range(6)])
    perr = float(np.max(np.abs(p - exact)))
    return SuiteResult("jets", err <= 1e-6 and perr <= 1e-12,
                       f"fd relative error {err:.3g}, polynomial error {perr:.3g}")


def suite_frames(tol):
    iv = invariants(_surface("cylinder"), np.linspace(0, 6, 7), 0)
    cyl = max(np.max(np.abs(iv.d("k1"))), np.max(np.abs(iv.d("k2") + 1)),
              np.max(np.abs(iv.d("k3"))))
    sph = invariants(_surface("sphere"), np.linspace(0, 6, 7), 0)
    serr = max(np.max(np.abs(np.abs(sph.d("k2")) - 1)), np.max(np.abs(sph.d("k3"))))
    K = gaussian_curvature(_surface("sphere"), np.linspace(0, 6, 7), 0.2)
    kerr = float(np.max(np.abs(K - 1)))
    rk, rt = check_kappa_tau(_surface("example-1.4"), np.array([-0.7, 0.1, 0.3, 0.9]))
    kt = float(max(rk.max(), rt.max()))
    ok = cyl <= 1e-10 and serr <= 1e-9 and kerr <= 1e-9 and kt <= 1e-8
    return SuiteResult("frames", ok, f"cylinder {cyl:.3g}, sphere {serr:.3g}, "
                                     f"sphere K {kerr:.3g}, kappa/tau {kt:.3g}")


def _raw_determinants(S, t):
    """det(Y, Y', Y'', Y''') and det(Y, Y', Y'', Y'''') in arc length, from jets."""
    bj = BoundaryJets(S, t, 6)
    cols = [bj.dual]
    for _ in range(4):
        cols.append(bj.ds(cols[-1]))
    v = [c.value for c in cols]
    D = np.linalg.det(np.stack([v[0], v[1], v[2], v[3]], axis=1))
    E = np.linalg.det(np.stack([v[0], v[1], v[2], v[4]], axis=1))
    return D, E


def suite_determinants(tol, count=20, seed=7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        S = random_patch(rng)
        t = rng.uniform(-0.5, 0.5)
        iv = invariants(S, t, 3)
        D, E = _raw_determinants(S, t)
        for a, b in ((condition_D(iv), D), (abs(condition_E(iv)), abs(E))):
            if max(abs(a), abs(b)) < 1e-10:
                continue
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    return SuiteResult("determinants", worst <= 1e-8, f"worst relative mismatch {worst:.3g}")


def random_patch(rng, degree=4, scale=0.5):
    """Polynomial patch (t, u, 0) + random terms of total degree <= ``degree``."""
    coords = []
    for base in ("t", "u", "0"):
        terms = [base]
        for j in range(degree + 1):
            for k in range(degree + 1 - j):
                c = scale * rng.uniform(-1, 1)
                terms.append(f"{c!r}*t^{j}*u^{k}")
        coords.append(" + ".join(terms))
    return SurfacePatch(tuple(coords), (-1.0, 1.0))


def suite_distance(tol):
    S = _surface("example-1.4")
    ts = np.linspace(-0.95, 0.95, 10)
    iv = invariants(S, ts, 1)
    d = swallowtail_distance(iv)
    p = dual_curve_point(S, ts)
    direct = np.sqrt(((p.affine - S.evaluate(ts)) ** 2).sum(axis=0))
    rel = float(np.max(np.abs(d - direct) / direct))
    d0 = swallowtail_distance(invariants(S, 0.0, 1))
    d1 = swallowtail_distance(invariants(S, 1.0, 1))
    ok = rel <= 1e-8 and abs(d0 - 1) <= 1e-6 and abs(d1 - np.sqrt(96)) <= 1e-6
    return SuiteResult("distance", ok, f"relative {rel:.3g}, d(0)={d0!r}, d(1)={d1!r}")


def duality_curves():
    """Ten curve jets at their base points with expected types (order 10)."""
    K = 10
    t = Jet.variable(0.0, K)
    s = Jet.variable(0.7, K)
    one = Jet.constant(1.0, K)
    aff = lambda *c: Jet.stack([one] + list(c))
    curves = [
        ("twisted cubic", aff(t, t ** 2, t ** 3), (1, 2, 3)),
        ("twisted cubic off origin", aff(s, s ** 2, s ** 3), (1, 2, 3)),
        ("(t, t^2, t^4)", aff(t, t ** 2, t ** 4), (1, 2, 4)),
        ("(t, t^2 + t^3, t^4 + t^5)", aff(t, t ** 2 + t ** 3, t ** 4 + t ** 5), (1, 2, 4)),
        ("helix", aff(t.cos(), t.sin(), t), (1, 2, 3)),
        ("(t, t^2, t^3 + t^4)", aff(t, t ** 2 + 0.3 * t ** 3, t ** 3 + t ** 4), (1, 2, 3)),
    ]
    ex4 = _surface("example-1.4")
    ex3 = _surface("example-1.3")
    for name, S, t0, typ in (("example-1.4 at 0", ex4, 0.0, (1, 2, 4)),
                             ("example-1.4 at 0.3", ex4, 0.3, (1, 2, 3)),
                             ("example-1.3 at 0", ex3, 0.0, (1, 2, 3)),
                             ("example-1.3 at -0.4", ex3, -0.4, (1, 2, 3))):
        curves.append((f"dual boundary of {name}", BoundaryJets(S, t0, K).dual, typ))
    return curves


def suite_duality(tol):
    expected = {(1, 2, 3): (1, 2, 3), (1, 2, 4): (2, 3, 4)}
    bad = []
    for name, Y, typ in duality_curves():
        ct = curve_type(Y, tol.rank, homogeneous=True)
        dual = curve_type(dual_curve_jet(Y), tol.rank, homogeneous=True)
        if ct != typ or dual != expected[typ]:
            bad.append(f"{name}: {ct} -> {dual}")
    return SuiteResult("type-duality", not bad,
                       "10 curves ok" if not bad else "; ".join(bad))


def suite_envelope(tol):
    S = _surface("example-1.4")
    sheet = envelope_mesh(S, (-1.0, 1.0), 1.0, (81, 11), tol)
    V = sheet.grid
    T = sheet.t[:, None]
    X = V[..., 0]
    P = np.stack([X, 4 * T ** 3 - 2 * X * T, 3 * T ** 4 - X * T ** 2], axis=-1)
    res = float(np.max(np.abs(V - P)))
    K = envelope_max_abs_K(S, sheet, tol)
    return SuiteResult("envelope", res <= 1e-8 and K <= 1e-6,
                       f"residual {res:.3g}, max |K| {K:.3g}")


def suite_extension(tol):
    worst_K, worst_gap = 0.0, 0.0
    for name, rng in (("cylinder", (0.0, 6.0)), ("example-1.4", (-0.3, 0.3))):
        _, rep = flat_extension(_surface(name), rng, 0.5, (61, 11), tol)
        worst_K = max(worst_K, rep.max_abs_K)
        worst_gap = max(worst_gap, rep.max_normal_angle_gap_on_boundary)
    return SuiteResult("extension", worst_K <= 1e-6 and worst_gap <= 1e-8,
                       f"max |K| {worst_K:.3g}, normal gap {worst_gap:.3g}")


def suite_landmarks(tol):
    osc = detect_osculating_tangent(_surface("example-1.3"), tol=tol)
    sw = detect_swallowtail_tangent(_surface("example-1.4"), tol=tol)
    ok = (len(osc) == 1 and abs(osc[0].t) <= 1e-9 and len(sw) == 1
          and sw[0].kind == "SwallowtailTangentGeneric" and sw[0].certified)
    return SuiteResult("landmarks", ok, f"osculating {[m.t for m in osc]}, "
                                        f"swallowtail {[m.t for m in sw]}")


SUITES = [suite_jets, suite_frames, suite_determinants, suite_distance, suite_duality,
          suite_envelope, suite_extension, suite_landmarks]


def run_all(tol: Tolerances = Tolerances()):
    results = []
    for suite in SUITES:
        try:
            results.append(suite(tol))
        except Exception as exc:  # a crashing suite is a failing suite
            name = suite.__name__.removeprefix("suite_")
            results.append(SuiteResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
