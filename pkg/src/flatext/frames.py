"""Surface patches, the adapted frame along the boundary and its invariants.

The boundary curve is gamma(t) = x(t, 0).  Along it

    e1 = x_t / |x_t|,  e3 = c * (x_t x x_u) / |x_t x x_u|,  e2 = e3 x e1

with c the coorientation sign, and the invariants are read off the
arc-length derivatives

    e1' = k1 e2 + k2 e3,   e2' = -k1 e1 + k3 e3,   e3' = -k2 e1 - k3 e2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np

from .errors import DegenerateError, DomainError, UndefinedTorsion
from .expr import Expr, parse
from .jets import Jet, cross, dot, jet_lift

DEFAULT_ORDER = 6
IMMERSION_TOL = 1e-12


@dataclass(frozen=True)
class SurfacePatch:
    """Parametrized surface x(t, u) with boundary at u = 0 and interior u > 0."""

    x: Tuple[Expr, Expr, Expr]
    t_range: Tuple[float, float] = (-1.0, 1.0)
    u_range: Tuple[float, float] = (0.0, 1.0)
    coorientation: int = 1

    def __post_init__(self):
        if len(self.x) != 3:
            raise ValueError("a surface needs three coordinate expressions")
        object.__setattr__(self, "x", tuple(parse(e) for e in self.x))
        object.__setattr__(self, "t_range", tuple(float(v) for v in self.t_range))
        object.__setattr__(self, "u_range", tuple(float(v) for v in self.u_range))
        if self.coorientation not in (1, -1):
            raise ValueError("coorientation must be +1 or -1")
        if not self.t_range[0] < self.t_range[1]:
            raise ValueError("t_range must be increasing")

    @cached_property
    def partials(self):
        d = lambda exprs, v: tuple(e.diff(v) for e in exprs)
        xt, xu = d(self.x, "t"), d(self.x, "u")
        return {"x": self.x, "t": xt, "u": xu,
                "tt": d(xt, "t"), "tu": d(xt, "u"), "uu": d(xu, "u")}

    def evaluate(self, t, u=0.0, which="x"):
        """Numeric values of x or one of its partials, shape (3, *batch)."""
        t = np.asarray(t, dtype=float)
        u = np.asarray(u, dtype=float)
        shape = np.broadcast_shapes(t.shape, u.shape)
        env = {"t": np.broadcast_to(t, shape), "u": np.broadcast_to(u, shape)}
        return np.stack([np.broadcast_to(np.asarray(e.evaluate(env), dtype=float), shape)
                         for e in self.partials[which]])

    def with_coorientation(self, c):
        return SurfacePatch(self.x, self.t_range, self.u_range, c)


@dataclass(frozen=True)
class AdaptedFrame:
    t: np.ndarray
    point: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray


@dataclass(frozen=True)
class InvariantJet:
    """Arc-length Taylor jets of (k1, k2, k3) at the parameters ``t``."""

    t: np.ndarray
    k1: Jet
    k2: Jet
    k3: Jet
    tjets: dict = field(default=None, repr=False, compare=False)

    def d(self, name: str, j: int = 0):
        """j-th arc-length derivative of invariant ``name`` ('k1', 'k2', 'k3')."""
        return getattr(self, name).derivative(j)


@dataclass(frozen=True)
class FrenetData:
    kappa: np.ndarray
    tau: np.ndarray


def _batch_t(t, where):
    """Pick the parameter belonging to a failing batch index."""
    t = np.asarray(t, dtype=float)
    if t.ndim == 0 or where is None:
        return float(t) if t.ndim == 0 else float(t.flat[0])
    return float(t.flat[where[-1] if len(where) else 0])


def lift_vector(exprs, t, order, direction="t", u=0.0) -> Jet:
    return Jet.stack([jet_lift(e, (t, u), direction, order) for e in exprs])


def arc_derivative(f: Jet, speed: Jet) -> Jet:
    """d/ds = (1/|gamma'|) d/dt applied to a t-jet."""
    return f.d() / speed


class BoundaryJets:
    """All t-jets along the boundary needed by the analysis, batched over t."""

    def __init__(self, S: SurfacePatch, t, order: int = DEFAULT_ORDER):
        self.surface = S
        self.t = np.asarray(t, dtype=float)
        self.order = order
        p = S.partials
        try:
            self.gamma = lift_vector(p["x"], self.t, order)
            self.xt = lift_vector(p["t"], self.t, order)
            self.xu = lift_vector(p["u"], self.t, order)
        except DomainError as exc:
            raise DegenerateError(f"surface expression undefined ({exc})",
                                  _batch_t(self.t, getattr(exc, "index", None))) from exc
        v2 = dot(self.xt, self.xt)
        normal = cross(self.xt, self.xu)
        n2 = dot(normal, normal)
        scale = v2.value * dot(self.xu, self.xu).value
        bad = (v2.value <= IMMERSION_TOL ** 2) | (n2.value <= IMMERSION_TOL * scale)
        if np.any(bad):
            raise DegenerateError("surface not immersed along the boundary",
                                  _batch_t(self.t, tuple(np.argwhere(bad)[0])))
        self.speed = v2.sqrt()
        self.e1 = self.xt / self.speed
        self.e3 = normal / n2.sqrt() * float(S.coorientation)
        self.e2 = cross(self.e3, self.e1)

    def ds(self, f: Jet) -> Jet:
        return arc_derivative(f, self.speed)

    @cached_property
    def kappa(self):
        de1 = self.ds(self.e1)
        de2 = self.ds(self.e2)
        return {"k1": dot(de1, self.e2), "k2": dot(de1, self.e3), "k3": dot(de2, self.e3)}

    def kappa_derivatives(self, name, count):
        """t-jets of d^j k / ds^j for j = 0..count."""
        out = [self.kappa[name]]
        for _ in range(count):
            out.append(self.ds(out[-1]))
        return out

    @cached_property
    def dual(self) -> Jet:
        """Homogeneous Gauss-dual jet Y = (-gamma.n, n1, n2, n3)."""
        e3 = self.e3
        return Jet.stack([-dot(self.gamma, e3), e3[0], e3[1], e3[2]])

    def second_form(self):
        """t-jets of (L, M, N) along the boundary."""
        p = self.surface.partials
        out = []
        for key in ("tt", "tu", "uu"):
            out.append(dot(lift_vector(p[key], self.t, self.order), self.e3))
        return tuple(out)


def boundary_jets(S, t, order=DEFAULT_ORDER) -> BoundaryJets:
    return BoundaryJets(S, t, order)


def adapted_frame(S: SurfacePatch, t) -> AdaptedFrame:
    bj = BoundaryJets(S, t, 1)
    return AdaptedFrame(bj.t, bj.gamma.value, bj.e1.value, bj.e2.value, bj.e3.value)


def invariants(S: SurfacePatch, t, order: int = DEFAULT_ORDER - 2,
               jet_order: int = DEFAULT_ORDER) -> InvariantJet:
    """Arc-length jets of the invariants; ``order`` is at most ``jet_order`` - 2."""
    if order > jet_order - 2:
        raise ValueError("invariant order is limited to jet_order - 2")
    bj = BoundaryJets(S, t, jet_order)
    return invariants_from(bj, order)


def invariants_from(bj: BoundaryJets, order: int) -> InvariantJet:
    tj = {}
    sj = {}
    fact = np.array([1.0 / math.factorial(j) for j in range(order + 1)])
    fact = fact.reshape((-1,) + (1,) * bj.t.ndim)
    for name in ("k1", "k2", "k3"):
        seq = bj.kappa_derivatives(name, min(order, bj.order - 2))
        tj[name] = seq
        vals = np.stack([j.value for j in seq[:order + 1]])
        sj[name] = Jet(vals * fact)
    return InvariantJet(bj.t, sj["k1"], sj["k2"], sj["k3"], tjets=tj)


def frenet_arrays(gamma: Jet, tol: float = 1e-10):
    """(kappa, tau) from a curve jet of order >= 3; tau is nan where kappa <= tol."""
    g = gamma.derivatives()
    g1, g2, g3 = g[1], g[2], g[3]
    c = np.cross(g1, g2, axis=0)
    c2 = (c * c).sum(axis=0)
    speed = np.sqrt((g1 * g1).sum(axis=0))
    kappa = np.sqrt(c2) / speed ** 3
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = np.where(kappa > tol, (c * g3).sum(axis=0) / c2, np.nan)
    return kappa, tau


def frenet(S: SurfacePatch, t, tol: float = 1e-10) -> FrenetData:
    """Curvature and torsion of the boundary curve from its own derivatives."""
    kappa, tau = frenet_arrays(BoundaryJets(S, t, 3).gamma, tol)
    if np.any(kappa <= tol):
        raise UndefinedTorsion(f"curvature {float(np.min(kappa))!r} below tolerance")
    return FrenetData(kappa, tau)


def check_kappa_tau(S: SurfacePatch, t):
    """Residuals of kappa^2 = k1^2 + k2^2 and tau = k3 + (k1 k2' - k2 k1')/(k1^2 + k2^2)."""
    fr = frenet(S, t)
    iv = invariants(S, t, order=1)
    k1, k2, k3 = iv.d("k1"), iv.d("k2"), iv.d("k3")
    k1p, k2p = iv.d("k1", 1), iv.d("k2", 1)
    r2 = k1 * k1 + k2 * k2
    res_kappa = np.abs(fr.kappa - np.sqrt(r2))
    res_tau = np.abs(fr.tau - (k3 + (k1 * k2p - k2 * k1p) / r2))
    return res_kappa, res_tau


def _unit_normal(S, t, u):
    xt = S.evaluate(t, u, "t")
    xu = S.evaluate(t, u, "u")
    n = np.cross(xt, xu, axis=0)
    norm = np.sqrt((n * n).sum(axis=0))
    if np.any(norm == 0.0):
        raise DegenerateError("surface not immersed", _batch_t(t, None))
    return xt, xu, S.coorientation * n / norm


def second_fundamental_form(S: SurfacePatch, t, u=0.0) -> np.ndarray:
    """Matrix [[L, M], [M, N]] with respect to the co-oriented unit normal."""
    _, _, n = _unit_normal(S, t, u)
    L = (S.evaluate(t, u, "tt") * n).sum(axis=0)
    M = (S.evaluate(t, u, "tu") * n).sum(axis=0)
    N = (S.evaluate(t, u, "uu") * n).sum(axis=0)
    return np.moveaxis(np.array([[L, M], [M, N]]), (0, 1), (-2, -1))


def first_fundamental_form(S: SurfacePatch, t, u=0.0) -> np.ndarray:
    xt = S.evaluate(t, u, "t")
    xu = S.evaluate(t, u, "u")
    E = (xt * xt).sum(axis=0)
    F = (xt * xu).sum(axis=0)
    G = (xu * xu).sum(axis=0)
    return np.moveaxis(np.array([[E, F], [F, G]]), (0, 1), (-2, -1))


def gaussian_curvature(S: SurfacePatch, t, u=0.0):
    return (np.linalg.det(second_fundamental_form(S, t, u)) /
            np.linalg.det(first_fundamental_form(S, t, u)))


def graph_gaussian_curvature(f, x, y):
    """K of the graph z = f(x, y), written in the variables t (= x) and u (= y)."""
    f = parse(f)
    fx, fy = f.diff("t"), f.diff("u")
    fxx, fxy, fyy = fx.diff("t"), fx.diff("u"), fy.diff("u")
    env = {"t": np.asarray(x, dtype=float), "u": np.asarray(y, dtype=float)}
    ev = lambda e: np.asarray(e.evaluate(env), dtype=float)
    hess = ev(fxx) * ev(fyy) - ev(fxy) ** 2
    return hess / (1.0 + ev(fx) ** 2 + ev(fy) ** 2) ** 2
