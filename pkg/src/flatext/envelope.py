"""Dual boundary, dual curve, envelope sheets and flat extensions.

The tangent planes of the surface along the boundary form the curve
Y(t) = (-gamma.n, n) in the space of planes.  Its dual curve is the edge of
regression of the envelope of these planes; its tangent lines are the rulings.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .classify import (CurveType, Tolerances, curve_type, detect_osculating_tangent)
from .errors import (AtInfinityError, ChartError, GaussDegenerateError, NotFiniteType,
                     RulingTangentToBoundary, OsculatingTangentInRange)
from .frames import DEFAULT_ORDER, BoundaryJets, SurfacePatch
from .jets import Jet, cross, cross4, dot

log = logging.getLogger(__name__)

CLIP_MARGIN = 1e-6


@dataclass(frozen=True)
class DualBoundary:
    """Homogeneous jet Y = (-gamma.n, n1, n2, n3) of the tangent planes."""

    t: np.ndarray
    hom: Jet

    def chart(self, tol: float = 1e-9) -> Jet:
        """Affine chart (y1, y2, y3) = (-n2, -n1, -gamma.n) / n3.

        In these coordinates the plane through p is  F = -y3 + x1 y2 + x2 y1 - x3 = 0.
        """
        Y = self.hom
        n3 = Y[3]
        if np.any(np.abs(n3.value) <= tol):
            raise ChartError("normal has no third component; chart undefined")
        return Jet.stack([-Y[2] / n3, -Y[1] / n3, Y[0] / n3])


def dual_boundary(S: SurfacePatch, t, order: int = DEFAULT_ORDER) -> DualBoundary:
    bj = BoundaryJets(S, t, order)
    return DualBoundary(bj.t, bj.dual)


@dataclass(frozen=True)
class DualCurvePoint:
    t: np.ndarray
    hom: np.ndarray          # (X0, X1, X2, X3) with X.Y = 0
    at_infinity: np.ndarray  # bool
    affine: np.ndarray       # X[1:]/X0, nan where at infinity
    direction: np.ndarray    # unit X[1:], the point at infinity's direction
    cramer: np.ndarray       # gamma - k2 (n x n') / det(n, n', n''), nan if singular


def _dual_hom_jet(bj: BoundaryJets) -> Jet:
    Y = bj.dual
    d1 = Y.d()
    return cross4(Y, d1, d1.d())


def _check_finite(bj, X, tol):
    Y = bj.dual
    scale = 1.0
    for j in (Y, Y.d(), Y.d().d()):
        v = j.value
        scale = scale * np.sqrt((v * v).sum(axis=0))
    xv = X.value
    bad = np.sqrt((xv * xv).sum(axis=0)) <= tol * scale
    if np.any(bad):
        t = np.atleast_1d(bj.t)[np.atleast_1d(bad)][0]
        raise NotFiniteType("dual boundary has dependent first and second derivatives",
                            float(t))


def dual_curve_point(S: SurfacePatch, t, tol: float = 1e-9) -> DualCurvePoint:
    bj = BoundaryJets(S, t, 4)
    X = _dual_hom_jet(bj)
    _check_finite(bj, X, tol)
    xv = X.value
    norm = np.sqrt((xv * xv).sum(axis=0))
    inf = np.abs(xv[0]) <= tol * norm
    with np.errstate(divide="ignore", invalid="ignore"):
        affine = np.where(inf, np.nan, xv[1:] / xv[0])
        spatial = xv[1:] / np.sqrt((xv[1:] * xv[1:]).sum(axis=0))
    # closed form from Cramer's rule on the osculating system in arc length
    n = bj.e3
    dn = bj.ds(n)
    ddn = bj.ds(dn)
    nv, dnv, ddnv = n.value, dn.value, ddn.value
    nxdn = np.cross(nv, dnv, axis=0)
    delta = (nxdn * ddnv).sum(axis=0)
    k2 = bj.kappa["k2"].value
    with np.errstate(divide="ignore", invalid="ignore"):
        cramer = np.where(np.abs(delta) <= tol * np.abs(k2), np.nan,
                          bj.gamma.value - k2 * nxdn / delta)
    return DualCurvePoint(bj.t, xv, inf, affine, spatial, cramer)


def _leading_direction(coeffs, tol):
    """Unit direction of the lowest non-vanishing coefficient, per sample.

    ``coeffs`` has shape (K+1, 3, N); the result has shape (3, N).
    """
    norms = np.sqrt((coeffs * coeffs).sum(axis=1))
    big = norms > tol * norms.max(axis=0, keepdims=True)
    big &= norms > 0
    first = np.argmax(big, axis=0)
    ok = big.any(axis=0)
    idx = np.arange(coeffs.shape[2])
    vec = coeffs[first, :, idx].T
    with np.errstate(invalid="ignore"):
        vec = vec / np.sqrt((vec * vec).sum(axis=0))
    return vec, ok


@dataclass(frozen=True)
class EnvelopeSheet:
    t: np.ndarray            # (nt,)
    x: np.ndarray            # (nw,) ruling parameter
    locus: np.ndarray        # (nt, 3) dual curve points, the singular locus
    rulings: np.ndarray      # (nt, 3) unit ruling directions
    vertices: np.ndarray     # (nt * nw, 3)
    faces: np.ndarray        # (m, 3), zero-based, counter-clockwise in (t, x)

    @property
    def grid(self):
        return self.vertices.reshape(len(self.t), len(self.x), 3)


def grid_faces(nt: int, nw: int) -> np.ndarray:
    """Two counter-clockwise triangles per grid cell, row-major vertex ids."""
    i, j = np.meshgrid(np.arange(nt - 1), np.arange(nw - 1), indexing="ij")
    a = (i * nw + j).ravel()
    b = ((i + 1) * nw + j).ravel()
    c = ((i + 1) * nw + j + 1).ravel()
    d = (i * nw + j + 1).ravel()
    return np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])


def _orient_like(d, ref):
    s = np.sign((d * ref).sum(axis=0))
    return d * np.where(s == 0, 1.0, s)


def _envelope_frame(S, ts, tol, order):
    """Dual curve points and unit ruling directions at the parameters ts."""
    bj = BoundaryJets(S, ts, order)
    X = _dual_hom_jet(bj)
    _check_finite(bj, X, tol.rank)
    xv = X.value
    inf = np.abs(xv[0]) <= tol.rank * np.sqrt((xv * xv).sum(axis=0))
    if np.any(inf):
        raise AtInfinityError("dual curve reaches the plane at infinity; sheet is unmeshable",
                              float(ts[np.argmax(inf)]))
    c = X[1:] / X[0]
    rul, ok = _leading_direction(c.d().coeffs, tol.rank)
    if not np.all(ok):
        raise NotFiniteType("dual curve is stationary to the available order",
                            float(ts[np.argmin(ok)]))
    # orient along n x n' so the direction field is continuous through cusps
    rul = _orient_like(rul, cross(bj.e3, bj.e3.d()).value)
    return c.value, rul


def envelope_mesh(S: SurfacePatch, t_range, width: float, resolution=(101, 21),
                  tol: Tolerances = Tolerances(), order: int = DEFAULT_ORDER) -> EnvelopeSheet:
    """Mesh of the envelope of tangent planes: dual curve plus ruling segments."""
    a, b = t_range
    nt, nw = resolution
    ts = np.linspace(a, b, nt)
    for t in ts:
        ct = curve_type(BoundaryJets(S, t, order).dual, tol.rank, homogeneous=True)
        if not ct.resolved:
            raise NotFiniteType(f"dual boundary type {ct}", float(t))
    locus, rul = _envelope_frame(S, ts, tol, order)
    xs = np.linspace(-width, width, nw)
    verts = locus.T[:, None, :] + xs[None, :, None] * rul.T[:, None, :]
    return EnvelopeSheet(ts, xs, locus.T, rul.T, verts.reshape(-1, 3), grid_faces(nt, nw))


def envelope_max_abs_K(S: SurfacePatch, sheet: EnvelopeSheet, tol: Tolerances = Tolerances(),
                       order: int = DEFAULT_ORDER) -> float:
    """max |K| of the sheet at its vertices off the edge of regression."""
    keep = np.abs(sheet.x) > 0.5 * abs(sheet.x[1] - sheet.x[0])
    ws = np.broadcast_to(sheet.x[keep], (len(sheet.t), int(keep.sum())))
    K = ruled_gaussian_curvature(lambda ts: _envelope_frame(S, ts, tol, order), sheet.t, ws)
    return float(np.max(np.abs(K)))


def classify_envelope_singularity(S: SurfacePatch, t: float,
                                  tol: Tolerances = Tolerances(),
                                  order: int = DEFAULT_ORDER) -> str:
    """CuspidalEdge for dual type (1,2,3), Swallowtail for (1,2,4).

    Regular when the dual point is at infinity, so the sheet has no affine
    singular point on this ruling; Unresolved otherwise.
    """
    bj = BoundaryJets(S, float(t), order)
    X = _dual_hom_jet(bj)
    xv = X.value
    if abs(xv[0]) <= tol.rank * np.sqrt((xv * xv).sum()):
        return "Regular"
    ct = curve_type(bj.dual, tol.rank, homogeneous=True)
    if ct == (1, 2, 3):
        return "CuspidalEdge"
    if ct == (1, 2, 4):
        return "Swallowtail"
    return "Unresolved"


def pair_label(S: SurfacePatch, t: float, tol: Tolerances = Tolerances(),
               order: int = DEFAULT_ORDER) -> str:
    """Label of the pair (surface, extension) at a boundary point.

    C3 at osculating-tangent points of a finite-type boundary, B3 at parabolic
    points, B2 where the Gauss map is immersive and the boundary stays off the
    edge of regression, Unlabeled otherwise.
    """
    from .frames import invariants_from
    bj = BoundaryJets(S, float(t), order)
    iv = invariants_from(bj, 1)
    k2, k3 = float(iv.d("k2")), float(iv.d("k3"))
    if curve_type(bj.gamma, tol.rank).resolved and abs(k2) <= tol.cert:
        return "C3"
    L, M, N = (float(j.value) for j in bj.second_form())
    if abs(L * N - M * M) <= tol.cert:
        return "B3"
    if np.hypot(k2, k3) > tol.cert and abs(k2) > tol.cert:
        return "B2"
    return "Unlabeled"


def generating_family_residual(S: SurfacePatch, t: float, p, tol: float = 1e-9):
    """(G, dG/dt) for G(t; p) = (gamma.n - p.n) / n3, the plane family in the chart."""
    bj = BoundaryJets(S, float(t), 2)
    n = bj.e3
    if abs(float(n.value[2])) <= tol:
        raise ChartError("normal has no third component; chart undefined")
    p = np.asarray(p, dtype=float)
    G = (dot(bj.gamma, n) - dot(Jet.constant(p, 2), n)) / n[2]
    return float(G.coeffs[0]), float(G.coeffs[1])


def ruled_gaussian_curvature(frame, ts, ws, h: float = 1e-6) -> np.ndarray:
    """Gaussian curvature of x(t, w) = c(t) + w d(t) at (ts[i], ws[i, j]).

    ``frame(ts)`` returns (c, d) with shape (3, n).  Derivatives in t are
    central differences with step ``h``; those in w are exact since x is linear
    in w, so x_ww = 0 and K = -M^2 / (EG - F^2).
    """
    ts = np.asarray(ts, dtype=float)
    ws = np.asarray(ws, dtype=float)[..., None]
    c0, d0 = (v.T[:, None, :] for v in frame(ts))
    cm, dm = (v.T[:, None, :] for v in frame(ts - h))
    cp, dp = (v.T[:, None, :] for v in frame(ts + h))
    xt = (cp - cm) / (2 * h) + ws * (dp - dm) / (2 * h)
    xw = np.broadcast_to(d0, xt.shape)
    xtw = np.broadcast_to((dp - dm) / (2 * h), xt.shape)
    n = np.cross(xt, xw)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    E, F, G = (xt * xt).sum(-1), (xt * xw).sum(-1), (xw * xw).sum(-1)
    M = (xtw * n).sum(-1)
    return -M * M / (E * G - F * F)


@dataclass(frozen=True)
class ExtensionMesh:
    t: np.ndarray            # (nt,)
    sigma: np.ndarray        # (nw,) fraction of each ruling
    lengths: np.ndarray      # (nt,) ruling length after clipping
    boundary: np.ndarray     # (nt, 3) gamma(t)
    tangents: np.ndarray     # (nt, 3) unit boundary tangents
    rulings: np.ndarray      # (nt, 3) unit outward rulings u(t)
    vertices: np.ndarray     # (nt * nw, 3)
    faces: np.ndarray

    @property
    def grid(self):
        return self.vertices.reshape(len(self.t), len(self.sigma), 3)


@dataclass(frozen=True)
class ExtensionReport:
    t_range: Tuple[float, float]
    width: float
    max_abs_K: float
    max_normal_angle_gap_on_boundary: float
    singular_clip: List[Tuple[float, float]]
    uniqueness_precondition: bool


def _extension_frame(S, ts, tol, order):
    bj = BoundaryJets(S, ts, order)
    return bj.gamma.value, _outward_rulings(S, bj, tol)


def _outward_rulings(S, bj, tol):
    ref = cross(bj.e3, bj.e3.d())
    rul, ok = _leading_direction(ref.coeffs, tol.rank)
    if not np.all(ok):
        raise GaussDegenerateError("normal is constant to the available order; "
                                   "ruling undefined", float(np.atleast_1d(bj.t)[np.argmin(ok)]))
    e2 = bj.e2.value
    inner = S.coorientation * e2
    side = (rul * inner).sum(axis=0)
    rul = rul * np.where(side > 0, -1.0, 1.0)
    tangency = np.abs((rul * e2).sum(axis=0))
    if np.any(tangency <= tol.rank):
        raise RulingTangentToBoundary(float(np.atleast_1d(bj.t)[np.argmin(tangency)]))
    return rul


def flat_extension(S: SurfacePatch, t_range, width: float, resolution=(101, 21),
                   tol: Tolerances = Tolerances(), order: int = DEFAULT_ORDER):
    """Developable strip continuing S across the boundary along the rulings of
    the envelope of its tangent planes.

    Returns (ExtensionMesh, ExtensionReport).
    """
    a, b = (float(v) for v in t_range)
    osc = detect_osculating_tangent(S, (a, b), tol)
    if osc:
        raise OsculatingTangentInRange([m.t for m in osc])
    nt, nw = resolution
    ts = np.linspace(a, b, nt)
    bj = BoundaryJets(S, ts, order)
    u = _outward_rulings(S, bj, tol)
    dn = bj.ds(bj.e3).value
    immersive = bool(np.all(np.sqrt((dn * dn).sum(axis=0)) > tol.rank))

    # stop rulings just short of the edge of regression when it lies outward
    X = _dual_hom_jet(bj).value
    gamma = bj.gamma.value
    lengths = np.full(nt, float(width))
    edge = np.full(nt, np.nan)  # position of the edge of regression along u
    clips = []
    xnorm = np.sqrt((X * X).sum(axis=0))
    for i in range(nt):
        if xnorm[i] == 0 or abs(X[0, i]) <= tol.rank * xnorm[i]:
            continue
        lam = float(((X[1:, i] / X[0, i] - gamma[:, i]) * u[:, i]).sum())
        edge[i] = lam
        if 0.0 < lam <= width:
            lengths[i] = max(lam - CLIP_MARGIN, 0.0)
            clips.append((float(ts[i]), lengths[i]))

    sigma = np.linspace(0.0, 1.0, nw)
    verts = (gamma.T[:, None, :] + (lengths[:, None, None] * sigma[None, :, None])
             * u.T[:, None, :])
    e1 = bj.e1.value
    mesh = ExtensionMesh(ts, sigma, lengths, gamma.T, e1.T, u.T,
                         verts.reshape(-1, 3), grid_faces(nt, nw))

    # curvature at the vertices more than one ruling step off the edge of regression
    ws = lengths[:, None] * sigma[None, :]
    K = ruled_gaussian_curvature(lambda tt: _extension_frame(S, tt, tol, order), ts, ws)
    step = width / max(nw - 1, 1)
    with np.errstate(invalid="ignore"):
        near = np.abs(edge[:, None] - ws) <= step
    max_K = float(np.max(np.abs(K[~near]))) if np.any(~near) else 0.0

    # continuation normal -c (x_t x x_w) against the surface normal
    n_ext = -S.coorientation * np.cross(e1, u, axis=0)
    n_ext /= np.sqrt((n_ext * n_ext).sum(axis=0))
    e3 = bj.e3.value
    gap = np.arctan2(np.sqrt((np.cross(n_ext, e3, axis=0) ** 2).sum(axis=0)),
                     (n_ext * e3).sum(axis=0))
    report = ExtensionReport((a, b), float(width), max_K, float(np.max(np.abs(gap))),
                             clips, immersive)
    return mesh, report
