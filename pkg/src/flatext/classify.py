"""Curve types, boundary landmarks and the determinant conditions D and E.

Types are read from numerical ranks of derivative matrices.  For an affine
curve c, A_r = (c', ..., c^(r)) and a_i is the first r with rank A_r = i.  For a
homogeneous curve Y in R^4 the same is done with (Y, Y', ..., Y^(r)) and rank
minus one.  Ranks use singular values against ``tol`` times the largest one of
the full jet matrix, so a vanishing column cannot pass as independent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import (AmbiguousLandmark, GaussDegenerateError, NonIsolatedRoot)
from .frames import (DEFAULT_ORDER, BoundaryJets, InvariantJet, SurfacePatch,
                     invariants_from)
from .jets import Jet
from .roots import SCAN_SAMPLES, find_roots

log = logging.getLogger(__name__)

RANK_TOL = 1e-9
ROOT_TOL = 1e-10
CERT_TOL = 1e-6


@dataclass(frozen=True)
class Tolerances:
    rank: float = RANK_TOL
    root: float = ROOT_TOL
    flat: float = 1e-6
    cert: float = CERT_TOL


@dataclass(frozen=True)
class CurveType:
    """(a1, a2, a3); fewer entries mean the type is unresolved at ``max_order``."""

    a: Tuple[int, ...]
    max_order: int

    @property
    def resolved(self) -> bool:
        return len(self.a) == 3

    def __eq__(self, other):
        if isinstance(other, tuple):
            return self.resolved and self.a == other
        if isinstance(other, CurveType):
            return self.a == other.a and (self.resolved or self.max_order == other.max_order)
        return NotImplemented

    def __hash__(self):
        return hash(self.a)

    def __str__(self):
        if self.resolved:
            return "(" + ",".join(str(v) for v in self.a) + ")"
        return f"Unresolved({self.max_order})"


def rank_profile(columns: np.ndarray, tol: float = RANK_TOL):
    """Ranks of the leading column blocks of ``columns`` (shape dim x m)."""
    scale = np.linalg.svd(columns, compute_uv=False)
    thresh = tol * (scale[0] if scale.size else 0.0)
    ranks = []
    for r in range(1, columns.shape[1] + 1):
        sv = np.linalg.svd(columns[:, :r], compute_uv=False)
        ranks.append(int(np.sum(sv > thresh)) if thresh > 0 else 0)
    return ranks


def curve_type(c: Jet, tol: float = RANK_TOL, homogeneous: bool = False) -> CurveType:
    """Type of the curve whose t-jet is ``c`` (a single point, batch shape (dim,))."""
    coeffs = np.asarray(c.coeffs)
    if coeffs.ndim != 2:
        raise ValueError("curve_type expects an unbatched vector jet")
    K = c.order
    cols = coeffs.T if homogeneous else coeffs[1:].T
    ranks = rank_profile(cols, tol)
    a = []
    for i in range(1, 4):
        for r in range(1, K + 1):
            rank = ranks[r] - 1 if homogeneous else ranks[r - 1]
            if rank >= i:
                a.append(r)
                break
        else:
            break
    return CurveType(tuple(a), K)


def boundary_type(S: SurfacePatch, t0: float, tol: float = RANK_TOL,
                  order: int = DEFAULT_ORDER) -> CurveType:
    return curve_type(BoundaryJets(S, float(t0), order).gamma, tol)


def dual_boundary_type(S: SurfacePatch, t0: float, tol: float = RANK_TOL,
                       order: int = DEFAULT_ORDER) -> CurveType:
    """Homogeneous type of the Gauss-dual curve of the boundary."""
    bj = BoundaryJets(S, float(t0), order)
    dn = bj.ds(bj.e3).value
    if np.sqrt((dn * dn).sum()) <= tol:
        raise GaussDegenerateError("unit normal is stationary along the boundary", float(t0))
    return curve_type(bj.dual, tol, homogeneous=True)


def dual_curve_jet(Y: Jet) -> Jet:
    """Homogeneous jet of the dual curve of a homogeneous curve in R^4."""
    from .jets import cross4
    d1 = Y.d()
    return cross4(Y, d1, d1.d())


# determinant conditions, written for any values supporting + - *

def _delta(g):
    k1, k2, k3 = g("k1", 0), g("k2", 0), g("k3", 0)
    return k2 * (g("k3", 1) + k1 * k2) + k3 * (k1 * k3 - g("k2", 1))


def _condition_D(g):
    k1, k2, k3 = g("k1", 0), g("k2", 0), g("k3", 0)
    k1p, k2p, k3p = g("k1", 1), g("k2", 1), g("k3", 1)
    k2pp, k3pp = g("k2", 2), g("k3", 2)
    r = k2 * k2 + k3 * k3
    return (k1 * k1 * k3 * r + k2 * r * k1p - 3 * k1 * k3 * k3 * k2p
            + 3 * k1 * k2 * k3 * k3p + 2 * k3 * k2p * k2p - 2 * k2 * k2p * k3p
            - k2 * k3 * k2pp + k2 * k2 * k3pp)


def _condition_E(g):
    k1, k2, k3 = g("k1", 0), g("k2", 0), g("k3", 0)
    k1p, k2p, k3p = g("k1", 1), g("k2", 1), g("k3", 1)
    k1pp, k2pp, k3pp = g("k1", 2), g("k2", 2), g("k3", 2)
    k2ppp, k3ppp = g("k2", 3), g("k3", 3)
    return (k1 * k1 * k2 * k2 * k3p + 2 * k1 * k1 * k2 * k2p * k3
            + 3 * k1 * k1 * k3 * k3 * k3p + 2 * k1 * k1p * k2 * k2 * k3
            + 2 * k1 * k1p * k3 * k3 * k3 + 3 * k1 * k2 * k3 * k3pp
            + 3 * k1 * k2 * k3p * k3p - 3 * k1 * k2p * k3 * k3p
            + 3 * k1p * k2 * k2 * k2p + 5 * k1p * k2 * k3 * k3p
            - 2 * k1p * k2p * k3 * k3 + k1pp * (k2 * k2 * k2 + k2 * k3 * k3)
            + k2 * k2 * k3ppp - k2 * k2ppp * k3
            + k2pp * (-3 * k1 * k3 * k3 - 3 * k2 * k3p + 3 * k2p * k3))


def _condition_E_printed(g):
    k1, k2, k3 = g("k1", 0), g("k2", 0), g("k3", 0)
    k1p, k2p, k3p = g("k1", 1), g("k2", 1), g("k3", 1)
    k1pp, k3pp, k3ppp = g("k1", 2), g("k3", 2), g("k3", 3)
    return (2 * k1 * k2 ** 3 * (k1 * k1 + k2 * k2 + k3 * k3)
            + 2 * k1 * k3 * (2 * k2 * k2 + k3 * k3) * k1p
            + (3 * k2 * k2 - 2 * k3 * k3) * k1p * k2p + 5 * k2 * k3 * k1p * k3p
            + 3 * k1 * k2 * k3p * k3p + k2 * (3 * k1 * k2 + k2 * k2 + k3 * k3) * k1pp
            + 3 * (k1 * (-k2 * k2 - k3 * k3 + k2 * k3) + 3 * (k3 * k2p - k2 * k3p)) * k3pp
            + k2 * (k2 - 2 * k3) * k3ppp)


def _values(iv: InvariantJet):
    return lambda name, j: iv.d(name, j)


def _tjets(iv: InvariantJet):
    return lambda name, j: iv.tjets[name][j]


def gauss_delta(iv: InvariantJet):
    """det(n, n', n'') in terms of the invariants."""
    return _delta(_values(iv))


def condition_D(iv: InvariantJet):
    """D = det(Y, Y', Y'', Y''') for Y = (-gamma.n, n); zero where the dual
    boundary fails to be of type (1,2,3)."""
    return _condition_D(_values(iv))


def condition_E(iv: InvariantJet):
    """det(Y, Y', Y'', Y'''') in the same ordering; nonzero at a (1,2,4) point."""
    return _condition_E(_values(iv))


def condition_E_printed(iv: InvariantJet):
    """A published closed form for E, kept for comparison only.  It does not
    agree with the determinant (see tests)."""
    return _condition_E_printed(_values(iv))


def swallowtail_distance(iv: InvariantJet, tol: float = 1e-12):
    """|gamma - dual point| = |k2| sqrt(k2^2 + k3^2) / |Delta|.

    0 where k2 = 0 and inf where Delta vanishes against a nonzero numerator.
    """
    k2, k3 = iv.d("k2"), iv.d("k3")
    num = np.abs(k2) * np.sqrt(k2 * k2 + k3 * k3)
    den = np.abs(gauss_delta(iv))
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(num <= tol, 0.0, np.where(den <= tol * num, np.inf, num / den))
    return d if np.ndim(d) else float(d)


# landmarks

class Certificate(NamedTuple):
    value: float
    threshold: float
    relation: str  # "<=" (residual) or ">=" (nondegeneracy)

    @property
    def holds(self) -> bool:
        if self.relation == "<=":
            return abs(self.value) <= self.threshold
        return abs(self.value) >= self.threshold


@dataclass(frozen=True)
class Landmark:
    kind: str
    t: float
    point: np.ndarray
    certificates: Dict[str, Certificate] = field(default_factory=dict)
    tangential: bool = False

    @property
    def certified(self) -> bool:
        return all(c.holds for c in self.certificates.values())


def _range(S, t_range):
    return tuple(S.t_range if t_range is None else t_range)


def _scan_fn(S, order, build):
    def fn(ts):
        return build(BoundaryJets(S, ts, order))
    return fn


def _root_scale(fn, a, b, samples):
    vals = fn(np.linspace(a, b, min(samples, 257))).coeffs[0]
    return max(1.0, float(np.max(np.abs(vals))))


def _point(S, t):
    return S.evaluate(np.asarray(t, dtype=float), 0.0)


def detect_osculating_tangent(S: SurfacePatch, t_range=None, tol: Tolerances = Tolerances(),
                              samples: int = SCAN_SAMPLES, order: int = DEFAULT_ORDER):
    """Points where the boundary's osculating plane is tangent to the surface."""
    a, b = _range(S, t_range)
    fn = _scan_fn(S, order, lambda bj: bj.kappa["k2"])
    thr = tol.root * _root_scale(fn, a, b, samples)
    roots = find_roots(fn, a, b, samples, thr, name="k2")
    out = []
    for r in roots:
        bj = BoundaryJets(S, r.t, order)
        ct = curve_type(bj.gamma, tol.rank)
        if not ct.resolved:
            log.warning("boundary type unresolved at t=%r; osculating-tangent test inapplicable", r.t)
            continue
        s = ct.a[1] - 1
        iv = invariants_from(bj, max(s, 1))
        certs = {"k2": Certificate(float(iv.d("k2")), thr, "<=")}
        if s > 1:
            certs[f"k2_d{s - 1}"] = Certificate(float(iv.d("k2", s - 1)), thr, "<=")
        out.append(Landmark("OsculatingTangent", r.t, _point(S, r.t), certs, r.tangential))
    return out


def detect_parabolic(S: SurfacePatch, t_range=None, tol: Tolerances = Tolerances(),
                     samples: int = SCAN_SAMPLES, order: int = DEFAULT_ORDER):
    """Boundary points where det II vanishes."""
    a, b = _range(S, t_range)

    def build(bj):
        L, M, N = bj.second_form()
        return L * N - M * M

    fn = _scan_fn(S, order, build)
    thr = tol.root * _root_scale(fn, a, b, samples)
    out = []
    for r in find_roots(fn, a, b, samples, thr, name="detII"):
        certs = {"detII": Certificate(r.value, thr, "<=")}
        out.append(Landmark("Parabolic", r.t, _point(S, r.t), certs, r.tangential))
    return out


def _D_jet(bj):
    iv = invariants_from(bj, 2)
    return _condition_D(_tjets(iv))


def detect_swallowtail_tangent(S: SurfacePatch, t_range=None, tol: Tolerances = Tolerances(),
                               samples: int = SCAN_SAMPLES, order: int = DEFAULT_ORDER):
    """Boundary points whose tangent plane osculates the dual surface: a
    swallowtail of the envelope of tangent planes.

    Generic: D = 0 with k2 != 0 and E != 0.  Degenerate: k2 = 0 = D with
    k1, k3 != 0, k2' = k1 k3 / 2 and E != 0.
    """
    a, b = _range(S, t_range)
    fn = _scan_fn(S, order, _D_jet)
    thr = tol.root * _root_scale(fn, a, b, samples)
    out = []
    ambiguous = []
    for r in find_roots(fn, a, b, samples, thr, name="D"):
        bj = BoundaryJets(S, r.t, order)
        iv = invariants_from(bj, 3)
        k1, k2, k3 = (float(iv.d(n)) for n in ("k1", "k2", "k3"))
        E = float(condition_E(iv))
        D = float(condition_D(iv))
        point = _point(S, r.t)
        if abs(k2) > tol.cert:
            if abs(E) < tol.cert:
                log.warning("D vanishes with E = %r at t=%r; not a generic swallowtail", E, r.t)
                continue
            certs = {"D": Certificate(D, thr, "<="),
                     "k2": Certificate(k2, tol.cert, ">="),
                     "E": Certificate(E, tol.cert, ">=")}
            out.append(Landmark("SwallowtailTangentGeneric", r.t, point, certs, r.tangential))
            continue
        resid = float(iv.d("k2", 1)) - 0.5 * k1 * k3
        certs = {"D": Certificate(D, thr, "<="),
                 "k2": Certificate(k2, thr, "<="),
                 "k1": Certificate(k1, tol.cert, ">="),
                 "k3": Certificate(k3, tol.cert, ">="),
                 "k2p_minus_half_k1k3": Certificate(resid, tol.cert, "<="),
                 "E": Certificate(E, tol.cert, ">=")}
        lm = Landmark("SwallowtailTangentDegenerate", r.t, point, certs, r.tangential)
        if lm.certified:
            out.append(lm)
        else:
            ambiguous.append(r.t)
    if ambiguous:
        raise AmbiguousLandmark(ambiguous, out)
    return out


@dataclass
class LandmarkScan:
    landmarks: list
    non_isolated: list
    ambiguous: list


def scan_landmarks(S: SurfacePatch, t_range=None, tol: Tolerances = Tolerances(),
                   samples: int = SCAN_SAMPLES) -> LandmarkScan:
    """Run all detectors, collecting non-isolated and ambiguous cases."""
    landmarks, non_isolated, ambiguous = [], [], []
    for detect in (detect_osculating_tangent, detect_parabolic, detect_swallowtail_tangent):
        try:
            landmarks.extend(detect(S, t_range, tol, samples))
        except NonIsolatedRoot as exc:
            non_isolated.append(exc)
        except AmbiguousLandmark as exc:
            landmarks.extend(exc.landmarks)
            ambiguous.append(exc)
    landmarks.sort(key=lambda m: (m.t, m.kind))
    return LandmarkScan(landmarks, non_isolated, ambiguous)
