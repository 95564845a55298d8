"""Root isolation for scalar functions sampled through their t-jets.

A function is scanned on a uniform grid; sign changes are bracketed and
bisected (all brackets in one batched evaluation per step) and then polished
with one Newton step.  Double roots show up as local minima of |f| where f'
changes sign and are flagged as tangential.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonIsolatedRoot

SCAN_SAMPLES = 2048
BRACKET = 1e-12


@dataclass(frozen=True)
class Root:
    t: float
    value: float
    slope: float
    tangential: bool = False


def _bisect(fn, lo, hi, k, bracket):
    """Shrink sign-change brackets of coefficient k of fn to width <= bracket."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    slo = np.sign(fn(lo).coeffs[k])
    for _ in range(200):
        active = hi - lo > bracket
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        fm = np.sign(fn(mid).coeffs[k])
        left = active & (fm != slo)
        right = active & (fm == slo)
        hi = np.where(left, mid, hi)
        # an exact zero at mid collapses the bracket onto it
        lo = np.where(right | (active & (fm == 0)), mid, lo)
    return lo, hi


def _polish(fn, lo, hi, k, bracket):
    mid = 0.5 * (lo + hi)
    J = fn(mid)
    f, fp = J.coeffs[k], J.coeffs[k + 1] * (k + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(fp != 0.0, f / fp, 0.0)
    cand = mid - step
    inside = np.abs(cand - mid) <= max(bracket, 0.0) + (hi - lo)
    cand = np.where(inside & np.isfinite(cand), cand, mid)
    Jc = fn(cand)
    better = np.abs(Jc.coeffs[k]) <= np.abs(f)
    return np.where(better, cand, mid)


def find_roots(fn, a, b, samples=SCAN_SAMPLES, tol=1e-10, bracket=BRACKET, name="f"):
    """Roots of fn on [a, b].

    ``fn`` maps a 1-d parameter array to a batched t-jet of order >= 2.
    Raises NonIsolatedRoot when |f| stays below ``tol`` on a run of samples.
    """
    ts = np.linspace(a, b, samples)
    J = fn(ts)
    f, fp = J.coeffs[0], J.coeffs[1]
    small = np.abs(f) <= tol
    run = 0
    for i, s in enumerate(small):
        run = run + 1 if s else 0
        if run >= 3:
            j = i
            while j + 1 < len(small) and small[j + 1]:
                j += 1
            raise NonIsolatedRoot(name, (ts[i - run + 1], ts[j]))

    found = []
    # exact zeros on the grid
    for i in np.flatnonzero(f == 0.0):
        found.append((ts[i], i))
    sc = np.flatnonzero(f[:-1] * f[1:] < 0)
    if len(sc):
        lo, hi = _bisect(fn, ts[sc], ts[sc + 1], 0, bracket)
        for r in _polish(fn, lo, hi, 0, bracket):
            found.append((r, None))

    # tangential candidates: local minima of |f| where f' changes sign
    af = np.abs(f)
    interior = np.arange(1, samples - 1)
    cand = interior[(af[interior] <= af[interior - 1]) & (af[interior] <= af[interior + 1])
                    & (f[interior - 1] * f[interior + 1] > 0) & (f[interior] != 0.0)
                    & (fp[interior - 1] * fp[interior + 1] <= 0)]
    tangential = []
    if len(cand):
        lo, hi = ts[cand - 1], ts[cand + 1]
        same = fp[cand - 1] * fp[cand + 1] == 0
        lo, hi = np.where(same, ts[cand], lo), np.where(same, ts[cand], hi)
        if J.order >= 2:
            lo, hi = _bisect(fn, lo, hi, 1, bracket)
        tm = 0.5 * (lo + hi)
        vals = fn(tm).coeffs[0]
        for t, v in zip(tm, vals):
            if abs(v) <= tol:
                tangential.append(t)

    roots = []
    if found or tangential:
        tt = np.array([r for r, _ in found] + tangential, dtype=float)
        flags = [False] * len(found) + [True] * len(tangential)
        Jr = fn(tt)
        for t, v, slope, flag in zip(tt, Jr.coeffs[0], Jr.coeffs[1], flags):
            # grid zeros with vanishing slope are double roots too
            flag = flag or abs(slope) * (b - a) <= tol
            roots.append(Root(float(t), float(v), float(slope), bool(flag)))
    roots.sort(key=lambda r: r.t)
    out = []
    for r in roots:
        if out and abs(r.t - out[-1].t) <= 4 * bracket:
            continue
        out.append(r)
    return out
