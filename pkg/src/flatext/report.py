"""Analysis reports and their JSON, CSV and OBJ serializations.

Floats are written with 17 significant digits so output is byte-for-byte
reproducible and round-trips exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .classify import invariants_from, scan_landmarks, swallowtail_distance
from .envelope import (classify_envelope_singularity, dual_curve_point, flat_extension,
                       pair_label)
from .errors import FlatextError
from .frames import BoundaryJets, frenet_arrays, gaussian_curvature

CSV_HEADER = ["t", "k1", "k2", "k3", "kappa", "tau", "detII", "K"]
SUMMARY_POINTS = 33
EXTENSION_RESOLUTION = (65, 9)


def fmt(x) -> str:
    return format(float(x), ".17g")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, float):
        # JSON has no inf or nan
        return fmt(obj) if math.isfinite(obj) else json.dumps(repr(obj))
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats in 17-significant-digit form."""
    return _encode(_plain(obj), indent, 0) + "\n"


def _certificates(lm):
    return {name: {"value": c.value, "threshold": c.threshold, "relation": c.relation,
                   "holds": c.holds}
            for name, c in lm.certificates.items()}


def _safe(fn, *args):
    try:
        return fn(*args)
    except FlatextError as exc:
        return f"error:{type(exc).__name__}"


def sample_table(scene):
    """Per-sample invariant rows along the boundary."""
    S = scene.surface
    ts = np.linspace(S.t_range[0], S.t_range[1], scene.samples)
    bj = BoundaryJets(S, ts, 3)
    iv = invariants_from(bj, 0)
    kappa, tau = frenet_arrays(bj.gamma)
    L, M, N = (j.value for j in bj.second_form())
    K = gaussian_curvature(S, ts, 0.0)
    cols = [ts, iv.d("k1"), iv.d("k2"), iv.d("k3"), kappa, tau, L * N - M * M, K]
    return np.stack(cols, axis=1)


def _landmark_entry(S, lm, tol):
    entry = {"kind": lm.kind, "t": lm.t, "point": lm.point, "tangential": lm.tangential,
             "certificates": _certificates(lm)}
    if lm.kind.startswith("Swallowtail"):
        bj = BoundaryJets(S, lm.t)
        entry["d"] = swallowtail_distance(invariants_from(bj, 1))
    entry["envelope_singularity"] = _safe(classify_envelope_singularity, S, lm.t, tol)
    entry["pair_label"] = _safe(pair_label, S, lm.t, tol)
    return entry


def _envelope_summary(S, tol):
    out = []
    for t in np.linspace(S.t_range[0], S.t_range[1], SUMMARY_POINTS):
        row = {"t": t}
        try:
            p = dual_curve_point(S, t, tol.rank)
            row["at_infinity"] = bool(p.at_infinity)
            row["dual_point"] = None if p.at_infinity else p.affine
            row["direction"] = p.direction if p.at_infinity else None
        except FlatextError as exc:
            row["error"] = type(exc).__name__
        row["singularity"] = _safe(classify_envelope_singularity, S, t, tol)
        row["pair_label"] = _safe(pair_label, S, t, tol)
        out.append(row)
    return out


def extension_entry(mesh_report):
    mesh, rep = mesh_report
    return {"status": "ok", "t_range": rep.t_range, "width": rep.width,
            "max_abs_K": rep.max_abs_K,
            "max_normal_angle_gap_on_boundary": rep.max_normal_angle_gap_on_boundary,
            "singular_clip": [list(c) for c in rep.singular_clip],
            "uniqueness_precondition": rep.uniqueness_precondition}


def _extension_attempt(S, tol):
    try:
        return extension_entry(flat_extension(S, S.t_range, S.u_range[1],
                                              EXTENSION_RESOLUTION, tol))
    except FlatextError as exc:
        entry = {"status": "failed", "error": type(exc).__name__, "message": str(exc)}
        for attr in ("ts", "t"):
            if getattr(exc, attr, None) is not None:
                entry[attr] = getattr(exc, attr)
        return entry


def analyze(scene) -> dict:
    S = scene.surface
    tol = scene.tolerances
    table = sample_table(scene)
    scan = scan_landmarks(S, None, tol, scene.samples)
    return {
        "tool": {"name": "flatext", "version": __version__},
        "scene": scene.to_json(),
        "tolerances": {"rank": tol.rank, "root": tol.root, "flat": tol.flat, "cert": tol.cert},
        "samples": [dict(zip(CSV_HEADER, row)) for row in table],
        "landmarks": [_landmark_entry(S, lm, tol) for lm in scan.landmarks],
        "non_isolated": [{"quantity": e.quantity, "interval": e.interval}
                         for e in scan.non_isolated],
        "ambiguous": [{"t": e.ts} for e in scan.ambiguous],
        "envelope": _envelope_summary(S, tol),
        "extension": _extension_attempt(S, tol),
    }


def csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(["" if not math.isfinite(v) else fmt(v) for v in row])
    return buf.getvalue()


def report_csv(report) -> str:
    return csv_text([[s[k] for k in CSV_HEADER] for s in report["samples"]])


def obj_text(vertices, faces, name="mesh", polyline=None, polyline_name="singular_locus"):
    """ASCII OBJ with one-based faces and an optional polyline object."""
    lines = [f"o {name}"]
    lines += [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in np.asarray(vertices)]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in np.asarray(faces)]
    if polyline is not None:
        base = len(vertices)
        lines.append(f"o {polyline_name}")
        lines += [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in np.asarray(polyline)]
        lines.append("l " + " ".join(str(base + i + 1) for i in range(len(polyline))))
    return "\n".join(lines) + "\n"
