"""Command line front end: ``flatext analyze|envelope|extend|check|example``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import report, scenes
from .errors import (DegenerateError, FlatextError, NotFiniteType, OsculatingTangentInRange,
                     ParseError)

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_NOT_FINITE, EXIT_OSCULATING = 0, 2, 3, 4, 5


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, OsculatingTangentInRange):
        return EXIT_OSCULATING
    if isinstance(exc, NotFiniteType):
        return EXIT_NOT_FINITE
    return EXIT_DEGENERATE


def _write(path, text):
    Path(path).write_text(text, newline="")


def cmd_analyze(args):
    scene = scenes.load(args.scene)
    rep = report.analyze(scene)
    if args.csv:
        _write(args.csv, report.report_csv(rep))
    text = report.dumps(rep)
    if args.json:
        _write(args.json, text)
    elif not args.csv:
        sys.stdout.write(text)
    return EXIT_OK


def _range_args(args, scene):
    return tuple(args.t) if args.t else scene.surface.t_range


def cmd_envelope(args):
    from .envelope import classify_envelope_singularity, envelope_mesh
    scene = scenes.load(args.scene)
    S = scene.surface
    rng = _range_args(args, scene)
    sheet = envelope_mesh(S, rng, args.width, (args.nt, args.nw), scene.tolerances)
    if args.obj:
        _write(args.obj, report.obj_text(sheet.vertices, sheet.faces, "envelope", sheet.locus))
    labels = [{"t": t, "singularity": classify_envelope_singularity(S, t, scene.tolerances)}
              for t in sheet.t[:: max(1, (len(sheet.t) - 1) // 16)]]
    frag = {"t_range": rng, "width": args.width, "vertices": len(sheet.vertices),
            "faces": len(sheet.faces), "locus": sheet.locus, "singularities": labels}
    sys.stdout.write(report.dumps(frag))
    return EXIT_OK


def cmd_extend(args):
    from .envelope import flat_extension
    scene = scenes.load(args.scene)
    rng = _range_args(args, scene)
    mesh, rep = flat_extension(scene.surface, rng, args.width, (args.nt, args.nw),
                               scene.tolerances)
    if args.obj:
        _write(args.obj, report.obj_text(mesh.vertices, mesh.faces, "extension"))
    text = report.dumps(report.extension_entry((mesh, rep)))
    if args.json:
        _write(args.json, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args):
    from .checks import run_all
    from .classify import Tolerances
    tol = Tolerances()
    if args.rank_tol is not None:
        tol = replace(tol, rank=args.rank_tol)
    results = run_all(tol)
    if args.json:
        sys.stdout.write(report.dumps([{"suite": r.name, "passed": r.passed, "detail": r.detail}
                                       for r in results]))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else 1


def cmd_example(args):
    sys.stdout.write(scenes.builtin(args.name).dumps())
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="flatext", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="invariants, landmarks and envelope summary")
    a.add_argument("scene", help="scene JSON file or built-in name")
    a.add_argument("--csv")
    a.add_argument("--json")
    a.set_defaults(func=cmd_analyze)

    for name, func, help_ in (("envelope", cmd_envelope, "mesh the envelope of tangent planes"),
                              ("extend", cmd_extend, "build the flat extension strip")):
        e = sub.add_parser(name, help=help_)
        e.add_argument("scene")
        e.add_argument("--t", nargs=2, type=float, metavar=("A", "B"))
        e.add_argument("--width", type=float, required=True)
        e.add_argument("--obj")
        e.add_argument("--nt", type=int, default=101, help="samples along the boundary")
        e.add_argument("--nw", type=int, default=21, help="samples along each ruling")
        if name == "extend":
            e.add_argument("--json")
        e.set_defaults(func=func)

    c = sub.add_parser("check", help="run the self-check suites")
    c.add_argument("--json", action="store_true")
    c.add_argument("--rank-tol", type=float, default=None,
                   help="override the rank tolerance (for testing the failure path)")
    c.set_defaults(func=cmd_check)

    x = sub.add_parser("example", help="print a built-in scene file")
    x.add_argument("name", choices=["1.3", "1.4", "cylinder", "sphere", "helix", "parabolic"])
    x.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FlatextError as exc:
        code = _exit_code(exc)
        print(f"flatext: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
