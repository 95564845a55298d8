"""Scene files and the built-in example surfaces."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .classify import Tolerances
from .errors import ParseError
from .frames import SurfacePatch
from .roots import SCAN_SAMPLES


@dataclass(frozen=True)
class Scene:
    surface: SurfacePatch
    samples: int = SCAN_SAMPLES
    tolerances: Tolerances = field(default_factory=Tolerances)

    def to_json(self) -> dict:
        S = self.surface
        tol = self.tolerances
        return {
            "surface": {"x1": str(S.x[0]), "x2": str(S.x[1]), "x3": str(S.x[2])},
            "t_range": list(S.t_range),
            "u_range": list(S.u_range),
            "coorientation": S.coorientation,
            "samples": self.samples,
            "tolerances": {"rank": tol.rank, "root": tol.root, "flat": tol.flat},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _pair(obj, key):
    v = obj.get(key)
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ParseError(f"{key!r} must be a list of two numbers")
    if not all(math.isfinite(x) for x in v):
        raise ParseError(f"{key!r} must be finite")
    return float(v[0]), float(v[1])


def scene_from_json(obj) -> Scene:
    if not isinstance(obj, dict):
        raise ParseError("scene must be a JSON object")
    unknown = set(obj) - {"surface", "t_range", "u_range", "coorientation", "samples",
                          "tolerances", "outputs"}
    if unknown:
        raise ParseError(f"unknown scene keys: {sorted(unknown)}")
    surf = obj.get("surface")
    if not isinstance(surf, dict) or set(surf) != {"x1", "x2", "x3"}:
        raise ParseError("'surface' must hold exactly x1, x2, x3")
    if not all(isinstance(surf[k], str) for k in ("x1", "x2", "x3")):
        raise ParseError("surface coordinates must be strings")
    t_range = _pair(obj, "t_range")
    u_range = _pair(obj, "u_range") if "u_range" in obj else (0.0, 1.0)
    if u_range[0] != 0.0 or u_range[1] <= 0.0:
        raise ParseError("'u_range' must be [0, c] with c > 0")
    if t_range[0] >= t_range[1]:
        raise ParseError("'t_range' must be increasing")
    co = obj.get("coorientation", 1)
    if co not in (1, -1) or isinstance(co, bool):
        raise ParseError("'coorientation' must be 1 or -1")
    samples = obj.get("samples", SCAN_SAMPLES)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 16:
        raise ParseError("'samples' must be an integer >= 16")
    tol_obj = obj.get("tolerances", {})
    if not isinstance(tol_obj, dict) or set(tol_obj) - {"rank", "root", "flat"}:
        raise ParseError("'tolerances' may only hold rank, root, flat")
    for k, v in tol_obj.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
            raise ParseError(f"tolerance {k!r} must be a positive number")
    tol = Tolerances(**{k: float(v) for k, v in tol_obj.items()})
    S = SurfacePatch((surf["x1"], surf["x2"], surf["x3"]), t_range, u_range, co)
    return Scene(S, samples, tol)


def loads(text: str) -> Scene:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return scene_from_json(obj)


TWO_PI = 2.0 * math.pi

BUILTIN = {
    "example-1.3": {"surface": {"x1": "t^2 + u", "x2": "t", "x3": "t^3 + u*t"},
                    "t_range": [-1.0, 1.0], "u_range": [0.0, 1.0]},
    "example-1.4": {"surface": {"x1": "t + 1", "x2": "4*t^3 - 2*t^2 - 2*t + u",
                                "x3": "3*t^4 - t^3 - t^2 + u*t"},
                    "t_range": [-1.0, 1.0], "u_range": [0.0, 1.0]},
    "cylinder": {"surface": {"x1": "cos(t)", "x2": "sin(t)", "x3": "u"},
                 "t_range": [0.0, TWO_PI], "u_range": [0.0, 1.0]},
    # unit sphere cap above the latitude circle at height 1/2
    "sphere": {"surface": {"x1": "cos(t)*sqrt(1 - (0.5 + u)^2)",
                           "x2": "sin(t)*sqrt(1 - (0.5 + u)^2)", "x3": "0.5 + u"},
               "t_range": [0.0, TWO_PI], "u_range": [0.0, 0.4]},
    "helix": {"surface": {"x1": "cos(t)", "x2": "sin(t)", "x3": "t + u"},
              "t_range": [0.0, TWO_PI], "u_range": [0.0, 1.0]},
    # graph z = x^2 y over y >= 0, parabolic along the boundary y = 0 at x = 0
    "parabolic": {"surface": {"x1": "t", "x2": "u", "x3": "t^2*u"},
                  "t_range": [-1.0, 1.0], "u_range": [0.0, 1.0]},
}

ALIASES = {"1.3": "example-1.3", "1.4": "example-1.4"}


def builtin(name: str) -> Scene:
    key = ALIASES.get(name, name)
    if key not in BUILTIN:
        raise KeyError(f"no built-in scene {name!r}; choose from {sorted(BUILTIN)}")
    return scene_from_json(BUILTIN[key])


def load(ref: str) -> Scene:
    """Load a scene from a file path or a built-in name."""
    key = ALIASES.get(ref, ref)
    if key in BUILTIN and not Path(ref).exists():
        return builtin(key)
    try:
        text = Path(ref).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read scene {ref!r}: {exc.strerror}") from exc
    return loads(text)
