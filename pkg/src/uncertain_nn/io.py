"""JSON instance/result files.

Floats are written with Python's shortest round-trip repr, so parsing a file
and writing it again reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from .instances import instance_stats
from .model import UncertainSet, discrete_point, disk_point, make_set
from .nonzero import DiagramVertex, crossing_counts
from .quantification import QuantificationVector

VERSION = 1


class FormatError(ValueError):
    pass


def instance_to_dict(P: UncertainSet, with_stats: bool = True) -> dict:
    if P.is_discrete:
        points = [{"locations": p.locations.tolist(), "weights": p.weights.tolist()} for p in P]
    else:
        points = [{"center": [p.region.center.x, p.region.center.y], "radius": p.region.radius} for p in P]
    out = {"version": VERSION, "variant": P.variant, "points": points}
    if with_stats:
        out["stats"] = instance_stats(P).as_dict()
    return out


def instance_from_dict(data: dict) -> UncertainSet:
    if data.get("version") != VERSION:
        raise FormatError(f"unsupported instance version {data.get('version')!r}")
    variant = data.get("variant")
    try:
        if variant == "disk":
            pts = [disk_point(p["center"], p["radius"]) for p in data["points"]]
        elif variant == "discrete":
            pts = [discrete_point(p["locations"], p["weights"]) for p in data["points"]]
        else:
            raise FormatError(f"unknown variant {variant!r}")
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed point record: {exc}") from exc
    return make_set(pts)


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_instance(P: UncertainSet, path=None) -> str:
    text = dumps(instance_to_dict(P))
    if path is not None:
        Path(path).write_text(text)
    return text


def read_instance(path) -> UncertainSet:
    return instance_from_dict(json.loads(Path(path).read_text()))


def result_to_dict(q, result: QuantificationVector, seed=None, timing=None) -> dict:
    return {
        "version": VERSION,
        "query": [float(q[0]), float(q[1])],
        "method": result.method.value,
        "entries": [{"index": i, "probability": p} for i, p in sorted(result.entries.items())],
        "error_bound": result.error_bound,
        "seed": seed,
        "params": {k: v for k, v in result.params.items()},
        "timing": timing or {},
    }


def nonzero_to_dict(q, indices) -> dict:
    return {"version": VERSION, "query": [float(q[0]), float(q[1])], "indices": list(indices)}


def vertex_to_dict(v: DiagramVertex) -> dict:
    return {
        "location": [v.location.x, v.location.y],
        "value": v.value,
        "kind": v.kind.value,
        "triple": list(v.triple),
        "residual": v.residual,
    }


def features_to_dict(vertices) -> dict:
    return {
        "version": VERSION,
        "mu": len(vertices),
        "vertices": [vertex_to_dict(v) for v in vertices],
        "pair_crossings": [{"pair": list(p), "count": c} for p, c in crossing_counts(vertices).items()],
    }
