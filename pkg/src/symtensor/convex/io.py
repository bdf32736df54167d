"""Body JSON format.

::

    {"format": "symtensor/1", "kind": "vpolytope", "dim": 2,
     "data": [["1", "0"], ["0", "1"]]}

Rationals are strings ``"p/q"``; ellipsoid floats are shortest round-trip
decimal strings unless the shape is exact.  Oracle bodies are stored as the
recipe that built them and are rebuilt on load.
"""
from __future__ import annotations

import json
from pathlib import Path

from .bodies import Body, Ellipsoid, HPolytope, OracleBody, RepresentationError, VPolytope
from .rational import format_rational, parse_rational

FORMAT = "symtensor/1"


class FormatError(ValueError):
    pass


def _rows(vectors):
    return [[format_rational(a) for a in v] for v in vectors]


def body_to_dict(body: Body) -> dict:
    out = {"format": FORMAT, "kind": body.kind, "dim": body.dim}
    if isinstance(body, VPolytope):
        out["data"] = _rows(body.generators)
    elif isinstance(body, HPolytope):
        out["data"] = _rows(body.facet_normals)
    elif isinstance(body, Ellipsoid):
        if body.is_exact:
            out["exact"] = True
            out["data"] = _rows(body.exact_shape)
        else:
            out["data"] = [[repr(float(a)) for a in row] for row in body.shape]
    elif isinstance(body, OracleBody):
        recipe = body.provenance.get("recipe")
        if recipe is None:
            raise RepresentationError("oracle body without a construction recipe cannot be serialized")
        out["data"] = None
        out["recipe"] = recipe
    else:
        raise TypeError(body)
    return out


def body_from_dict(obj: dict) -> Body:
    fmt = obj.get("format", FORMAT)
    if fmt != FORMAT:
        raise FormatError(f"unsupported format tag {fmt!r}")
    try:
        kind, dim, data = obj["kind"], int(obj["dim"]), obj.get("data")
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from None
    if kind == "vpolytope":
        body = VPolytope([[parse_rational(a) for a in row] for row in data], dim)
    elif kind == "hpolytope":
        body = HPolytope([[parse_rational(a) for a in row] for row in data], dim)
    elif kind == "ellipsoid":
        if obj.get("exact"):
            body = Ellipsoid(None, exact_shape=[[parse_rational(a) for a in row] for row in data])
        else:
            import numpy as np

            body = Ellipsoid(np.array([[float(a) for a in row] for row in data]))
    elif kind == "oracle":
        from ..tensor.products import build_from_recipe

        body = build_from_recipe(obj["recipe"])
    else:
        raise FormatError(f"unknown body kind {kind!r}")
    if body.dim != dim:
        raise FormatError(f"declared dim {dim} does not match data ({body.dim})")
    return body


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_body(body: Body, path, extra: dict | None = None) -> None:
    d = body_to_dict(body)
    if extra:
        d.update(extra)
    Path(path).write_text(dumps(d))


def read_body(path) -> Body:
    return body_from_dict(json.loads(Path(path).read_text()))
