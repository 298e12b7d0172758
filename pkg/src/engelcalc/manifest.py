"""JSON manifests for framed spaces, plane fields, and mapping-torus inputs.

Scalar entries are canonical expression strings (see ``trigring.parse``);
rationals serialize as ``"p/q"`` and exact frequencies as
``{"rat": "p/q", "pi": "r/s"}``.  Dumping and re-loading a manifest is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .framecalc import ComplexStructure, FramedSpace, VecField
from .trigring import Frequency, parse, rat

__all__ = ["Manifest", "load_manifest", "dump_manifest", "manifest_from_parts"]


@dataclass(frozen=True)
class Manifest:
    name: str
    space: FramedSpace
    J: ComplexStructure | None
    d1: VecField | None
    d2: VecField | None
    parameters: Mapping[str, Fraction]
    mapping_torus: Mapping[str, object] | None  # {"coordinate", "V", "X"}


def _vec_to_json(v: VecField) -> list[str]:
    return [str(c) for c in v.coeffs]


def _vec_from_json(row) -> VecField:
    return VecField.of(*(parse(str(c)) for c in row))


def space_to_json(space: FramedSpace) -> dict:
    structure = {}
    for (i, j) in sorted(space._structure):
        key = f"{space.frame[i]},{space.frame[j]}"
        structure[key] = [str(c) for c in space._structure[(i, j)]]
    derivation: dict[str, dict[str, str]] = {}
    for i in range(4):
        row = {c: str(s) for c, s in sorted(space._deriv[i].items())}
        if row:
            derivation[space.frame[i]] = row
    out = {
        "frame": list(space.frame),
        "coordinates": list(space.coords),
        "structure": structure,
        "derivation": derivation,
    }
    if space.periods:
        out["periods"] = {c: f.to_json() for c, f in sorted(space.periods.items())}
    return out


def space_from_json(obj: Mapping, name: str = "") -> FramedSpace:
    frame = [str(f) for f in obj["frame"]]
    index = {f: i for i, f in enumerate(frame)}
    structure = {}
    for key, comps in obj.get("structure", {}).items():
        a, b = (s.strip() for s in key.split(","))
        i, j = index[a], index[b]
        if i > j:
            raise ValueError(f"structure key {key!r} must list frame names in order")
        structure[(i, j)] = [parse(str(c)) for c in comps]
    derivation = {}
    for fname, row in obj.get("derivation", {}).items():
        for coord, s in row.items():
            derivation[(index[fname], coord)] = parse(str(s))
    periods = {c: Frequency.from_json(p) for c, p in obj.get("periods", {}).items()}
    return FramedSpace(
        frame=frame,
        coords=[str(c) for c in obj.get("coordinates", [])],
        structure=structure,
        derivation=derivation,
        periods=periods or None,
        name=name,
    )


def manifest_from_parts(
    name: str,
    space: FramedSpace,
    J: ComplexStructure | None = None,
    d1: VecField | None = None,
    d2: VecField | None = None,
    parameters: Mapping[str, Fraction] | None = None,
    mapping_torus: Mapping[str, object] | None = None,
) -> dict:
    out = {"name": name, **space_to_json(space)}
    if J is not None:
        out["complex_structure"] = [[str(e) for e in row] for row in J.matrix]
    if d1 is not None and d2 is not None:
        out["distribution"] = [_vec_to_json(d1), _vec_to_json(d2)]
    if parameters:
        out["parameters"] = {k: str(v) for k, v in sorted(parameters.items())}
    if mapping_torus:
        out["mapping_torus"] = {
            "coordinate": mapping_torus["coordinate"],
            "V": _vec_to_json(mapping_torus["V"]),
            "X": _vec_to_json(mapping_torus["X"]),
        }
    return out


def dump_manifest(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_manifest(doc: Mapping | str) -> Manifest:
    """Parse a manifest document (dict or JSON text) into exact objects."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    name = str(doc.get("name", ""))
    space = space_from_json(doc, name=name)
    J = None
    if "complex_structure" in doc:
        J = ComplexStructure([[parse(str(e)) for e in row]
                              for row in doc["complex_structure"]])
    d1 = d2 = None
    if "distribution" in doc:
        rows = doc["distribution"]
        if len(rows) != 2:
            raise ValueError("distribution must list exactly two generators")
        d1, d2 = _vec_from_json(rows[0]), _vec_from_json(rows[1])
    parameters = {k: rat(str(v)) for k, v in doc.get("parameters", {}).items()}
    mapping_torus = None
    if "mapping_torus" in doc:
        mt = doc["mapping_torus"]
        mapping_torus = {
            "coordinate": str(mt["coordinate"]),
            "V": _vec_from_json(mt["V"]),
            "X": _vec_from_json(mt["X"]),
        }
    return Manifest(name, space, J, d1, d2, parameters, mapping_torus)
