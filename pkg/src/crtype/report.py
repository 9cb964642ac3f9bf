"""JSON-ready conversion of results.

Rationals become strings (``"p/q"`` or ``"p"``), INF becomes ``"inf"`` and
polynomials their canonical text, so reports never contain floats.  Keys
are sorted on output, which makes reports byte-identical across runs.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import fields, is_dataclass
from fractions import Fraction

from .algebra import INF, ExactScalar, HermitianPolynomial
from .catlin import BoundarySystem, ComplexVectorField, ListSpec
from .curves import CurveJet, LinearEmbedding
from .parser import serialize

__all__ = ["jsonable", "input_hash", "envelope", "dumps"]


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if obj is INF:
        return "inf"
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, ExactScalar)):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, HermitianPolynomial):
        return serialize(obj)
    if isinstance(obj, ComplexVectorField):
        return obj.describe()
    if isinstance(obj, ListSpec):
        return obj.encoding()
    if isinstance(obj, CurveJet):
        return {"components": obj.describe(), "basepoint": jsonable(obj.basepoint)}
    if isinstance(obj, LinearEmbedding):
        return {"matrix": jsonable(obj.matrix), "basepoint": jsonable(obj.basepoint)}
    if isinstance(obj, BoundarySystem):
        return {
            "rank": obj.rank,
            "levi_indices": list(obj.levi_indices),
            "functions": {f"r{k}": jsonable(v) for k, v in obj.functions.items()},
            "fields": {f"L{k}": jsonable(v) for k, v in obj.fields.items()},
            "lists": {f"stage{k}": jsonable(v) for k, v in obj.lists.items()},
            "selections": {f"stage{k}": v for k, v in obj.selections.items()},
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def input_hash(r: HermitianPolynomial) -> str:
    text = f"n={r.n};{serialize(r)}"
    return hashlib.sha256(text.encode()).hexdigest()


def envelope(tool: str, version: str, command: str, flags: dict, r=None, result=None,
             trace=None, timing=None, error=None) -> dict:
    out = {
        "tool": tool,
        "version": version,
        "input_hash": input_hash(r) if r is not None else None,
        "command": command,
        "flags": jsonable(flags),
        "timing": timing,
    }
    if error is not None:
        out["error"] = error
    else:
        out["result"] = jsonable(result)
    if trace is not None:
        out["trace"] = jsonable(trace)
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
