"""JSON persistence for modules, morphisms and reports.

Entries are written as strings so that rationals and big integers survive
exactly.  ``dumps`` is canonical: sorted keys, fixed indentation, trailing
newline, so parse followed by write reproduces a canonical file byte for byte.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError, ValidationError
from .fi import FIMorphism, TruncatedFIModule
from .modules import ModMap, ModObj
from .rings import CoeffCategory, discrete, integers, prime_field, rationals

MODULE_FORMAT = "fimod-module"
MORPHISM_FORMAT = "fimod-morphism"
VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e}") from None


# ------------------------------------------------------------ coefficients

def coeff_to_json(c: CoeffCategory):
    if c.kind == "prime_field":
        return {"kind": "prime_field", "p": c.p}
    if c.kind == "discrete":
        return {"kind": "discrete", "base": coeff_to_json(c.base), "objects": list(c.objects)}
    return {"kind": c.kind}


def coeff_from_json(d) -> CoeffCategory:
    if not isinstance(d, dict) or "kind" not in d:
        raise ParseError("coefficient entry needs a 'kind'")
    try:
        kind = d["kind"]
        if kind == "prime_field":
            return prime_field(int(d["p"]))
        if kind == "rationals":
            return rationals()
        if kind == "integers":
            return integers()
        if kind == "discrete":
            return discrete(coeff_from_json(d["base"]), d["objects"])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad coefficient entry: {e}") from None
    raise ParseError(f"unknown coefficient kind {d.get('kind')!r}")


# ------------------------------------------------------------ objects and maps

def obj_to_json(A: ModObj):
    return [list(p) for p in A.parts]


def obj_from_json(coeff, d) -> ModObj:
    try:
        return ModObj(coeff, [tuple(int(x) for x in p) for p in d])
    except (TypeError, ValueError) as e:
        raise ValidationError(f"bad module presentation: {e}") from None


def map_to_json(f: ModMap):
    ring = f.coeff.ring
    out = []
    for b in f.blocks:
        out.append({"shape": list(b.shape), "rows": [[ring.format(x) for x in row] for row in b.tolist()]})
    return out


def map_from_json(dom: ModObj, cod: ModObj, d) -> ModMap:
    ring = dom.coeff.ring
    if not isinstance(d, list) or len(d) != len(dom.parts):
        raise ValidationError("a map needs one block per object")
    blocks = []
    for blk in d:
        try:
            r, c = (int(x) for x in blk["shape"])
            rows = blk["rows"]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad matrix block: {e}") from None
        a = ring.zeros(r, c)
        if len(rows) != r or any(len(row) != c for row in rows):
            raise ValidationError("matrix rows do not match the stated shape")
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                a[i, j] = ring.parse(str(x))
        blocks.append(a)
    try:
        return ModMap(dom, cod, blocks)
    except ValueError as e:
        raise ValidationError(str(e)) from None


# ------------------------------------------------------------ modules

def module_to_json(V: TruncatedFIModule):
    return {
        "format": MODULE_FORMAT,
        "version": VERSION,
        "coeff": coeff_to_json(V.coeff),
        "N": V.N,
        "levels": [obj_to_json(L) for L in V.levels],
        "inclusions": [map_to_json(f) for f in V.inclusions],
        "transpositions": [[map_to_json(t) for t in ts] for ts in V.transpositions],
    }


def module_from_json(d, check=True) -> TruncatedFIModule:
    if not isinstance(d, dict) or d.get("format") != MODULE_FORMAT:
        raise ParseError(f"not a {MODULE_FORMAT} document")
    coeff = coeff_from_json(d.get("coeff"))
    try:
        N = int(d["N"])
        levels = [obj_from_json(coeff, x) for x in d["levels"]]
        if len(levels) != N + 1:
            raise ValidationError(f"expected {N + 1} levels, found {len(levels)}")
        if len(d["inclusions"]) != N or len(d["transpositions"]) != N + 1:
            raise ValidationError("wrong number of structure maps")
        incl = [map_from_json(levels[n], levels[n + 1], x) for n, x in enumerate(d["inclusions"])]
        trans = [[map_from_json(levels[n], levels[n], t) for t in ts] for n, ts in enumerate(d["transpositions"])]
    except KeyError as e:
        raise ParseError(f"missing field {e}") from None
    return TruncatedFIModule(coeff, N, levels, incl, trans, check=check)


def morphism_to_json(f: FIMorphism):
    return {"format": MORPHISM_FORMAT, "version": VERSION, "dom": module_to_json(f.dom),
            "cod": module_to_json(f.cod), "maps": [map_to_json(m) for m in f.maps]}


def morphism_from_json(d, check=True) -> FIMorphism:
    if not isinstance(d, dict) or d.get("format") != MORPHISM_FORMAT:
        raise ParseError(f"not a {MORPHISM_FORMAT} document")
    A = module_from_json(d["dom"], check)
    B = module_from_json(d["cod"], check)
    if A.coeff != B.coeff or A.N != B.N:
        raise ValidationError("domain and codomain do not match")
    maps = [map_from_json(A.levels[n], B.levels[n], x) for n, x in enumerate(d["maps"])]
    try:
        return FIMorphism(A, B, maps, check=check)
    except ValueError as e:
        raise ValidationError(str(e)) from None


def read_module(path, check=True) -> TruncatedFIModule:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    return module_from_json(loads(text), check)


def write_json(path, obj):
    text = dumps(obj)
    if path is None or path == "-":
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def to_jsonable(x):
    """numpy and Fraction scalars to plain JSON values."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)
