"""Structure and report files.

Both are UTF-8 JSON with a mandatory ``format_version``.  Scalars are strings
("a/b" over Q, decimal residues over F_p) so nothing is lost in transit, and
the writer fixes key order and layout so identical content gives identical
bytes.

Tensor layouts (d = dim H, n = dim of the module):

* ``mul[i][j][k]``: coefficient of e_k in e_i e_j
* ``comul[i][j][k]``: coefficient of e_j (x) e_k in Delta(e_i)
* ``unit[k]``, ``counit[i]``: eta(1) and epsilon(e_i)
* ``alpha``, ``antipode``, ``mu``: matrices, ``M[r][c]`` = coefficient of e_r in M(e_c)
* ``action_left[h][m][k]``, ``action_right[m][h][k]``: coefficient of v_k in the product
* ``coaction_left[m][h][k]``: coefficient of e_h (x) v_k in the coaction of v_m
* ``coaction_right[m][k][h]``: coefficient of v_k (x) e_h in the coaction of v_m
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import __version__
from .exactlin import Field, Matrix, Tensor3, field_from_spec
from .homcore import VerificationReport, HomHopfAlgebra, HomAlgebra, HomCoalgebra, HomBialgebra
from .homrep import HomRepresentation
from .yd import YDModule

FORMAT_VERSION = 1

ALGEBRA_KINDS = ("hom_algebra", "hom_coalgebra", "hom_bialgebra", "hom_hopf")
MODULE_KINDS = ("module", "comodule", "bimodule", "covariant", "yd")
KINDS = ALGEBRA_KINDS + MODULE_KINDS

_ALGEBRA_FIELDS = {
    "hom_algebra": ("mul", "unit", "alpha"),
    "hom_coalgebra": ("comul", "counit", "alpha"),
    "hom_bialgebra": ("mul", "unit", "comul", "counit", "alpha"),
    "hom_hopf": ("mul", "unit", "comul", "counit", "antipode", "alpha"),
}
_REP_TENSORS = {"action_left": "left_action", "action_right": "right_action",
                "coaction_left": "left_coaction", "coaction_right": "right_coaction"}
_HEADER = ("format_version", "kind", "name", "field", "dim")


class FormatError(ValueError):
    """Input file does not parse; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


# ---------------------------------------------------------------- writing

def _fmt(field: Field, x):
    return field.format(x)


def _nest(field: Field, a):
    if a.ndim == 1:
        return [_fmt(field, x) for x in a]
    return [_nest(field, row) for row in a]


def _matrix(m: Matrix):
    return _nest(m.field, m.a)


def _vector(m: Matrix):
    return _nest(m.field, m.a.reshape(-1))


def _tensor(t: Tensor3):
    return _nest(t.field, t.a)


def structure_to_dict(obj) -> dict:
    if isinstance(obj, HomHopfAlgebra):
        h = obj
        return {"format_version": FORMAT_VERSION, "kind": "hom_hopf", "name": h.name, "field": h.field.spec,
                "dim": h.dim, "mul": _tensor(h.algebra.mul_tensor),
                "unit": _vector(h.unit),
                "comul": _tensor(Tensor3.from_split(h.comul, h.dim, h.dim)),
                "counit": _vector(h.counit), "antipode": _matrix(h.antipode), "alpha": _matrix(h.alpha)}
    if isinstance(obj, HomAlgebra):
        return {"format_version": FORMAT_VERSION, "kind": "hom_algebra", "name": "", "field": obj.field.spec,
                "dim": obj.dim, "mul": _tensor(obj.mul_tensor), "unit": _vector(obj.unit),
                "alpha": _matrix(obj.alpha)}
    if isinstance(obj, HomCoalgebra):
        return {"format_version": FORMAT_VERSION, "kind": "hom_coalgebra", "name": "", "field": obj.field.spec,
                "dim": obj.dim, "comul": _tensor(Tensor3.from_split(obj.comul, obj.dim, obj.dim)),
                "counit": _vector(obj.counit), "alpha": _matrix(obj.gamma)}
    if isinstance(obj, HomBialgebra):
        a, c = obj.algebra, obj.coalgebra
        return {"format_version": FORMAT_VERSION, "kind": "hom_bialgebra", "name": "", "field": a.field.spec,
                "dim": a.dim, "mul": _tensor(a.mul_tensor), "unit": _vector(a.unit),
                "comul": _tensor(Tensor3.from_split(c.comul, c.dim, c.dim)),
                "counit": _vector(c.counit), "alpha": _matrix(a.alpha)}
    if isinstance(obj, YDModule):
        rep = obj.representation
        out = _rep_header(rep, "yd", obj.name)
        out["action_right"] = _tensor(rep.tensor("right_action"))
        out["coaction_right"] = _tensor(rep.tensor("right_coaction"))
        return out
    if isinstance(obj, HomRepresentation):
        out = _rep_header(obj, representation_kind(obj), obj.name)
        for key, attr in _REP_TENSORS.items():
            if getattr(obj, attr) is not None:
                out[key] = _tensor(obj.tensor(attr))
        return out
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def representation_kind(m: HomRepresentation) -> str:
    acts = m.has("left_action") + m.has("right_action")
    coacts = m.has("left_coaction") + m.has("right_coaction")
    if acts == 2:
        return "covariant" if coacts else "bimodule"
    if acts == 1 and coacts == 0:
        return "module"
    if acts == 0 and coacts == 1:
        return "comodule"
    raise ValueError("no file kind holds this combination of structure maps")


def _rep_header(m: HomRepresentation, kind: str, name: str) -> dict:
    over = structure_to_dict(m.over)
    del over["format_version"]
    return {"format_version": FORMAT_VERSION, "kind": kind, "name": name, "field": m.field.spec,
            "dim": m.dim, "over": over, "mu": _matrix(m.mu)}


def _encode(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_encode(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list) and any(isinstance(v, (list, dict)) for v in value):
        items = [pad + "  " + _encode(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(doc: dict) -> str:
    """Canonical text: fixed layout, innermost arrays on one line, trailing newline."""
    return _encode(doc, 0) + "\n"


def emit(obj) -> str:
    return dumps(structure_to_dict(obj))


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- reading

def _scalar(field: Field, x, where: str):
    if not isinstance(x, str):
        raise FormatError(f"scalar must be a string, got {json.dumps(x)}", where)
    try:
        return field.parse(x)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad scalar {x!r} ({e})", where) from None


def _array(field: Field, x, shape: tuple, where: str):
    if len(shape) == 0:
        return _scalar(field, x, where)
    if not isinstance(x, list):
        raise FormatError(f"expected an array of length {shape[0]}", where)
    if len(x) != shape[0]:
        raise FormatError(f"expected length {shape[0]}, got {len(x)}", where)
    return [_array(field, v, shape[1:], f"{where}[{i}]") for i, v in enumerate(x)]


def _np(field: Field, nested, shape):
    a = field.zeros(shape)
    flat = a.reshape(-1)

    def walk(x, out):
        if isinstance(x, list):
            for v in x:
                walk(v, out)
        else:
            out.append(x)
    vals = []
    walk(nested, vals)
    for i, v in enumerate(vals):
        flat[i] = v
    return a


def _read_matrix(doc, key, field, rows, cols, where) -> Matrix:
    return Matrix(field, _np(field, _array(field, doc[key], (rows, cols), f"{where}{key}"), (rows, cols)))


def _read_vector(doc, key, field, n, where) -> Matrix:
    return Matrix(field, _np(field, _array(field, doc[key], (n,), f"{where}{key}"), (n,)).reshape(-1, 1))


def _read_tensor(doc, key, field, shape, where) -> Tensor3:
    return Tensor3(field, _np(field, _array(field, doc[key], shape, f"{where}{key}"), shape))


def _check_keys(doc: dict, allowed: tuple, required: tuple, where: str):
    if not isinstance(doc, dict):
        raise FormatError("expected an object", where)
    for k in doc:
        if k not in allowed:
            raise FormatError(f"unknown field {k!r}", where)
    for k in required:
        if k not in doc:
            raise FormatError(f"missing field {k!r}", where)


def _count(doc, key, where) -> int:
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise FormatError(f"{key} must be a non-negative integer", where)
    return v


def _field(doc, where, expected: Field | None = None) -> Field:
    spec = doc["field"]
    if not isinstance(spec, str):
        raise FormatError("field must be a string", where)
    try:
        f = field_from_spec(spec)
    except ValueError as e:
        raise FormatError(str(e), where + "field") from None
    if expected is not None and f != expected:
        raise FormatError(f"field {f.spec} does not match {expected.spec}", where + "field")
    return f


def _read_algebra(doc: dict, where: str, nested: bool, field: Field | None = None):
    kind = doc.get("kind")
    if kind not in ALGEBRA_KINDS:
        raise FormatError(f"kind must be one of {', '.join(ALGEBRA_KINDS)}", where + "kind")
    names = _ALGEBRA_FIELDS[kind]
    header = _HEADER[1:] if nested else _HEADER
    _check_keys(doc, header + names, tuple(k for k in header if k != "name") + names, where)
    f = _field(doc, where, field)
    d = _count(doc, "dim", where)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name must be a string", where + "name")
    got = {}
    if "mul" in names:
        got["mul"] = _read_tensor(doc, "mul", f, (d, d, d), where).binary()
        got["unit"] = _read_vector(doc, "unit", f, d, where)
    if "comul" in names:
        got["comul"] = _read_tensor(doc, "comul", f, (d, d, d), where).split()
        got["counit"] = _read_vector(doc, "counit", f, d, where).T
    alpha = _read_matrix(doc, "alpha", f, d, d, where)
    if kind == "hom_algebra":
        return HomAlgebra(f, d, got["mul"], got["unit"], alpha)
    if kind == "hom_coalgebra":
        return HomCoalgebra(f, d, got["comul"], got["counit"], alpha)
    if kind == "hom_bialgebra":
        return HomBialgebra(HomAlgebra(f, d, got["mul"], got["unit"], alpha),
                            HomCoalgebra(f, d, got["comul"], got["counit"], alpha))
    S = _read_matrix(doc, "antipode", f, d, d, where)
    return HomHopfAlgebra.build(f, got["mul"], got["unit"], got["comul"], got["counit"], S, alpha, name=name)


def _read_representation(doc: dict, where: str = ""):
    kind = doc["kind"]
    allowed = _HEADER + ("over", "mu") + tuple(_REP_TENSORS)
    _check_keys(doc, allowed, ("format_version", "kind", "field", "dim", "over", "mu"), where)
    f = _field(doc, where)
    n = _count(doc, "dim", where)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name must be a string", where + "name")
    over = doc["over"]
    if not isinstance(over, dict) or over.get("kind") != "hom_hopf":
        raise FormatError("over must be a hom_hopf structure", where + "over")
    h = _read_algebra(over, where + "over.", nested=True, field=f)
    d = h.dim
    mu = _read_matrix(doc, "mu", f, n, n, where)
    shapes = {"action_left": (d, n, n), "action_right": (n, d, n),
              "coaction_left": (n, d, n), "coaction_right": (n, n, d)}
    present = [k for k in _REP_TENSORS if k in doc]
    need = {"module": 1, "comodule": 1, "bimodule": 2, "covariant": 3, "yd": 2}
    ok = {
        "module": present in (["action_left"], ["action_right"]),
        "comodule": present in (["coaction_left"], ["coaction_right"]),
        "bimodule": present == ["action_left", "action_right"],
        "covariant": present[:2] == ["action_left", "action_right"] and len(present) >= need["covariant"],
        "yd": present == ["action_right", "coaction_right"],
    }[kind]
    if not ok:
        raise FormatError(f"kind {kind} does not match the structure maps present ({', '.join(present) or 'none'})",
                          where + "kind")
    maps = {}
    for key in present:
        t = _read_tensor(doc, key, f, shapes[key], where)
        maps[_REP_TENSORS[key]] = t.binary() if key.startswith("action") else t.split()
    if kind == "yd":
        return YDModule(h, mu, maps["right_action"], maps["right_coaction"], name=name)
    return HomRepresentation(h, mu, name=name, **maps)


@dataclass
class LoadedStructure:
    kind: str
    obj: object
    text: str

    @property
    def digest(self) -> str:
        return digest(self.text)


def loads(text: str):
    """Parse a structure file; raises FormatError with a location on any problem."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, f"line {e.lineno} column {e.colno}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    if "format_version" not in doc:
        raise FormatError("missing field 'format_version'")
    if doc["format_version"] != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {doc['format_version']!r}", "format_version")
    kind = doc.get("kind")
    if kind in ALGEBRA_KINDS:
        return _read_algebra(doc, "", nested=False)
    if kind in MODULE_KINDS:
        return _read_representation(doc)
    raise FormatError(f"unknown kind {kind!r}", "kind")


def load(path: str) -> LoadedStructure:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    obj = loads(text)
    return LoadedStructure(structure_kind(obj), obj, text)


def structure_kind(obj) -> str:
    if isinstance(obj, HomHopfAlgebra):
        return "hom_hopf"
    if isinstance(obj, HomBialgebra):
        return "hom_bialgebra"
    if isinstance(obj, HomAlgebra):
        return "hom_algebra"
    if isinstance(obj, HomCoalgebra):
        return "hom_coalgebra"
    if isinstance(obj, YDModule):
        return "yd"
    return representation_kind(obj)


# ---------------------------------------------------------------- reports

def check_to_dict(c) -> dict:
    out = {"name": c.name, "status": c.status}
    if c.witness is not None:
        idx, residual = c.witness
        out["witness"] = {"basis": list(idx), "residual": list(residual)}
    if c.detail:
        out["detail"] = c.detail
    return out


def report_document(command: str, report: VerificationReport | None, *, field: str, seed: int | None,
                    inputs: list[str], verdict: str, data: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "tool": "homhopf",
        "tool_version": __version__,
        "command": command,
        "inputs": [digest(t) for t in inputs],
        "field": field,
        "seed": seed,
        "checks": [check_to_dict(c) for c in (report.checks if report else [])],
        "data": data or {},
        "verdict": verdict,
    }
