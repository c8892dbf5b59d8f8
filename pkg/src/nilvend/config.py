"""JSON triple configurations.

A config is an object with optional keys "name", "group", "subgroup", "f",
"transversal" and "atoms".  Rationals are "p/q" strings (or ints), matrices
are lists of rows, group elements are {"k": int, "v": [ints]}.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .arith import rat_str
from .lattice import hnf
from .nilgroup import Elem, GroupDesc, make_subgroup, sg_transversal
from .selfsim import IDENTITY, AtomTable, Engine, Presentation, parse_cycles, parse_word
from .vend import Triple, images_hom, make_triple, matrix_hom, triple_to_json


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _rat(x, field):
    if isinstance(x, bool):
        raise ConfigError(field, "expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(field, f"expected an integer or a 'p/q' string, got {x!r}")


def _int(x, field):
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ConfigError(field, f"expected an integer, got {x!r}")


def _rows(x, field, ncols=None, conv=_int):
    if not isinstance(x, list):
        raise ConfigError(field, "expected a list of rows")
    out = []
    for i, r in enumerate(x):
        if not isinstance(r, list):
            raise ConfigError(f"{field}[{i}]", "expected a row")
        if ncols is not None and len(r) != ncols:
            raise ConfigError(f"{field}[{i}]", f"expected {ncols} entries, got {len(r)}")
        out.append(tuple(conv(v, f"{field}[{i}][{j}]") for j, v in enumerate(r)))
    return out


def _elem(G: GroupDesc, x, field) -> Elem:
    if not isinstance(x, dict) or set(x) - {"k", "v"}:
        raise ConfigError(field, "expected {\"k\": int, \"v\": [ints]}")
    k = _int(x.get("k", 0), f"{field}.k")
    v = x.get("v", [0] * G.n)
    if not isinstance(v, list) or len(v) != G.n:
        raise ConfigError(f"{field}.v", f"expected {G.n} integers")
    try:
        return G.elem(k, [_int(a, f"{field}.v[{i}]") for i, a in enumerate(v)])
    except ValueError as exc:
        raise ConfigError(field, str(exc)) from None


def parse_group(x, field="group") -> GroupDesc:
    if not isinstance(x, dict):
        raise ConfigError(field, "expected an object")
    kind = x.get("type")
    n = _int(x.get("rank"), f"{field}.rank")
    if n < 1:
        raise ConfigError(f"{field}.rank", "must be positive")
    if kind == "abelian":
        return GroupDesc.free_abelian(n)
    if kind == "affine":
        X = _rows(x.get("x_matrix"), f"{field}.x_matrix", n)
        if len(X) != n:
            raise ConfigError(f"{field}.x_matrix", f"expected {n} rows")
        try:
            return GroupDesc.affine(X)
        except ValueError as exc:
            raise ConfigError(f"{field}.x_matrix", str(exc)) from None
    raise ConfigError(f"{field}.type", "expected 'abelian' or 'affine'")


def parse_subgroup(G: GroupDesc, x, field="subgroup"):
    if not isinstance(x, dict):
        raise ConfigError(field, "expected an object")
    rows = _rows(x.get("lattice", []), f"{field}.lattice", G.n)
    e = _int(x.get("e", 0), f"{field}.e")
    u0 = x.get("u0", [0] * G.n)
    if not isinstance(u0, list) or len(u0) != G.n:
        raise ConfigError(f"{field}.u0", f"expected {G.n} integers")
    u0 = tuple(_int(a, f"{field}.u0[{i}]") for i, a in enumerate(u0))
    try:
        return make_subgroup(G, hnf(rows, G.n), e, u0)
    except ValueError as exc:
        raise ConfigError(field, str(exc)) from None


def parse_atoms(x, field="atoms") -> AtomTable:
    if not isinstance(x, dict):
        raise ConfigError(field, "expected an object")
    m = _int(x.get("m"), f"{field}.m")
    defs = x.get("atoms")
    if not isinstance(defs, dict) or not defs:
        raise ConfigError(f"{field}.atoms", "expected a nonempty object")
    pres = None
    if "presentation" in x:
        p = x["presentation"]
        try:
            lattice = tuple(p["lattice"])
            pres = Presentation(p["top"], lattice, tuple(_rows(p["X"], f"{field}.presentation.X", len(lattice))))
            pres.group()
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{field}.presentation", str(exc)) from None
    stub = AtomTable(m, {n: ((IDENTITY,) * m, tuple(range(m))) for n in defs})
    eng = Engine(atoms=stub)
    atoms = {}
    for name, d in defs.items():
        f = f"{field}.atoms.{name}"
        if not isinstance(d, dict):
            raise ConfigError(f, "expected {\"children\": [...], \"perm\": \"(1,2)\"}")
        kids = d.get("children")
        if not isinstance(kids, list) or len(kids) != m:
            raise ConfigError(f"{f}.children", f"expected {m} words")
        try:
            words = tuple(parse_word(eng, w) for w in kids)
            perm = parse_cycles(d.get("perm", "()"), m)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f, str(exc)) from None
        atoms[name] = (words, perm)
    return AtomTable(m, atoms, pres)


def parse_config(cfg: dict) -> tuple[Triple | None, AtomTable | None]:
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "expected a JSON object")
    known = {"name", "group", "subgroup", "f", "transversal", "atoms"}
    extra = set(cfg) - known
    if extra:
        raise ConfigError("<root>", f"unknown keys {sorted(extra)}")
    triple = atoms = None
    if "atoms" in cfg:
        atoms = parse_atoms(cfg["atoms"])
    if "group" in cfg:
        G = parse_group(cfg["group"])
        if "subgroup" not in cfg or "f" not in cfg:
            raise ConfigError("<root>", "a triple needs group, subgroup and f")
        H = parse_subgroup(G, cfg["subgroup"])
        f = cfg["f"]
        if not isinstance(f, dict) or len(f) != 1 or not set(f) <= {"matrix", "images"}:
            raise ConfigError("f", "expected {\"matrix\": rows} or {\"images\": elements}")
        if "matrix" in f:
            hom = matrix_hom(_rows(f["matrix"], "f.matrix", G.n, _rat))
        else:
            imgs = f["images"]
            if not isinstance(imgs, list):
                raise ConfigError("f.images", "expected a list of elements")
            hom = images_hom([_elem(G, g, f"f.images[{i}]") for i, g in enumerate(imgs)])
        Y = cfg.get("transversal", "default")
        if Y == "default":
            Y = None
        elif isinstance(Y, list):
            Y = [_elem(G, y, f"transversal[{i}]") for i, y in enumerate(Y)]
        else:
            raise ConfigError("transversal", "expected \"default\" or a list of elements")
        triple = make_triple(cfg.get("name", "triple"), G, H, hom, Y)
    elif "subgroup" in cfg or "f" in cfg:
        raise ConfigError("<root>", "subgroup and f need a group")
    if triple is None and atoms is None:
        raise ConfigError("<root>", "nothing to do: give a triple or an atom table")
    return triple, atoms


def serialize(triple: Triple | None, atoms: AtomTable | None) -> dict:
    out = {}
    if triple is not None:
        d = triple_to_json(triple)
        out["name"] = d["name"]
        out["group"] = d["group"]
        out["subgroup"] = d["subgroup"]
        out["f"] = d["f"]
        default = tuple(sg_transversal(triple.G, triple.H))
        out["transversal"] = "default" if triple.Y == default else d["transversal"]
    if atoms is not None:
        out["atoms"] = atoms.to_json()
    return out


def load(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}", exc.msg) from None


def dumps(obj) -> str:
    """JSON with two-space indentation and flat lists kept on one line."""
    plain = json.loads(json.dumps(obj, default=_json_default))
    return _fmt(plain, 0) + "\n"


def _fmt(x, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        flat = all(not isinstance(v, (dict, list)) or (isinstance(v, list) and not any(
            isinstance(u, (dict, list)) for u in v)) for v in x.values())
        if flat and len(json.dumps(x)) <= 60:
            return json.dumps(x)
        items = [f"{inner}{json.dumps(k)}: {_fmt(v, depth + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        flat_rows = all(isinstance(v, list) and not any(isinstance(u, (dict, list)) for u in v) for v in x)
        if flat_rows and len(json.dumps(x)) <= 72:
            return json.dumps(x)
        items = [inner + _fmt(v, depth + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x)


def _json_default(x):
    if isinstance(x, Fraction):
        return rat_str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
