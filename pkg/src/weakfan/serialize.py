"""Canonical JSON encoding of domain values and the session-file schema."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arithgroup import GroupElement
from .cones import NilpotentCone, make_cone
from .domain import HodgeFlag, PolarizedLattice
from .errors import WeakFanError
from .limits import DeligneSplitting, WeightFiltration
from .linalg import Filtration, GaussRat, Matrix, Subspace


class SchemaError(WeakFanError, ValueError):
    """Malformed session data; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- scalars and matrices ---------------------------------------------------

def encode_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decode_rational(obj, path: str = "$") -> Fraction:
    if isinstance(obj, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(obj, int):
        return Fraction(obj)
    if not isinstance(obj, str):
        raise SchemaError(path, f"expected a rational string 'p/q', got {type(obj).__name__}")
    text = obj.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise SchemaError(path, f"malformed rational {obj!r}") from None
    if q == 0:
        raise SchemaError(path, f"zero denominator in {obj!r}")
    return Fraction(p, q)


def encode_scalar(x):
    if isinstance(x, GaussRat):
        if x.im == 0:
            return encode_rational(x.re)
        return {"im": encode_rational(x.im), "re": encode_rational(x.re)}
    return encode_rational(x)


def decode_scalar(obj, path: str = "$"):
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise SchemaError(path, f"unexpected keys {sorted(extra)}")
        re = decode_rational(obj.get("re", 0), f"{path}.re")
        im = decode_rational(obj.get("im", 0), f"{path}.im")
        return GaussRat(re, im) if im else re
    return decode_rational(obj, path)


def encode_vector(v) -> list:
    return [encode_scalar(x) for x in v]


def decode_vector(obj, path: str = "$", length: int | None = None) -> tuple:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list")
    if length is not None and len(obj) != length:
        raise SchemaError(path, f"expected {length} entries, got {len(obj)}")
    return tuple(decode_scalar(x, f"{path}[{k}]") for k, x in enumerate(obj))


def encode_matrix(m: Matrix) -> dict:
    return {"cols": m.cols, "entries": [encode_vector(r) for r in m.tolist()], "rows": m.rows}


def decode_matrix(obj, path: str = "$", shape: tuple | None = None) -> Matrix:
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict) or "entries" not in obj:
        raise SchemaError(path, "expected a matrix object with 'entries'")
    rows = obj["entries"]
    if not isinstance(rows, list):
        raise SchemaError(f"{path}.entries", "expected a list of rows")
    r = obj.get("rows", len(rows))
    c = obj.get("cols", len(rows[0]) if rows else 0)
    if len(rows) != r:
        raise SchemaError(f"{path}.entries", f"expected {r} rows, got {len(rows)}")
    data = [decode_vector(row, f"{path}.entries[{i}]", c) for i, row in enumerate(rows)]
    m = Matrix(data, cols=c)
    if shape is not None and m.shape != tuple(shape):
        raise SchemaError(path, f"expected shape {tuple(shape)}, got {m.shape}")
    return m


# -- linear-algebra values --------------------------------------------------

def encode_subspace(s: Subspace) -> dict:
    return {"ambient": s.ambient, "basis": [encode_vector(v) for v in s.vectors]}


def decode_subspace(obj, path: str = "$", ambient: int | None = None) -> Subspace:
    if isinstance(obj, list):
        obj = {"basis": obj}
    if not isinstance(obj, dict) or "basis" not in obj:
        raise SchemaError(path, "expected a subspace with 'basis'")
    d = obj.get("ambient", ambient)
    if d is None:
        raise SchemaError(path, "ambient dimension unknown")
    vecs = [decode_vector(v, f"{path}.basis[{k}]", d) for k, v in enumerate(obj["basis"])]
    return Subspace.span(vecs, d)


def _encode_steps(steps) -> list:
    return [{"basis": [encode_vector(v) for v in s.vectors], "dim": s.dim, "index": i} for i, s in steps]


def encode_filtration(f: Filtration) -> dict:
    return {"ambient": f.ambient, "direction": f.direction, "steps": _encode_steps(f.steps)}


def encode_weight(w: WeightFiltration) -> dict:
    return {"ambient": w.ambient, "center": w.center, "steps": _encode_steps(w.steps)}


def decode_weight(obj, path: str = "$") -> WeightFiltration:
    d = obj["ambient"]
    center = obj.get("center", 0)
    steps = [(s["index"] - center, decode_subspace(s["basis"], f"{path}.steps[{k}]", d))
             for k, s in enumerate(obj["steps"])]
    return WeightFiltration(Filtration(d, "increasing", steps), center)


def encode_splitting(s: DeligneSplitting) -> dict:
    return {
        "ambient": s.ambient,
        "pieces": [{"basis": [encode_vector(v) for v in sub.vectors], "p": p, "q": q} for (p, q), sub in s.pieces],
        "weight": s.weight,
    }


def decode_splitting(obj, path: str = "$") -> DeligneSplitting:
    d = obj["ambient"]
    pieces = tuple(((pc["p"], pc["q"]), decode_subspace(pc["basis"], f"{path}.pieces[{k}]", d))
                   for k, pc in enumerate(obj["pieces"]))
    return DeligneSplitting(pieces, obj["weight"], d)


# -- domain values ------------------------------------------------------------

def encode_lattice(L: PolarizedLattice) -> dict:
    return {"Q": encode_matrix(L.Q), "hodge_numbers": list(L.hodge_numbers), "weight": L.weight}


def decode_lattice(obj, path: str = "$") -> PolarizedLattice:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected a lattice object")
    for key in ("Q", "weight", "hodge_numbers"):
        if key not in obj:
            raise SchemaError(f"{path}.{key}", "missing")
    q = decode_matrix(obj["Q"], f"{path}.Q")
    w = obj["weight"]
    h = obj["hodge_numbers"]
    if not isinstance(w, int) or isinstance(w, bool):
        raise SchemaError(f"{path}.weight", "expected an integer")
    if not isinstance(h, list) or not all(isinstance(x, int) for x in h):
        raise SchemaError(f"{path}.hodge_numbers", "expected a list of integers")
    try:
        return PolarizedLattice(q, w, tuple(h))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def encode_flag(f: HodgeFlag) -> dict:
    return {"F": {str(p): [encode_vector(v) for v in f.F(p).vectors] for p in range(1, f.weight + 1)}}


def decode_flag(obj, lattice: PolarizedLattice, path: str = "$") -> HodgeFlag:
    if not isinstance(obj, dict) or "F" not in obj or not isinstance(obj["F"], dict):
        raise SchemaError(path, "expected a flag object with 'F'")
    spaces = {}
    for p in range(1, lattice.weight + 1):
        if str(p) not in obj["F"]:
            raise SchemaError(f"{path}.F.{p}", "missing")
        vecs = obj["F"][str(p)]
        if not isinstance(vecs, list):
            raise SchemaError(f"{path}.F.{p}", "expected a list of vectors")
        spaces[p] = [decode_vector(v, f"{path}.F.{p}[{k}]", lattice.dim) for k, v in enumerate(vecs)]
    try:
        return HodgeFlag.from_spaces(lattice, spaces)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def encode_cone(c: NilpotentCone) -> dict:
    return {"generators": [encode_matrix(g) for g in c.generators]}


def decode_cone(obj, lattice: PolarizedLattice, path: str = "$", names: dict | None = None) -> NilpotentCone:
    if isinstance(obj, list):
        obj = {"generators": obj}
    if not isinstance(obj, dict) or "generators" not in obj:
        raise SchemaError(path, "expected a cone with 'generators'")
    gens = []
    for k, g in enumerate(obj["generators"]):
        p = f"{path}.generators[{k}]"
        if isinstance(g, str):
            if names is None or g not in names:
                raise SchemaError(p, f"unknown nilpotent {g!r}")
            gens.append(names[g])
        else:
            gens.append(decode_matrix(g, p, (lattice.dim, lattice.dim)))
    try:
        return make_cone(lattice, gens)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def encode_group_element(g: GroupElement) -> dict:
    return {"matrix": encode_matrix(g.matrix), "word": [list(x) for x in g.word]}


def decode_group_element(obj, lattice: PolarizedLattice, path: str = "$", index: int | None = None) -> GroupElement:
    if isinstance(obj, dict) and "matrix" in obj:
        m = decode_matrix(obj["matrix"], f"{path}.matrix", (lattice.dim, lattice.dim))
        word = tuple(tuple(w) for w in obj.get("word", ()))
    else:
        m = decode_matrix(obj, path, (lattice.dim, lattice.dim))
        word = ((index, 1),) if index is not None else ()
    g = GroupElement(m, word)
    try:
        return g.validate(lattice)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


# -- sessions -----------------------------------------------------------------

@dataclass
class Session:
    lattice: PolarizedLattice
    nilpotents: dict = field(default_factory=dict)
    cones: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    gamma_generators: dict = field(default_factory=dict)
    fan: dict | None = None

    def lookup(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise SchemaError(f"$.{kind}", f"no entry named {name!r}")
        return table[name]

    def nilpotent_or_ray(self, name: str) -> Matrix:
        if name in self.nilpotents:
            return self.nilpotents[name]
        if name in self.cones and self.cones[name].dim == 1:
            return self.cones[name].generators[0]
        raise SchemaError("$.nilpotents", f"no nilpotent or ray named {name!r}")

    def generator_list(self) -> list:
        return [self.gamma_generators[k] for k in sorted(self.gamma_generators)]


def _named(obj, key: str) -> dict:
    table = obj.get(key, {})
    if not isinstance(table, dict):
        raise SchemaError(f"$.{key}", "expected an object keyed by name")
    return table


def decode_session(obj) -> Session:
    if not isinstance(obj, dict):
        raise SchemaError("$", "session must be a JSON object")
    if "lattice" not in obj:
        raise SchemaError("$.lattice", "missing")
    L = decode_lattice(obj["lattice"], "$.lattice")
    d = L.dim
    nil = {k: decode_matrix(v, f"$.nilpotents.{k}", (d, d)) for k, v in sorted(_named(obj, "nilpotents").items())}
    cones = {k: decode_cone(v, L, f"$.cones.{k}", nil) for k, v in sorted(_named(obj, "cones").items())}
    flags = {k: decode_flag(v, L, f"$.flags.{k}") for k, v in sorted(_named(obj, "flags").items())}
    gens = {}
    for idx, (k, v) in enumerate(sorted(_named(obj, "gamma_generators").items())):
        gens[k] = decode_group_element(v, L, f"$.gamma_generators.{k}", idx)
    fan = obj.get("fan")
    if fan is not None:
        if not isinstance(fan, dict) or not isinstance(fan.get("cones", []), list):
            raise SchemaError("$.fan", "expected an object with a 'cones' list")
        for k, entry in enumerate(fan.get("cones", [])):
            p = f"$.fan.cones[{k}]"
            if not isinstance(entry, dict) or entry.get("cone") not in cones:
                raise SchemaError(f"{p}.cone", "must name a cone in $.cones")
            if entry.get("flag") not in flags:
                raise SchemaError(f"{p}.flag", "must name a flag in $.flags")
        for k, g in enumerate(fan.get("gamma", [])):
            if g not in gens:
                raise SchemaError(f"$.fan.gamma[{k}]", f"unknown gamma generator {g!r}")
        mwl = fan.get("max_word_len", 1)
        if not isinstance(mwl, int) or mwl < 0:
            raise SchemaError("$.fan.max_word_len", "expected a nonnegative integer")
    return Session(L, nil, cones, flags, gens, fan)


def encode_session(s: Session) -> dict:
    out = {
        "cones": {k: encode_cone(c) for k, c in s.cones.items()},
        "flags": {k: encode_flag(f) for k, f in s.flags.items()},
        "gamma_generators": {k: encode_group_element(g) for k, g in s.gamma_generators.items()},
        "lattice": encode_lattice(s.lattice),
        "nilpotents": {k: encode_matrix(m) for k, m in s.nilpotents.items()},
    }
    if s.fan is not None:
        out["fan"] = s.fan
    return out


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def load_session(path: str):
    """(Session, raw JSON) from a file; raw JSON feeds the input digest."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SchemaError("$", f"cannot read session file: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}") from None
    return decode_session(raw), raw
