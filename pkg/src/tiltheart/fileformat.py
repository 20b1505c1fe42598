"""TOML input format for algebras, modules and complexes, and the matching writers.

A file looks like::

    [field]
    p = 2

    [quiver]
    vertices = ["1", "2"]
    arrows = [["a", "1", "2"]]
    relations = []          # composition order: "c*a" is a followed by c

    [module]
    dims = [1, 0]
    [module.maps]           # one dims[dst] x dims[src] matrix per arrow, row-major
    a = []

Further optional sections: ``[[modules]]`` (a list of modules, same keys as
``[module]``), ``[[complexes]]`` (two-term complexes of projectives) and
``[morphism]`` (a chain map between two named complexes).
"""

from __future__ import annotations

import hashlib
import re
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .heartcore import ChainMap, TwoTermComplex
from .quivalg import (
    PathAlgebra,
    Quiver,
    QuiverError,
    RelationParseError,
    build_path_algebra,
    is_prime,
    parse_relation,
)
from .repkit import Representation, projective_map, projective_sum


class InputError(ValueError):
    """A problem with an input file, with a 1-based position when one is known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class InputData:
    text: str
    algebra: PathAlgebra
    module: Optional[Representation] = None
    modules: list[Representation] = field(default_factory=list)
    complexes: dict[str, TwoTermComplex] = field(default_factory=dict)
    morphism: Optional[ChainMap] = None
    options: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        return input_digest(self.algebra, self.module)


def _locate(text: str, needle: str, after: int = 0) -> tuple[Optional[int], Optional[int]]:
    pos = text.find(needle, after)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _locate_key(text: str, key: str) -> tuple[Optional[int], Optional[int]]:
    """Position of ``key =`` at the start of a line, skipping comments and values."""
    m = re.search(rf"^[ \t]*{re.escape(key)}[ \t]*=", text, re.MULTILINE)
    if m is None:
        return None, None
    return _locate(text, key, m.start())


def _fail(text: str, message: str, needle: Optional[str] = None, offset: int = 0, key: Optional[str] = None):
    if key is not None:
        line, col = _locate_key(text, key)
    else:
        line, col = _locate(text, needle) if needle else (None, None)
    if col is not None:
        col += offset
    raise InputError(message, line, col)


def _table(doc: dict, key: str, text: str) -> dict:
    t = doc.get(key)
    if not isinstance(t, dict):
        _fail(text, f"missing [{key}] table", f"[{key}")
    return t


def parse_algebra(doc: dict, text: str, length_cap: int = 64) -> PathAlgebra:
    p = _table(doc, "field", text).get("p", 2)
    if not isinstance(p, int) or not is_prime(p):
        _fail(text, f"field characteristic must be a prime, got {p!r}", key="p")
    q = _table(doc, "quiver", text)
    vertices = q.get("vertices")
    if not isinstance(vertices, list) or not vertices:
        _fail(text, "quiver needs a non-empty 'vertices' list", key="vertices")
    vertices = [str(v) for v in vertices]
    arrows = []
    for a in q.get("arrows", []):
        if not (isinstance(a, list) and len(a) == 3):
            _fail(text, f"arrow must be [name, source, target], got {a!r}", key="arrows")
        arrows.append(tuple(str(x) for x in a))
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except QuiverError as exc:
        _fail(text, str(exc), key="arrows")
    relations = q.get("relations", [])
    if not isinstance(relations, list) or not all(isinstance(r, str) for r in relations):
        _fail(text, "'relations' must be a list of strings", key="relations")
    try:
        return build_path_algebra(quiver, relations, p=p, length_cap=length_cap)
    except RelationParseError as exc:
        bad = next((r for r in relations if _relation_fails(r, quiver)), None)
        # the column counts from the opening quote of the string literal
        _fail(text, str(exc), f'"{bad}"' if bad else None, offset=(exc.column or 0) if bad else 0, key=None if bad else "relations")
    except ValueError as exc:
        _fail(text, str(exc), key="relations")


def _relation_fails(rel: str, quiver: Quiver) -> bool:
    try:
        parse_relation(rel, quiver)
    except RelationParseError:
        return True
    return False


def parse_module(alg: PathAlgebra, table: dict, text: str, label: str = "module") -> Representation:
    dims = table.get("dims")
    if not isinstance(dims, list):
        _fail(text, f"[{label}] needs a 'dims' list", key="dims")
    maps = table.get("maps", {})
    if not isinstance(maps, dict):
        _fail(text, f"[{label}.maps] must be a table", key="maps")
    try:
        return Representation(alg, dims, maps, name=table.get("name", label))
    except ValueError as exc:
        _fail(text, f"invalid {label}: {exc}", key="dims")


def _vertex_list(alg: PathAlgebra, names, text: str) -> list[int]:
    out = []
    for v in names:
        if str(v) not in alg.quiver.vertex_index:
            _fail(text, f"unknown vertex {v!r}", str(v))
        out.append(alg.quiver.vertex_index[str(v)])
    return out


def _elements(alg: PathAlgebra, rows, shape: tuple[int, int], text: str, what: str):
    if shape[0] == 0 or shape[1] == 0:
        return [[np.zeros(alg.dim, dtype=np.int64)] * shape[1] for _ in range(shape[0])]
    if not isinstance(rows, list) or len(rows) != shape[0] or any(not isinstance(r, list) or len(r) != shape[1] for r in rows):
        _fail(text, f"{what} must be a {shape[0]}x{shape[1]} array of path strings", key=what)
    out = []
    for r in rows:
        line = []
        for s in r:
            try:
                line.append(alg.parse_element(str(s)))
            except ValueError as exc:
                _fail(text, f"{what}: {exc}", str(s))
        out.append(line)
    return out


def parse_complex(alg: PathAlgebra, table: dict, text: str) -> TwoTermComplex:
    """``degree1``/``degree0`` list summand vertices; ``d[k][l]`` is a path combination
    from the vertex of degree-0 summand ``k`` to that of degree-1 summand ``l``."""
    tops1 = _vertex_list(alg, table.get("degree1", []), text)
    tops0 = _vertex_list(alg, table.get("degree0", []), text)
    c1, c0 = projective_sum(alg, tops1), projective_sum(alg, tops0)
    elems = _elements(alg, table.get("d", []), (len(tops0), len(tops1)), text, "d")
    try:
        d = projective_map(c1, c0, elems)
    except ValueError as exc:
        _fail(text, f"differential: {exc}", key="d")
    return TwoTermComplex(c1, c0, d, name=table.get("name"))


def parse_morphism(alg: PathAlgebra, table: dict, complexes: dict, text: str) -> ChainMap:
    try:
        s, t = complexes[table["source"]], complexes[table["target"]]
    except KeyError as exc:
        _fail(text, f"morphism refers to unknown complex {exc}", key="source")
    e1 = _elements(alg, table.get("degree1", []), (len(t.c1.projective_tops), len(s.c1.projective_tops)), text, "degree1")
    e0 = _elements(alg, table.get("degree0", []), (len(t.c0.projective_tops), len(s.c0.projective_tops)), text, "degree0")
    phi = ChainMap(s, t, projective_map(s.c1, t.c1, e1), projective_map(s.c0, t.c0, e0))
    if not phi.is_chain_map():
        _fail(text, "morphism does not commute with the differentials", "[morphism]")
    return phi


def parse_input(text: str, length_cap: int = 64) -> InputData:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        raise InputError(str(exc), line, col) from None
    alg = parse_algebra(doc, text, length_cap)
    data = InputData(text, alg, options=dict(doc.get("options", {})))
    if "module" in doc:
        data.module = parse_module(alg, doc["module"], text)
    for k, t in enumerate(doc.get("modules", [])):
        data.modules.append(parse_module(alg, t, text, label=t.get("name", f"modules[{k}]")))
    for k, t in enumerate(doc.get("complexes", [])):
        name = str(t.get("name", f"C{k}"))
        data.complexes[name] = parse_complex(alg, t, text)
    if "morphism" in doc:
        data.morphism = parse_morphism(alg, doc["morphism"], data.complexes, text)
    return data


def load(path: str, length_cap: int = 64) -> InputData:
    with open(path, encoding="utf-8") as fh:
        return parse_input(fh.read(), length_cap)


# ---------------------------------------------------------------- writers


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _list(items: Sequence[str]) -> str:
    return "[" + ", ".join(items) + "]"


def quiver_toml(quiver: Quiver, relations: Sequence[str], p: int) -> str:
    arrows = ", ".join(_list([_q(n), _q(s), _q(t)]) for n, s, t in quiver.arrows)
    return (
        f"[field]\np = {p}\n\n[quiver]\n"
        f"vertices = {_list([_q(v) for v in quiver.vertices])}\n"
        f"arrows = [{arrows}]\n"
        f"relations = {_list([_q(r) for r in relations])}\n"
    )


def _matrix(a: np.ndarray) -> str:
    return _list([_list([str(int(x)) for x in row]) for row in a])


def module_toml(m: Representation, header: str = "[module]") -> str:
    out = [header]
    if m.name:
        out.append(f"name = {_q(m.name)}")
    out.append(f"dims = {_list([str(d) for d in m.dims])}")
    entries = ", ".join(f"{_q(name)} = {_matrix(a)}" for (name, _, _), a in zip(m.algebra.quiver.arrows, m.maps))
    out.append(f"maps = {{ {entries} }}")
    return "\n".join(out) + "\n"


def canonical_input(alg: PathAlgebra, module: Optional[Representation]) -> str:
    text = quiver_toml(alg.quiver, list(alg.relation_text), alg.p)
    if module is not None:
        text += "\n" + module_toml(module)
    return text


def input_digest(alg: PathAlgebra, module: Optional[Representation]) -> str:
    return hashlib.sha256(canonical_input(alg, module).encode()).hexdigest()
