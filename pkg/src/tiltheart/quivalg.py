"""Quivers, admissible path algebras and finite-dimensional algebras.

Conventions
-----------
A path is stored in *traversal* order: ``(start_vertex, (a1, a2, ...))``
means "first a1, then a2".  Relation strings use function-composition
order, so ``"c*a"`` is the path that applies ``a`` first and ``c`` second.

Multiplication of basis paths is concatenation in traversal order,
``u * v = "u then v"``.  Right modules are quiver representations: an
arrow ``a: i -> j`` acts by a linear map ``M_i -> M_j`` and a path acts by
the composite of its arrow maps.  With this choice ``P(i) = e_i A`` has
the paths starting at ``i`` as basis, and for the algebra of
``1 --a--> 2`` one gets ``P(1) = 1/2`` and ``P(2) = 2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import groupby
from typing import Iterable, Optional, Sequence

import numpy as np

from . import exactla as la
from .exactla import DTYPE, Echelon, Subspace

Path = tuple[int, tuple[int, ...]]


class QuiverError(ValueError):
    pass


class RelationParseError(ValueError):
    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        super().__init__(message if column is None else f"{message} (column {column})")


class AdmissibilityError(ValueError):
    """The relation ideal does not contain a power of the arrow ideal within the cap."""

    def __init__(self, message: str, surviving_path: Optional[str] = None):
        self.surviving_path = surviving_path
        super().__init__(message)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(n), str(s), str(t)) for n, s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("vertex names must be unique")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("arrow names must be unique")
        clash = set(names) & set(self.vertices)
        if clash:
            raise QuiverError(f"names used both for a vertex and an arrow: {sorted(clash)}")
        for name, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise QuiverError(f"arrow {name} uses an undeclared vertex")

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a[0]: i for i, a in enumerate(self.arrows)}

    @cached_property
    def source(self) -> tuple[int, ...]:
        return tuple(self.vertex_index[a[1]] for a in self.arrows)

    @cached_property
    def target(self) -> tuple[int, ...]:
        return tuple(self.vertex_index[a[2]] for a in self.arrows)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def path_end(self, path: Path) -> int:
        start, arrows = path
        return self.target[arrows[-1]] if arrows else start

    def path_name(self, path: Path) -> str:
        start, arrows = path
        if not arrows:
            return f"e{self.vertices[start]}"
        return "*".join(self.arrows[a][0] for a in reversed(arrows))

    def compact_path_name(self, path: Path) -> str:
        """Like :meth:`path_name` with repeated arrows folded into powers (``x^3*y``)."""
        start, arrows = path
        if not arrows:
            return self.path_name(path)
        names = [self.arrows[a][0] for a in reversed(arrows)]
        runs = [(n, sum(1 for _ in g)) for n, g in groupby(names)]
        return "*".join(n if k == 1 else f"{n}^{k}" for n, k in runs)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple((n, t, s) for n, s, t in self.arrows))


def parse_relation(text: str, quiver: Quiver) -> dict[Path, int]:
    """Parse ``"c*a - 2*d*b"`` into ``{path: coefficient}`` (integers, not reduced)."""
    terms: dict[Path, int] = {}
    stripped = text.strip()
    if not stripped:
        raise RelationParseError("empty relation", 1)
    pos = 0
    pattern = re.compile(r"\s*([+-]?)\s*([^+-]+)")
    offset = len(text) - len(text.lstrip())
    body = stripped
    for m in pattern.finditer(body):
        sign = -1 if m.group(1) == "-" else 1
        term = m.group(2).strip()
        col = offset + m.start(2) + 1
        if not term:
            raise RelationParseError("empty term", col)
        coef = sign
        arrows: list[str] = []
        for piece in re.finditer(r"[^*]*", term):
            if piece.start() and term[piece.start() - 1] != "*":
                continue  # empty match right after a token
            tok = piece.group().strip()
            tcol = col + piece.start() + len(piece.group()) - len(piece.group().lstrip())
            if not tok:
                raise RelationParseError(f"dangling '*' in term {term!r}", tcol)
            if re.fullmatch(r"\d+", tok):
                if arrows:
                    raise RelationParseError(f"coefficient after arrows in {term!r}", tcol)
                coef *= int(tok)
            elif tok in quiver.arrow_index:
                arrows.append(tok)
            else:
                raise RelationParseError(f"unknown arrow {tok!r}", tcol)
        if len(arrows) < 2:
            raise RelationParseError(f"term {term!r} has length < 2; relations must lie in the square of the arrow ideal", col)
        traversal = [quiver.arrow_index[a] for a in reversed(arrows)]
        for x, y in zip(traversal, traversal[1:]):
            if quiver.target[x] != quiver.source[y]:
                raise RelationParseError(
                    f"non-composable path in {term!r}: {quiver.arrows[y][0]} cannot follow {quiver.arrows[x][0]}", col
                )
        key = (quiver.source[traversal[0]], tuple(traversal))
        terms[key] = terms.get(key, 0) + coef
        pos = m.end()
    if pos != len(body):
        raise RelationParseError("trailing characters", offset + pos + 1)
    if not terms:
        raise RelationParseError("no terms", 1)
    return terms


def format_relation(terms: dict[Path, int], quiver: Quiver, p: int) -> str:
    parts = []
    for path in sorted(terms, key=lambda q: (len(q[1]), q)):
        c = terms[path] % p
        if c == 0:
            continue
        name = quiver.path_name(path)
        if not parts:
            parts.append(name if c == 1 else f"{c}*{name}")
        else:
            parts.append(f"+ {name}" if c == 1 else f"+ {c}*{name}")
    return " ".join(parts) if parts else "0"


class FinDimAlgebra:
    """Finite-dimensional associative unital algebra given by structure constants.

    ``mult[i, j]`` is the coordinate vector of ``b_i * b_j``.
    """

    def __init__(self, labels: Sequence[str], mult: np.ndarray, unit: np.ndarray, p: int):
        self.labels = tuple(labels)
        self.p = p
        self.mult = np.asarray(mult, dtype=DTYPE) % p
        self.unit = np.asarray(unit, dtype=DTYPE) % p
        n = len(self.labels)
        if self.mult.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}, got {self.mult.shape}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=DTYPE)
        v[i] = 1
        return v

    def product(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=DTYPE)
        y = np.asarray(y, dtype=DTYPE)
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def left_mult_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x*y`` acting on column coordinate vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=DTYPE), self.mult) % self.p

    def right_mult_matrix(self, y) -> np.ndarray:
        return np.einsum("j,ijk->ki", np.asarray(y, dtype=DTYPE), self.mult) % self.p

    def is_nilpotent(self, x) -> bool:
        m = self.left_mult_matrix(x)
        return not la.matrix_power(m, self.dim, self.p).any()

    def is_invertible(self, x) -> bool:
        return la.rank(self.left_mult_matrix(x), self.p) == self.dim

    def check_associative(self) -> bool:
        m = self.mult
        # (b_i b_j) b_k versus b_i (b_j b_k)
        left = np.einsum("ijl,lkm->ijkm", m, m) % self.p
        right = np.einsum("jkl,ilm->ijkm", m, m) % self.p
        return bool(np.array_equal(left, right))

    def check_unit(self) -> bool:
        n = self.dim
        eye = la.identity(n)
        return bool(
            np.array_equal(self.left_mult_matrix(self.unit), eye)
            and np.array_equal(self.right_mult_matrix(self.unit), eye)
        )

    def subspace(self, vectors) -> Subspace:
        return Subspace(vectors, self.dim, self.p)


class PathAlgebra(FinDimAlgebra):
    """kQ/I for an admissible ideal I, on a basis of normal-form paths."""

    def __init__(
        self,
        quiver: Quiver,
        relations: Sequence[dict[Path, int]],
        p: int,
        basis: Sequence[Path],
        mult: np.ndarray,
        nilpotency: int,
        relation_text: Sequence[str] = (),
        reducer=None,
    ):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.relation_text = tuple(relation_text)
        self.paths = tuple(basis)
        self.nilpotency = nilpotency
        self._reducer = reducer
        unit = np.zeros(len(basis), dtype=DTYPE)
        self.path_index = {path: i for i, path in enumerate(self.paths)}
        for v in range(quiver.n_vertices):
            unit[self.path_index[(v, ())]] = 1
        super().__init__([quiver.path_name(b) for b in basis], mult, unit, p)

    @cached_property
    def path_source(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.paths)

    @cached_property
    def path_target(self) -> tuple[int, ...]:
        return tuple(self.quiver.path_end(b) for b in self.paths)

    @cached_property
    def path_length(self) -> tuple[int, ...]:
        return tuple(len(b[1]) for b in self.paths)

    def idempotent(self, v: int) -> int:
        return self.path_index[(v, ())]

    def arrow(self, a: int) -> int:
        return self.path_index[(self.quiver.source[a], (a,))]

    def paths_between(self, i: int, j: int) -> list[int]:
        """Basis indices of normal-form paths from vertex i to vertex j."""
        return [k for k in range(self.dim) if self.path_source[k] == i and self.path_target[k] == j]

    def paths_from(self, i: int) -> list[int]:
        return [k for k in range(self.dim) if self.path_source[k] == i]

    def element(self, terms: dict[Path, int]) -> np.ndarray:
        """Coordinates of a linear combination of (arbitrary) paths."""
        out = np.zeros(self.dim, dtype=DTYPE)
        for path, c in terms.items():
            out = (out + c * self.reduce_path(path)) % self.p
        return out

    def reduce_path(self, path: Path) -> np.ndarray:
        start, arrows = path
        if path in self.path_index:
            return self.basis_vector(self.path_index[path])
        if len(arrows) >= self.nilpotency:
            return np.zeros(self.dim, dtype=DTYPE)
        out = self.basis_vector(self.idempotent(start))
        for a in arrows:
            out = self.product(out, self.basis_vector(self.arrow(a)))
        return out

    def parse_element(self, text: str) -> np.ndarray:
        """Parse an element such as ``"a"``, ``"e1"``, ``"c*a + 2*d*b"`` or ``"0"``."""
        text = text.strip()
        if text == "0":
            return np.zeros(self.dim, dtype=DTYPE)
        out = np.zeros(self.dim, dtype=DTYPE)
        q = self.quiver
        for m in re.finditer(r"\s*([+-]?)\s*([^+-]+)", text):
            sign = -1 if m.group(1) == "-" else 1
            toks = [t.strip() for t in m.group(2).split("*")]
            coef = sign
            arrows = []
            idem = None
            for tok in toks:
                if re.fullmatch(r"\d+", tok):
                    coef *= int(tok)
                elif tok in q.arrow_index:
                    arrows.append(q.arrow_index[tok])
                elif tok.startswith("e") and tok[1:] in q.vertex_index:
                    idem = q.vertex_index[tok[1:]]
                else:
                    raise RelationParseError(f"unknown symbol {tok!r} in element {text!r}")
            if idem is not None:
                if arrows:
                    raise RelationParseError(f"mixing idempotent and arrows in {text!r}")
                vec = self.basis_vector(self.idempotent(idem))
            elif arrows:
                trav = tuple(reversed(arrows))
                for x, y in zip(trav, trav[1:]):
                    if q.target[x] != q.source[y]:
                        raise RelationParseError(f"non-composable path in {text!r}")
                vec = self.reduce_path((q.source[trav[0]], trav))
            else:
                vec = coef * self.unit
                coef = 1
            out = (out + coef * vec) % self.p
        return out

    def format_element(self, x) -> str:
        terms = {self.paths[k]: int(c) for k, c in enumerate(np.asarray(x) % self.p) if c}
        return format_relation(terms, self.quiver, self.p)

    @cached_property
    def arrow_ideal(self) -> "Ideal":
        rows = [self.basis_vector(k) for k in range(self.dim) if self.path_length[k] >= 1]
        return Ideal(self, Subspace(rows, self.dim, self.p) if rows else Subspace.zero(self.dim, self.p))


def _enumerate_paths(quiver: Quiver, max_len: int, path_cap: int) -> list[list[Path]]:
    by_len: list[list[Path]] = [[(v, ()) for v in range(quiver.n_vertices)]]
    out_arrows = [[a for a in range(quiver.n_arrows) if quiver.source[a] == v] for v in range(quiver.n_vertices)]
    total = len(by_len[0])
    for _ in range(max_len):
        nxt = []
        for start, arrows in by_len[-1]:
            end = quiver.path_end((start, arrows))
            for a in out_arrows[end]:
                nxt.append((start, arrows + (a,)))
        total += len(nxt)
        if total > path_cap:
            raise AdmissibilityError(f"more than {path_cap} paths below the length cap; raise path_cap")
        by_len.append(nxt)
    return by_len


def _ideal_in_truncation(quiver: Quiver, relations, L: int, p: int, path_cap: int):
    """Span of the two-sided ideal generated by ``relations`` in kQ / J^L."""
    by_len = _enumerate_paths(quiver, L - 1, path_cap)
    # longest paths first, so that pivots land on long paths and normal forms are short
    order = [q for length in range(L - 1, -1, -1) for q in by_len[length]]
    index = {q: i for i, q in enumerate(order)}
    n = len(order)
    ech = Echelon(n, p)
    work: list[np.ndarray] = []

    def push(vec):
        if ech.add(vec):
            work.append(vec)

    for rel in relations:
        groups: dict[tuple[int, int], np.ndarray] = {}
        for path, c in rel.items():
            if len(path[1]) >= L:
                continue
            key = (path[0], quiver.path_end(path))
            vec = groups.setdefault(key, np.zeros(n, dtype=DTYPE))
            vec[index[path]] = (vec[index[path]] + c) % p
        for vec in groups.values():
            if vec.any():
                push(vec)
    right = {}
    left = {}
    for q, i in index.items():
        start, arrows = q
        if len(arrows) + 1 >= L:
            continue
        end = quiver.path_end(q)
        for a in range(quiver.n_arrows):
            if quiver.source[a] == end:
                right.setdefault(a, []).append((i, index[(start, arrows + (a,))]))
            if quiver.target[a] == start:
                left.setdefault(a, []).append((i, index[(quiver.source[a], (a,) + arrows)]))
    while work:
        vec = work.pop()
        for table in (right, left):
            for a, pairs in table.items():
                out = np.zeros(n, dtype=DTYPE)
                hit = False
                for i, j in pairs:
                    if vec[i]:
                        out[j] = vec[i]
                        hit = True
                if hit:
                    push(out)
    return by_len, order, index, ech


def build_path_algebra(
    quiver: Quiver,
    relations: Iterable,
    p: int = 2,
    length_cap: int = 64,
    path_cap: int = 20000,
) -> PathAlgebra:
    """Build kQ/I with I generated by ``relations`` (strings or parsed dicts).

    The ideal is computed in the truncations kQ/J^L for growing L until all
    paths of length L-1 lie in it.  This is exact whenever the quiver is
    acyclic or the relations are homogeneous in path length.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    rel_text: list[str] = []
    parsed: list[dict[Path, int]] = []
    for r in relations:
        if isinstance(r, str):
            rel_text.append(r.strip())
            parsed.append(parse_relation(r, quiver))
        else:
            parsed.append(dict(r))
            rel_text.append(format_relation(dict(r), quiver, p))
    for L in range(2, length_cap + 2):
        by_len, order, index, ech = _ideal_in_truncation(quiver, parsed, L, p, path_cap)
        top = by_len[L - 1]
        survivor = None
        for q in top:
            v = np.zeros(len(order), dtype=DTYPE)
            v[index[q]] = 1
            if ech.reduce(v).any():
                survivor = q
                break
        if survivor is None:
            return _assemble(quiver, parsed, rel_text, p, L - 1, by_len, order, index, ech)
    raise AdmissibilityError(
        f"relations are not admissible within length cap {length_cap}: path "
        f"{quiver.compact_path_name(survivor)} of length {length_cap} survives",
        quiver.compact_path_name(survivor),
    )


def _assemble(quiver, parsed, rel_text, p, N, by_len, order, index, ech) -> PathAlgebra:
    pivots = set(ech.rows)
    basis = [q for length in range(N) for q in by_len[length] if index[q] not in pivots]
    cols = [index[q] for q in basis]
    n = len(basis)

    def nf(path: Path) -> np.ndarray:
        if len(path[1]) >= N:
            return np.zeros(n, dtype=DTYPE)
        v = np.zeros(len(order), dtype=DTYPE)
        v[index[path]] = 1
        return ech.reduce(v)[cols]

    mult = np.zeros((n, n, n), dtype=DTYPE)
    for i, u in enumerate(basis):
        end = quiver.path_end(u)
        for j, w in enumerate(basis):
            if w[0] != end:
                continue
            mult[i, j] = nf((u[0], u[1] + w[1]))
    alg = PathAlgebra(quiver, parsed, p, basis, mult, N, rel_text)
    if not alg.check_associative():
        raise AssertionError("multiplication table is not associative")
    for rel in parsed:
        if alg.element(rel).any():
            raise AssertionError("a relation does not vanish in the constructed algebra")
    return alg


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass
class Ideal:
    """A two-sided ideal, given as a subspace of the parent algebra."""

    parent: FinDimAlgebra
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_two_sided(self) -> bool:
        a = self.parent
        for x in self.space.basis:
            for k in range(a.dim):
                b = a.basis_vector(k)
                if not self.space.contains(a.product(x, b)) or not self.space.contains(a.product(b, x)):
                    return False
        return True

    def product(self, other: "Ideal") -> "Ideal":
        a = self.parent
        rows = [a.product(x, y) for x in self.space.basis for y in other.space.basis]
        if not rows:
            return Ideal(a, Subspace.zero(a.dim, a.p))
        return Ideal(a, Subspace(np.array(rows), a.dim, a.p))

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and self.parent is other.parent and self.space == other.space

    def __hash__(self):
        return hash(self.space)


def zero_ideal(a: FinDimAlgebra) -> Ideal:
    return Ideal(a, Subspace.zero(a.dim, a.p))


def two_sided_closure(a: FinDimAlgebra, vectors) -> Ideal:
    ech = Echelon(a.dim, a.p)
    work = []
    for v in vectors:
        if ech.add(v):
            work.append(np.asarray(v, dtype=DTYPE) % a.p)
    while work:
        x = work.pop()
        for k in range(a.dim):
            b = a.basis_vector(k)
            for y in (a.product(x, b), a.product(b, x)):
                if ech.add(y):
                    work.append(y)
    return Ideal(a, ech.subspace())


def ideal_power_chain(ideal: Ideal) -> list[Ideal]:
    """``[I, I^2, I^3, ...]`` up to and including the first stationary term."""
    chain = [ideal]
    while True:
        nxt = chain[-1].product(ideal)
        if nxt.space == chain[-1].space:
            return chain
        chain.append(nxt)


def annihilator(a: FinDimAlgebra, module) -> Ideal:
    """``{x : module * x = 0}``, via the kernel of the action map."""
    if module.algebra is not a:
        raise ValueError("module is not defined over this algebra")
    cols = [module.action_matrix(a.basis_vector(k)).reshape(-1) for k in range(a.dim)]
    if not cols or cols[0].size == 0:
        return Ideal(a, Subspace.full(a.dim, a.p))
    ker = la.kernel_basis(np.array(cols).T, a.p)
    ideal = Ideal(a, ker)
    if not ideal.is_two_sided():
        raise AssertionError("annihilator is not two-sided")
    return ideal


class QuotientAlgebra(FinDimAlgebra):
    """A/I on the basis of A's basis elements complementary to I."""

    def __init__(self, parent: FinDimAlgebra, ideal: Ideal):
        if ideal.space.contains(parent.unit):
            raise ValueError("ideal is not proper")
        self.parent = parent
        self.ideal = ideal
        p = parent.p
        comp = ideal.space.complement()
        self.kept = tuple(int(np.flatnonzero(r)[0]) for r in comp)
        full = np.vstack([ideal.space.basis, comp]) if ideal.dim else comp
        inv = la.inverse(full.T, p)
        # coordinates of an A-vector in the complement part
        self.surjection = inv[ideal.dim:] % p
        n = len(self.kept)
        mult = np.zeros((n, n, n), dtype=DTYPE)
        for i, ki in enumerate(self.kept):
            for j, kj in enumerate(self.kept):
                mult[i, j] = la.matmul(self.surjection, parent.mult[ki, kj].reshape(-1, 1), p).reshape(-1)
        unit = la.matmul(self.surjection, parent.unit.reshape(-1, 1), p).reshape(-1)
        super().__init__([parent.labels[k] for k in self.kept], mult, unit, p)

    def project(self, x) -> np.ndarray:
        return la.matmul(self.surjection, np.asarray(x, dtype=DTYPE).reshape(-1, 1), self.p).reshape(-1)

    def lift(self, y) -> np.ndarray:
        out = np.zeros(self.parent.dim, dtype=DTYPE)
        for i, k in enumerate(self.kept):
            out[k] = y[i]
        return out % self.p


def quotient_algebra(a: FinDimAlgebra, ideal: Ideal) -> FinDimAlgebra:
    if ideal.dim == 0:
        return a
    return QuotientAlgebra(a, ideal)


def opposite_algebra(a: PathAlgebra) -> PathAlgebra:
    """Reverse every arrow; basis paths are reversed and ``mult`` transposed."""
    q = a.quiver
    qop = q.opposite()
    basis = []
    for start, arrows in a.paths:
        end = q.path_end((start, arrows))
        basis.append((end, tuple(reversed(arrows))))
    rels = []
    for rel in a.relations:
        new = {}
        for (start, arrows), c in rel.items():
            end = q.path_end((start, arrows))
            new[(end, tuple(reversed(arrows)))] = c
        rels.append(new)
    mult = np.transpose(a.mult, (1, 0, 2)).copy()
    return PathAlgebra(qop, rels, a.p, basis, mult, a.nilpotency, [format_relation(r, qop, a.p) for r in rels])
