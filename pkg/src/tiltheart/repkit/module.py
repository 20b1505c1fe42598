"""Right modules over a path algebra, presented as quiver representations.

An arrow ``a: i -> j`` acts by a ``dims[j] x dims[i]`` matrix on column
vectors.  Elements of a module are flat vectors: the vertex spaces are laid
end to end in vertex order.  A path acts by the composite of its arrow maps
in traversal order, so ``m * (c*a)`` is ``C @ A @ m``.

Worked example, ``kA2`` (``1 --a--> 2``)::

    P(1): dims (1, 1), a -> [[1]]     basis e1 | a
    P(2): dims (0, 1)                 basis e2
    S1:   dims (1, 0)
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .. import exactla as la
from ..exactla import DTYPE, Subspace
from ..quivalg import FinDimAlgebra, PathAlgebra


class RelationViolation(ValueError):
    def __init__(self, relation: str):
        self.relation = relation
        super().__init__(f"relation {relation} does not act as zero")


class AlgebraMismatch(ValueError):
    pass


class NotASubmodule(ValueError):
    pass


class Representation:
    """A finite-dimensional right module over ``algebra``.

    ``projective_tops`` is set on direct sums of indecomposable projectives
    built by :func:`projective_sum`, listing the vertex of each summand.
    """

    def __init__(
        self,
        algebra: PathAlgebra,
        dims: Sequence[int],
        maps: Union[Mapping[str, object], Sequence[object], None] = None,
        name: Optional[str] = None,
        projective_tops: Optional[Sequence[int]] = None,
        check: bool = True,
    ):
        q = algebra.quiver
        self.algebra = algebra
        self.p = algebra.p
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != q.n_vertices or any(d < 0 for d in self.dims):
            raise ValueError(f"need {q.n_vertices} non-negative vertex dimensions, got {dims}")
        if maps is None:
            maps = {}
        if isinstance(maps, Mapping):
            unknown = set(maps) - set(q.arrow_index)
            if unknown:
                raise ValueError(f"maps for unknown arrows: {sorted(unknown)}")
            raw = [maps.get(name) for name, _, _ in q.arrows]
        else:
            raw = list(maps)
            if len(raw) != q.n_arrows:
                raise ValueError("one matrix per arrow expected")
        self.maps: tuple[np.ndarray, ...] = tuple(
            self._shape_map(k, m) for k, m in enumerate(raw)
        )
        self.name = name
        self.projective_tops = tuple(projective_tops) if projective_tops is not None else None
        if check:
            validate(self)

    def _shape_map(self, k: int, m) -> np.ndarray:
        q = self.algebra.quiver
        rows, cols = self.dims[q.target[k]], self.dims[q.source[k]]
        if m is None:
            return la.zeros(rows, cols)
        a = np.array(m, dtype=DTYPE)
        if a.size == 0:
            a = la.zeros(rows, cols)
        a = a.reshape(rows, cols) if a.size == rows * cols else a
        if a.shape != (rows, cols):
            raise ValueError(
                f"arrow {q.arrows[k][0]} needs a {rows}x{cols} matrix, got shape {a.shape}"
            )
        a = a % self.p
        a.setflags(write=False)
        return a

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Representation{label} dims={self.dims}>"

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.dims:
            out.append(out[-1] + d)
        return tuple(out)

    def vertex_slice(self, i: int) -> slice:
        return slice(self.offsets[i], self.offsets[i + 1])

    def raw_path_map(self, arrows: Sequence[int], start: int) -> np.ndarray:
        q = self.algebra.quiver
        out = la.identity(self.dims[start])
        for a in arrows:
            out = la.matmul(self.maps[a], out, self.p)
        return out

    @cached_property
    def _path_maps(self) -> tuple[np.ndarray, ...]:
        return tuple(self.raw_path_map(arrows, start) for start, arrows in self.algebra.paths)

    def path_map(self, k: int) -> np.ndarray:
        """Action of basis path ``k``: a ``dims[target] x dims[source]`` matrix."""
        return self._path_maps[k]

    def action_matrix(self, x) -> np.ndarray:
        """Flat matrix of ``m -> m * x`` acting on column vectors."""
        a = self.algebra
        out = la.zeros(self.dim, self.dim)
        for k in np.flatnonzero(np.asarray(x) % self.p):
            s, t = a.path_source[k], a.path_target[k]
            out[self.vertex_slice(t), self.vertex_slice(s)] += int(x[k]) * self.path_map(k)
        return out % self.p

    @cached_property
    def basis_actions(self) -> tuple[np.ndarray, ...]:
        return tuple(self.action_matrix(self.algebra.basis_vector(k)) for k in range(self.algebra.dim))

    @cached_property
    def generator_actions(self) -> tuple[np.ndarray, ...]:
        """Action matrices of the idempotents and arrows (they generate the algebra)."""
        a = self.algebra
        q = a.quiver
        ks = [a.idempotent(v) for v in range(q.n_vertices)] + [a.arrow(b) for b in range(q.n_arrows)]
        return tuple(self.basis_actions[k] for k in ks)

    def act(self, v, x) -> np.ndarray:
        return la.matmul(self.action_matrix(x), np.asarray(v, dtype=DTYPE).reshape(-1, 1), self.p).reshape(-1)

    def is_zero(self) -> bool:
        return self.dim == 0

    def same_as(self, other: "Representation") -> bool:
        """Equality of the underlying data (not isomorphism)."""
        return (
            self.algebra is other.algebra
            and self.dims == other.dims
            and all(np.array_equal(x, y) for x, y in zip(self.maps, other.maps))
        )


def validate(rep: Representation) -> None:
    """Raise :class:`RelationViolation` naming the first relation that acts nontrivially."""
    a = rep.algebra
    for text, rel in zip(a.relation_text, a.relations):
        total = None
        for (start, arrows), c in rel.items():
            m = (c * rep.raw_path_map(arrows, start)) % rep.p
            total = m if total is None else (total + m) % rep.p
        if total is not None and total.any():
            raise RelationViolation(text)


def same_algebra(*reps: Representation) -> PathAlgebra:
    alg = reps[0].algebra
    for r in reps[1:]:
        if r.algebra is not alg:
            raise AlgebraMismatch("representations live over different algebras")
    return alg


class RepMorphism:
    """Per-vertex linear maps ``source_i -> target_i`` commuting with the arrows."""

    def __init__(self, source: Representation, target: Representation, comps, check: bool = True):
        same_algebra(source, target)
        self.source = source
        self.target = target
        self.p = source.p
        n = source.algebra.quiver.n_vertices
        cs = []
        for i in range(n):
            c = np.array(comps[i], dtype=DTYPE)
            shape = (target.dims[i], source.dims[i])
            if c.size == 0:
                c = la.zeros(*shape)
            if c.shape != shape:
                raise ValueError(f"component {i} needs shape {shape}, got {c.shape}")
            cs.append(c % self.p)
        self.comps = tuple(cs)
        if check and not self.commutes():
            raise ValueError("components do not commute with the arrow maps")

    def commutes(self) -> bool:
        q = self.source.algebra.quiver
        for a in range(q.n_arrows):
            i, j = q.source[a], q.target[a]
            lhs = la.matmul(self.target.maps[a], self.comps[i], self.p)
            rhs = la.matmul(self.comps[j], self.source.maps[a], self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @classmethod
    def from_flat(cls, source, target, flat, check: bool = True) -> "RepMorphism":
        flat = np.asarray(flat, dtype=DTYPE)
        n = source.algebra.quiver.n_vertices
        comps = [flat[target.vertex_slice(i), source.vertex_slice(i)] for i in range(n)]
        return cls(source, target, comps, check=check)

    @cached_property
    def flat(self) -> np.ndarray:
        out = la.zeros(self.target.dim, self.source.dim)
        for i, c in enumerate(self.comps):
            out[self.target.vertex_slice(i), self.source.vertex_slice(i)] = c
        return out

    def vector(self) -> np.ndarray:
        """Coordinates in the layout used by :func:`hom_space`."""
        parts = [c.reshape(-1) for c in self.comps]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=DTYPE)

    def __call__(self, v) -> np.ndarray:
        return la.matmul(self.flat, np.asarray(v, dtype=DTYPE).reshape(-1, 1), self.p).reshape(-1)

    def compose(self, first: "RepMorphism") -> "RepMorphism":
        """``self o first``."""
        if first.target is not self.source and not first.target.same_as(self.source):
            raise ValueError("morphisms are not composable")
        comps = [la.matmul(x, y, self.p) for x, y in zip(self.comps, first.comps)]
        return RepMorphism(first.source, self.target, comps, check=False)

    def __matmul__(self, first: "RepMorphism") -> "RepMorphism":
        return self.compose(first)

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, [(x + y) % self.p for x, y in zip(self.comps, other.comps)], check=False)

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, [(x - y) % self.p for x, y in zip(self.comps, other.comps)], check=False)

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [(c * x) % self.p for x in self.comps], check=False)

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps)

    def rank(self) -> int:
        return sum(la.rank(c, self.p) for c in self.comps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.rank() == self.source.dim

    def inverse(self) -> "RepMorphism":
        comps = [la.inverse(c, self.p) if c.size else c.T for c in self.comps]
        return RepMorphism(self.target, self.source, comps, check=False)


def identity(m: Representation) -> RepMorphism:
    return RepMorphism(m, m, [la.identity(d) for d in m.dims], check=False)


def zero_morphism(m: Representation, n: Representation) -> RepMorphism:
    return RepMorphism(m, n, [la.zeros(n.dims[i], m.dims[i]) for i in range(len(m.dims))], check=False)


class HomSpace:
    """Basis of ``Hom(source, target)`` as a solution space of commuting squares."""

    def __init__(self, source: Representation, target: Representation, space: Subspace):
        self.source = source
        self.target = target
        self.space = space

    @property
    def dim(self) -> int:
        return self.space.dim

    def __len__(self) -> int:
        return self.space.dim

    def _unflatten(self, vec) -> RepMorphism:
        comps = []
        pos = 0
        for i in range(len(self.source.dims)):
            r, c = self.target.dims[i], self.source.dims[i]
            comps.append(np.asarray(vec[pos : pos + r * c], dtype=DTYPE).reshape(r, c))
            pos += r * c
        return RepMorphism(self.source, self.target, comps, check=False)

    @cached_property
    def basis(self) -> tuple[RepMorphism, ...]:
        return tuple(self._unflatten(row) for row in self.space.basis)

    def __iter__(self):
        return iter(self.basis)

    def combination(self, coeffs) -> RepMorphism:
        coeffs = np.asarray(coeffs, dtype=DTYPE).reshape(1, -1)
        if self.dim == 0:
            return zero_morphism(self.source, self.target)
        return self._unflatten(la.matmul(coeffs, self.space.basis, self.source.p).reshape(-1))

    def coordinates(self, f: RepMorphism) -> np.ndarray:
        return self.space.coordinates(f.vector()).reshape(-1)


def hom_space(m: Representation, n: Representation) -> HomSpace:
    """Solve ``N_a phi_i = phi_j M_a`` for all arrows ``a: i -> j``."""
    alg = same_algebra(m, n)
    q = alg.quiver
    p = m.p
    sizes = [n.dims[i] * m.dims[i] for i in range(q.n_vertices)]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offs[-1])
    blocks = []
    for a in range(q.n_arrows):
        i, j = q.source[a], q.target[a]
        rows = n.dims[j] * m.dims[i]
        if rows == 0:
            continue
        eq = la.zeros(rows, total)
        # vec(N_a phi_i) = kron(N_a, I) vec(phi_i); vec(phi_j M_a) = kron(I, M_a^T) vec(phi_j)
        if sizes[i]:
            eq[:, offs[i] : offs[i + 1]] += np.kron(n.maps[a], la.identity(m.dims[i]))
        if sizes[j]:
            eq[:, offs[j] : offs[j + 1]] -= np.kron(la.identity(n.dims[j]), m.maps[a].T)
        blocks.append(eq % p)
    system = np.vstack(blocks) if blocks else la.zeros(0, total)
    return HomSpace(m, n, la.kernel_basis(system, p))


# ---------------------------------------------------------------- submodules


def generate(m: Representation, vectors) -> Subspace:
    """Submodule (as a flat subspace) generated by ``vectors``."""
    v = la.as_rows(vectors, m.dim, m.p)
    if v.shape[0] == 0 or m.dim == 0:
        return Subspace.zero(m.dim, m.p)
    rows = [la.matmul(v, act.T, m.p) for act in m.basis_actions]
    return Subspace(np.vstack(rows), m.dim, m.p)


def is_submodule(m: Representation, space: Subspace) -> bool:
    if space.dim == 0:
        return True
    return all(space.contains(la.matmul(space.basis, act.T, m.p)) for act in m.generator_actions)


def _vertex_bases(m: Representation, space: Subspace) -> list[Subspace]:
    return [Subspace(space.basis[:, m.vertex_slice(i)], m.dims[i], m.p) for i in range(len(m.dims))]


def submodule(m: Representation, space: Subspace, name: Optional[str] = None) -> tuple[Representation, RepMorphism]:
    """The submodule ``space`` of ``m`` as a representation, with its inclusion."""
    if space.ambient_dim != m.dim:
        raise ValueError("subspace lives in the wrong ambient space")
    if not is_submodule(m, space):
        raise NotASubmodule("subspace is not closed under the action")
    q = m.algebra.quiver
    local = _vertex_bases(m, space)
    maps = []
    for a in range(q.n_arrows):
        i, j = q.source[a], q.target[a]
        if local[i].dim == 0 or local[j].dim == 0:
            maps.append(la.zeros(local[j].dim, local[i].dim))
            continue
        img = la.matmul(local[i].basis, m.maps[a].T, m.p)
        maps.append(local[j].coordinates(img).T)
    sub = Representation(m.algebra, [s.dim for s in local], maps, name=name, check=False)
    inc = RepMorphism(sub, m, [s.basis.T for s in local], check=False)
    return sub, inc


def quotient(m: Representation, space: Subspace, name: Optional[str] = None) -> tuple[Representation, RepMorphism, np.ndarray]:
    """``m / space`` with the projection and a linear (flat) section."""
    if space.ambient_dim != m.dim:
        raise ValueError("subspace lives in the wrong ambient space")
    if not is_submodule(m, space):
        raise NotASubmodule("cannot take the quotient by a non-submodule")
    q = m.algebra.quiver
    p = m.p
    proj, sect = [], []
    for u in _vertex_bases(m, space):
        comp = u.complement()
        free = [int(np.flatnonzero(r)[0]) for r in comp]
        eye = la.identity(u.ambient_dim)
        pi = (eye[free] - la.matmul(u.basis[:, free].T, eye[list(u.pivots)], p)) % p if u.dim else eye[free]
        proj.append(pi.reshape(len(free), u.ambient_dim))
        sect.append(comp.T)
    maps = []
    for a in range(q.n_arrows):
        i, j = q.source[a], q.target[a]
        maps.append(la.matmul(la.matmul(proj[j], m.maps[a], p), sect[i], p))
    quo = Representation(m.algebra, [x.shape[0] for x in proj], maps, name=name, check=False)
    pi = RepMorphism(m, quo, proj, check=False)
    section = la.zeros(m.dim, quo.dim)
    for i, s in enumerate(sect):
        section[m.vertex_slice(i), quo.vertex_slice(i)] = s
    return quo, pi, section


def kernel_space(f: RepMorphism) -> Subspace:
    return la.kernel_basis(f.flat, f.p)


def image_space(f: RepMorphism) -> Subspace:
    return Subspace(f.flat.T, f.target.dim, f.p)


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return submodule(f.source, kernel_space(f))


def image(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return submodule(f.target, image_space(f))


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    quo, pi, _ = quotient(f.target, image_space(f))
    return quo, pi


def restrict(f: RepMorphism, inc: RepMorphism) -> RepMorphism:
    return f.compose(inc)


def factor_through_mono(f: RepMorphism, inc: RepMorphism) -> RepMorphism:
    """The unique ``g`` with ``inc o g = f``, for an injective ``inc``."""
    comps = []
    for i in range(len(f.comps)):
        if inc.comps[i].shape[1] == 0:
            comps.append(la.zeros(0, f.comps[i].shape[1]))
            continue
        x = la.solve(inc.comps[i], f.comps[i], f.p)
        if x is None:
            raise ValueError("morphism does not factor through the monomorphism")
        comps.append(x)
    return RepMorphism(f.source, inc.source, comps, check=False)


class DirectSum:
    def __init__(self, total: Representation, injections, projections):
        self.module = total
        self.injections = tuple(injections)
        self.projections = tuple(projections)


def direct_sum(reps: Sequence[Representation], algebra: Optional[PathAlgebra] = None, name: Optional[str] = None) -> DirectSum:
    if not reps:
        if algebra is None:
            raise ValueError("empty direct sum needs the algebra")
        z = Representation(algebra, [0] * algebra.quiver.n_vertices, name=name, check=False, projective_tops=())
        return DirectSum(z, [], [])
    alg = same_algebra(*reps)
    q = alg.quiver
    n = q.n_vertices
    dims = [sum(r.dims[i] for r in reps) for i in range(n)]
    maps = []
    for a in range(q.n_arrows):
        i, j = q.source[a], q.target[a]
        block = la.zeros(dims[j], dims[i])
        ro = co = 0
        for r in reps:
            block[ro : ro + r.dims[j], co : co + r.dims[i]] = r.maps[a]
            ro += r.dims[j]
            co += r.dims[i]
        maps.append(block)
    tops = None
    if all(r.projective_tops is not None for r in reps):
        tops = tuple(t for r in reps for t in r.projective_tops)
    total = Representation(alg, dims, maps, name=name, projective_tops=tops, check=False)
    inj, prj = [], []
    starts = [0] * n
    for r in reps:
        ic, pc = [], []
        for i in range(n):
            e = la.zeros(dims[i], r.dims[i])
            e[starts[i] : starts[i] + r.dims[i], :] = la.identity(r.dims[i])
            ic.append(e)
            pc.append(e.T.copy())
            starts[i] += r.dims[i]
        inj.append(RepMorphism(r, total, ic, check=False))
        prj.append(RepMorphism(total, r, pc, check=False))
    return DirectSum(total, inj, prj)


def morphism_matrix(blocks: Sequence[Sequence[RepMorphism]], source: DirectSum, target: DirectSum) -> RepMorphism:
    """Assemble ``sum_{k,l} inj_k o blocks[k][l] o proj_l``."""
    out = zero_morphism(source.module, target.module)
    for k, row in enumerate(blocks):
        for l, f in enumerate(row):
            if f is None:
                continue
            out = out + target.injections[k].compose(f).compose(source.projections[l])
    return out


# ---------------------------------------------------------------- projectives


def _proj_layout(alg: PathAlgebra, tops: Sequence[int]) -> dict[tuple[int, int], int]:
    pos = {}
    flat = 0
    for j in range(alg.quiver.n_vertices):
        for k, i in enumerate(tops):
            for u in alg.paths_between(i, j):
                pos[(k, u)] = flat
                flat += 1
    return pos


def projective_sum(alg: PathAlgebra, tops: Sequence[int], name: Optional[str] = None) -> Representation:
    """``P(tops[0]) + P(tops[1]) + ...`` where ``P(i) = e_i A`` has the paths from ``i`` as basis."""
    tops = tuple(int(t) for t in tops)
    q = alg.quiver
    dims = [sum(len(alg.paths_between(i, j)) for i in tops) for j in range(q.n_vertices)]
    pos = _proj_layout(alg, tops)
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    maps = []
    for a in range(q.n_arrows):
        s, t = q.source[a], q.target[a]
        block = la.zeros(dims[t], dims[s])
        ak = alg.arrow(a)
        for k, i in enumerate(tops):
            for u in alg.paths_between(i, s):
                col = pos[(k, u)] - offs[s]
                prod = alg.mult[u, ak]
                for w in np.flatnonzero(prod):
                    block[pos[(k, int(w))] - offs[t], col] = prod[w]
        maps.append(block)
    return Representation(alg, dims, maps, name=name, projective_tops=tops, check=False)


def projective(alg: PathAlgebra, i: int) -> Representation:
    return projective_sum(alg, (i,), name=f"P({alg.quiver.vertices[i]})")


def regular_module(alg: PathAlgebra) -> Representation:
    return projective_sum(alg, tuple(range(alg.quiver.n_vertices)), name="A")


def simple(alg: PathAlgebra, i: int) -> Representation:
    dims = [0] * alg.quiver.n_vertices
    dims[i] = 1
    return Representation(alg, dims, name=f"S({alg.quiver.vertices[i]})", check=False)


def zero_module(alg: PathAlgebra) -> Representation:
    return Representation(alg, [0] * alg.quiver.n_vertices, name="0", projective_tops=(), check=False)


def projective_layout(p: Representation) -> dict[tuple[int, int], int]:
    if p.projective_tops is None:
        raise ValueError("not a constructed sum of indecomposable projectives")
    return _proj_layout(p.algebra, p.projective_tops)


def generator_vector(p: Representation, k: int) -> np.ndarray:
    """The element ``e_i`` of the ``k``-th summand ``P(i)``."""
    pos = projective_layout(p)
    v = np.zeros(p.dim, dtype=DTYPE)
    v[pos[(k, p.algebra.idempotent(p.projective_tops[k]))]] = 1
    return v


def from_generators(p: Representation, m: Representation, images: Sequence) -> RepMorphism:
    """Morphism ``P -> m`` sending the ``k``-th generator to ``images[k]`` (flat vectors)."""
    alg = same_algebra(p, m)
    tops = p.projective_tops
    if tops is None:
        raise ValueError("source is not a constructed projective")
    if len(images) != len(tops):
        raise ValueError("one image per projective summand expected")
    pos = _proj_layout(alg, tops)
    flat = la.zeros(m.dim, p.dim)
    for k, i in enumerate(tops):
        img = np.asarray(images[k], dtype=DTYPE).reshape(-1) % m.p
        outside = img.copy()
        outside[m.vertex_slice(i)] = 0
        if outside.any():
            raise ValueError(f"image of generator {k} does not lie at vertex {alg.quiver.vertices[i]}")
        local = img[m.vertex_slice(i)]
        for u in alg.paths_from(i):
            j = alg.path_target[u]
            flat[m.vertex_slice(j), pos[(k, u)]] = la.matmul(m.path_map(u), local.reshape(-1, 1), m.p).reshape(-1)
    return RepMorphism.from_flat(p, m, flat, check=False)


def element_vector(p: Representation, k: int, x) -> np.ndarray:
    """Flat vector of ``x`` placed in the ``k``-th summand ``e_i A``; ``x`` must lie in ``e_i A``."""
    alg = p.algebra
    i = p.projective_tops[k]
    pos = _proj_layout(alg, p.projective_tops)
    v = np.zeros(p.dim, dtype=DTYPE)
    for u in np.flatnonzero(np.asarray(x) % p.p):
        if alg.path_source[u] != i:
            raise ValueError(f"element {alg.format_element(x)} does not start at vertex {alg.quiver.vertices[i]}")
        v[pos[(k, int(u))]] = x[u]
    return v % p.p


def projective_map(source: Representation, target: Representation, elements) -> RepMorphism:
    """``source -> target`` between projective sums, given ``elements[k][l]`` in ``e_{i_k} A e_{j_l}``.

    The ``l``-th generator of ``source`` goes to ``sum_k elements[k][l]`` in the ``k``-th summand.
    """
    alg = same_algebra(source, target)
    imgs = []
    for l, j in enumerate(source.projective_tops):
        v = np.zeros(target.dim, dtype=DTYPE)
        for k in range(len(target.projective_tops)):
            x = np.asarray(elements[k][l], dtype=DTYPE) % alg.p
            bad = [u for u in np.flatnonzero(x) if alg.path_target[u] != j]
            if bad:
                raise ValueError(f"entry ({k},{l}) does not end at vertex {alg.quiver.vertices[j]}")
            v = (v + element_vector(target, k, x)) % alg.p
        imgs.append(v)
    return from_generators(source, target, imgs)


def projective_map_elements(f: RepMorphism) -> list[list[np.ndarray]]:
    """Inverse of :func:`projective_map`."""
    alg = f.source.algebra
    src, tgt = f.source, f.target
    pos = _proj_layout(alg, tgt.projective_tops)
    out = [[np.zeros(alg.dim, dtype=DTYPE) for _ in src.projective_tops] for _ in tgt.projective_tops]
    for l in range(len(src.projective_tops)):
        img = f(generator_vector(src, l))
        for (k, u), flat in pos.items():
            out[k][l][u] = img[flat]
    return out
