"""Endomorphism algebras of projective two-term complexes and their Gabriel quivers.

Products follow composition: ``x * y = x o y``.  With this rule the
component ``e_i Theta e_j`` consists of maps from summand ``j`` to summand
``i``, exactly as ``e_i A e_j`` (paths ``i -> j``) corresponds to maps
``P(j) -> P(i)``.  So an arrow ``i -> j`` of the Gabriel quiver is a
radical map from summand ``j`` to summand ``i``, and the quiver of
``End(0 -> A)`` is the quiver of ``A``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .exactla import DTYPE, Echelon, Subspace
from .heartcore import ChainMap, ChainMapSpace, HomotopyHom, TwoTermComplex
from .quivalg import FinDimAlgebra, Quiver, build_path_algebra, format_relation
from .repkit import projective_cover, submodule
from .repkit.decompose import NonSplitWarning, group_isoclasses, local_iso_witness, split
from .repkit.module import RepMorphism


# ---------------------------------------------------------------- decomposition


class _ComplexNode:
    def __init__(self, c: TwoTermComplex):
        self.complex = c
        self.dim = c.c1.dim + c.c0.dim

    def end_basis(self):
        return [f.flat for f in ChainMapSpace(self.complex, self.complex).basis]

    def restrict(self, space: Subspace):
        """Subcomplex on an End-invariant ``space``, re-presented on standard projectives."""
        c = self.complex
        p = c.p
        n1 = c.c1.dim
        u1 = Subspace(space.basis[:, :n1], n1, p)
        u0 = Subspace(space.basis[:, n1:], c.c0.dim, p)
        m1, inc1 = submodule(c.c1, u1)
        m0, inc0 = submodule(c.c0, u0)
        p1, pi1 = projective_cover(m1)
        p0, pi0 = projective_cover(m0)
        if p1.dim != m1.dim or p0.dim != m0.dim:
            raise AssertionError("summand of a projective complex has a non-projective term")
        j1 = inc1.compose(pi1)
        j0 = inc0.compose(pi0)
        # d restricted: P1 -> c1 -> c0, then back through the iso P0 ~ m0
        dd = c.d.compose(j1)
        d_new = RepMorphism.from_flat(p1, p0, la.solve(j0.flat, dd.flat, p), check=True)
        child = TwoTermComplex(p1, p0, d_new)
        inc = la.zeros(self.dim, p1.dim + p0.dim)
        inc[:n1, : p1.dim] = j1.flat
        inc[n1:, p1.dim :] = j0.flat
        return _ComplexNode(child), inc


def _chain_homs(a: _ComplexNode, b: _ComplexNode):
    return [f.flat for f in ChainMapSpace(a.complex, b.complex).basis]


def _is_contractible(c: TwoTermComplex) -> bool:
    return HomotopyHom(c, c).dim == 0


@dataclass
class ComplexSummand:
    complex: TwoTermComplex
    inclusion: ChainMap
    projection: ChainMap
    certified: bool = True


@dataclass
class ComplexDecomposition:
    complex: TwoTermComplex
    summands: list[ComplexSummand]
    groups: list[list[int]]
    contractible: list[int]
    nonsplit: bool = False

    @property
    def multiplicities(self) -> list[tuple[TwoTermComplex, int]]:
        return [(self.summands[g[0]].complex, len(g)) for g in self.groups]

    def basic_form(self) -> list[TwoTermComplex]:
        """One representative per isoclass, ordered by the tops of their terms."""
        reps = [self.summands[g[0]].complex for g in self.groups]
        return sorted(reps, key=_summand_key)


def _summand_key(c: TwoTermComplex):
    return (sorted(c.c0.projective_tops), sorted(c.c1.projective_tops), c.dim_vectors())


def decompose_complex(c: TwoTermComplex) -> ComplexDecomposition:
    """Fitting splitting of a complex with projective terms; contractible pieces are set aside."""
    if not c.has_projective_terms:
        raise ValueError("complex must have projective terms")
    p = c.p
    leaves = split(_ComplexNode(c), p)
    summands = []
    nonsplit = False
    for leaf in leaves:
        child = leaf.node.complex
        inc = ChainMap.from_flat(child, c, leaf.inclusion)
        proj = ChainMap.from_flat(c, child, leaf.projection)
        nonsplit |= not leaf.certified
        summands.append(ComplexSummand(child, inc, proj, leaf.certified))
    if nonsplit:
        warnings.warn("complex summand with non-split local endomorphism ring", NonSplitWarning)
    contractible = [i for i, s in enumerate(summands) if _is_contractible(s.complex)]
    keep = [i for i in range(len(summands)) if i not in contractible]
    nodes = [leaves[i].node for i in keep]
    groups = group_isoclasses(nodes, _chain_homs, p, key=lambda n: (n.complex.c1.dims, n.complex.c0.dims))
    groups = [[keep[i] for i in g] for g in groups]
    return ComplexDecomposition(c, summands, groups, contractible, nonsplit)


def basic_form(c: TwoTermComplex) -> list[TwoTermComplex]:
    return decompose_complex(c).basic_form()


# ---------------------------------------------------------------- Theta


class EndAlgebra(FinDimAlgebra):
    """``End`` of ``summands[0] + ... + summands[r-1]`` in the homotopy category.

    Basis element ``b`` is a chain map from summand ``block[b][1]`` to
    summand ``block[b][0]`` (a representative of its homotopy class).
    """

    def __init__(self, summands: Sequence[TwoTermComplex]):
        self.summands = tuple(summands)
        r = len(self.summands)
        p = self.summands[0].p if r else 2
        self.homs = {(i, j): HomotopyHom(self.summands[j], self.summands[i]) for i in range(r) for j in range(r)}
        labels, blocks, reps = [], [], []
        self.offset = {}
        for i in range(r):
            for j in range(r):
                h = self.homs[(i, j)]
                self.offset[(i, j)] = len(labels)
                for k, f in enumerate(h.representatives):
                    labels.append(f"{j + 1}->{i + 1}#{k}")
                    blocks.append((i, j))
                    reps.append(f)
        n = len(labels)
        mult = np.zeros((n, n, n), dtype=DTYPE)
        for x in range(n):
            ix, jx = blocks[x]
            for y in range(n):
                iy, jy = blocks[y]
                if jx != iy:
                    continue
                comp = reps[x].compose(reps[y])
                coords = self.homs[(ix, jy)].class_coordinates(comp)
                off = self.offset[(ix, jy)]
                mult[x, y, off : off + len(coords)] = coords
        unit = np.zeros(n, dtype=DTYPE)
        for i in range(r):
            unit[self.offset[(i, i)]] = 1  # identity is the first representative
        self.block = tuple(blocks)
        self.representatives = tuple(reps)
        super().__init__(labels, mult, unit, p)

    @property
    def n_summands(self) -> int:
        return len(self.summands)

    def idempotent(self, i: int) -> np.ndarray:
        return self.basis_vector(self.offset[(i, i)])

    def block_indices(self, i: int, j: int) -> list[int]:
        return [b for b in range(self.dim) if self.block[b] == (i, j)]


def end_algebra(c: TwoTermComplex) -> FinDimAlgebra:
    """``End`` of a single projective complex on a homotopy-class basis."""
    h = HomotopyHom(c, c)
    reps = h.representatives
    n = len(reps)
    mult = np.zeros((n, n, n), dtype=DTYPE)
    for x in range(n):
        for y in range(n):
            mult[x, y] = h.class_coordinates(reps[x].compose(reps[y]))
    unit = np.zeros(n, dtype=DTYPE)
    if n:
        unit[0] = 1
    return FinDimAlgebra([f"b{k}" for k in range(n)], mult, unit, c.p)


def summand_end_algebra(summands: Sequence[TwoTermComplex]) -> EndAlgebra:
    return EndAlgebra(summands)


# ---------------------------------------------------------------- Gabriel quiver


class NotBasic(ValueError):
    pass


@dataclass
class QuiverPresentation:
    quiver: Quiver
    arrow_lifts: dict[str, np.ndarray]
    relations: list[str]
    relation_degrees: list[tuple[int, int]]  # (lowest, highest) path length in each relation
    quadratic_dim: int  # dim of the relations living purely in path length 2
    degree_cap: int
    algebra_dim: int
    presented_dim: Optional[int] = None  # dim kQ/(relations), when rebuilt
    radical_power_zero: int = 0

    @property
    def dimension_matches(self) -> bool:
        return self.presented_dim == self.algebra_dim


def _scalar_part(alg: FinDimAlgebra, x: np.ndarray, one: np.ndarray) -> Optional[int]:
    for c in range(alg.p):
        if alg.is_nilpotent((x - c * one) % alg.p):
            return c
    return None


def radical(alg: EndAlgebra) -> Subspace:
    """Off-diagonal blocks plus the nilpotent parts of the local diagonal blocks."""
    p = alg.p
    rows = []
    for b in range(alg.dim):
        i, j = alg.block[b]
        x = alg.basis_vector(b)
        if i != j:
            rows.append(x)
            continue
        one = alg.idempotent(i)
        c = _scalar_part(alg, x, one)
        if c is None:
            raise NotBasic(f"summand {i + 1} has a non-split or non-local endomorphism ring")
        rows.append((x - c * one) % p)
    rad = Subspace(np.array(rows), alg.dim, p) if rows else Subspace.zero(alg.dim, p)
    if rad.dim != alg.dim - alg.n_summands:
        raise NotBasic("radical has the wrong codimension; summands are not pairwise non-isomorphic with local ends")
    return rad


def _products(alg: FinDimAlgebra, u: Subspace, v: Subspace) -> Subspace:
    rows = [alg.product(x, y) for x in u.basis for y in v.basis]
    return Subspace(np.array(rows), alg.dim, alg.p) if rows else Subspace.zero(alg.dim, alg.p)


def gabriel_quiver(alg: EndAlgebra, degree_cap: int = 4, names: Optional[Sequence[str]] = None, rebuild: bool = True) -> QuiverPresentation:
    p = alg.p
    r = alg.n_summands
    J = radical(alg)
    # J must be a two-sided ideal
    for b in range(alg.dim):
        e = alg.basis_vector(b)
        for x in J.basis:
            if not J.contains(alg.product(e, x)) or not J.contains(alg.product(x, e)):
                raise NotBasic("computed radical is not an ideal")
    powers = [J]
    while powers[-1].dim:
        powers.append(_products(alg, powers[-1], J))
        if len(powers) > alg.dim + 1:
            raise AssertionError("radical is not nilpotent")
    nil_index = len(powers)  # J^nil_index = 0
    J2 = powers[1] if len(powers) > 1 else Subspace.zero(alg.dim, p)
    vertices = [str(k + 1) for k in range(r)] if names is None else list(names)
    arrows, lifts = [], {}
    count = 0
    for i in range(r):
        for j in range(r):
            ei, ej = alg.idempotent(i), alg.idempotent(j)
            # e_i J e_j: maps from summand j to summand i
            block = [alg.product(alg.product(ei, x), ej) for x in J.basis]
            blk = Subspace(np.array(block), alg.dim, p) if block else Subspace.zero(alg.dim, p)
            if blk.dim == 0:
                continue
            ech = Echelon(alg.dim, p)
            for x in J2.basis:
                ech.add(x)
            for x in blk.basis:
                if ech.add(x):
                    count += 1
                    name = _arrow_name(count)
                    arrows.append((name, vertices[i], vertices[j]))
                    lifts[name] = x
    quiver = Quiver(tuple(vertices), tuple(arrows))
    cap = max(degree_cap, 2)
    relations, degrees, quad = _relations(alg, quiver, lifts, cap, nil_index)
    pres = QuiverPresentation(quiver, lifts, relations, degrees, quad, cap, alg.dim, None, nil_index)
    if rebuild:
        try:
            pres.presented_dim = build_path_algebra(quiver, relations, p).dim
        except ValueError:
            pres.presented_dim = None
    return pres


def _arrow_name(k: int) -> str:
    return f"x{k}"


def _relations(alg, quiver: Quiver, lifts, cap: int, nil_index: int):
    """Generators of ``ker(kQ -> alg)`` in path length up to ``max(cap, nil_index)``."""
    p = alg.p
    top = max(cap, nil_index)
    paths = []
    by_len = [[(v, ()) for v in range(quiver.n_vertices)]]
    for _ in range(top):
        nxt = []
        for start, arr in by_len[-1]:
            end = quiver.path_end((start, arr))
            for a in range(quiver.n_arrows):
                if quiver.source[a] == end:
                    nxt.append((start, arr + (a,)))
        by_len.append(nxt)
    for level in by_len:
        paths.extend(level)
    names = [a[0] for a in quiver.arrows]
    images = []
    for start, arr in paths:
        x = alg.idempotent(start)
        for a in arr:
            x = alg.product(x, lifts[names[a]])
        images.append(x)
    img = np.array(images)
    if not img.size:
        return [], [], 0
    # surjectivity: paths must span the algebra
    if la.rank(img, p) != alg.dim:
        raise AssertionError("arrow lifts do not generate the algebra")
    kernel = la.kernel_matrix(img.T, p)  # rows: combinations of paths mapping to 0
    length = np.array([len(arr) for _, arr in paths])
    # prefer high-degree pivots so each row's leading term is its top-degree path
    order = np.argsort(-length, kind="stable")
    if kernel.shape[0] == 0:
        return [], [], 0
    red, piv = la.rref(kernel[:, order], p)
    rows = red[: len(piv)]
    back = np.empty_like(order)
    back[order] = np.arange(len(order))
    rows = rows[:, back]
    lead_deg = [int(length[order[c]]) for c in piv]
    idx = sorted(range(len(rows)), key=lambda k: (lead_deg[k], k))
    quad = sum(1 for k in idx if lead_deg[k] == 2 and all(length[np.flatnonzero(rows[k])] == 2))
    # greedy minimal generation modulo the ideal of earlier generators (truncated at length top)
    index = {q: k for k, q in enumerate(paths)}
    ideal = Echelon(len(paths), p)
    work = []

    def close(vec):
        if ideal.add(vec):
            work.append(vec)
        while work:
            v = work.pop()
            for a in range(quiver.n_arrows):
                for side in (0, 1):
                    out = np.zeros(len(paths), dtype=DTYPE)
                    for k in np.flatnonzero(v):
                        start, arr = paths[k]
                        if side == 0 and quiver.path_end((start, arr)) == quiver.source[a] and len(arr) < top:
                            out[index[(start, arr + (a,))]] = v[k]
                        if side == 1 and quiver.target[a] == start and len(arr) < top:
                            out[index[(quiver.source[a], (a,) + arr)]] = v[k]
                    if out.any() and ideal.add(out):
                        work.append(out)

    gens, degrees = [], []
    for k in idx:
        v = rows[k]
        if not ideal.reduce(v).any():
            continue
        close(v)
        support = np.flatnonzero(v)
        gens.append({paths[s]: int(v[s]) for s in support})
        degrees.append((int(length[support].min()), int(length[support].max())))
    rel_text = [format_relation(g, quiver, p) for g in gens]
    return rel_text, degrees, quad
