"""Radicals, projective covers, presentations, Ext^1, trace/reject and the AR translate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import exactla as la
from ..exactla import DTYPE, Subspace
from ..quivalg import Ideal, PathAlgebra, ideal_power_chain
from .module import (
    Representation,
    RepMorphism,
    direct_sum,
    from_generators,
    generate,
    hom_space,
    image_space,
    kernel,
    kernel_space,
    projective_map_elements,
    projective_sum,
    quotient,
    same_algebra,
    submodule,
    zero_module,
)


def radical_space(m: Representation) -> Subspace:
    """``m * J`` with ``J`` the arrow ideal."""
    alg = m.algebra
    q = alg.quiver
    if m.dim == 0 or q.n_arrows == 0:
        return Subspace.zero(m.dim, m.p)
    eye = la.identity(m.dim)
    rows = [la.matmul(eye, m.basis_actions[alg.arrow(a)].T, m.p) for a in range(q.n_arrows)]
    return Subspace(np.vstack(rows), m.dim, m.p)


def radical_top(m: Representation) -> tuple[tuple[Representation, RepMorphism], tuple[Representation, RepMorphism]]:
    rad = radical_space(m)
    sub = submodule(m, rad, name="rad")
    top, pi, _ = quotient(m, rad, name="top")
    return sub, (top, pi)


def top_multiplicities(m: Representation) -> tuple[int, ...]:
    rad = radical_space(m)
    return tuple(m.dims[i] - Subspace(rad.basis[:, m.vertex_slice(i)], m.dims[i], m.p).dim for i in range(len(m.dims)))


def projective_cover(m: Representation) -> tuple[Representation, RepMorphism]:
    """``(P, pi)`` with ``P`` a sum of ``P(i)`` and ``ker pi`` inside ``rad P``.

    Generators are lifted from the canonical complement of ``rad m`` at each
    vertex, so the result is deterministic.
    """
    alg = m.algebra
    rad = radical_space(m)
    tops, images = [], []
    for i in range(len(m.dims)):
        local = Subspace(rad.basis[:, m.vertex_slice(i)], m.dims[i], m.p)
        for c in local.complement():
            v = np.zeros(m.dim, dtype=DTYPE)
            v[m.vertex_slice(i)] = c
            tops.append(i)
            images.append(v)
    cover = projective_sum(alg, tops)
    pi = from_generators(cover, m, images)
    if pi.rank() != m.dim:
        raise AssertionError("projective cover is not surjective")
    if not radical_space(cover).contains_space(kernel_space(pi)):
        raise AssertionError("kernel of the projective cover is not superfluous")
    return cover, pi


@dataclass
class ProjPresentation:
    """``0 -> omega -> r1 --f--> r0 --cover--> module -> 0``."""

    module: Representation
    r1: Representation
    r0: Representation
    f: RepMorphism
    cover: RepMorphism
    syzygy: Representation
    syzygy_inclusion: RepMorphism
    omega: Representation
    omega_inclusion: RepMorphism
    minimal: bool = True

    def euler_check(self) -> bool:
        """Per-vertex alternating sum of dimensions vanishes."""
        return all(
            self.module.dims[i] - self.r0.dims[i] + self.r1.dims[i] - self.omega.dims[i] == 0
            for i in range(len(self.module.dims))
        )

    def is_exact(self) -> bool:
        p = self.module.p
        img_f = image_space(self.f)
        return (
            self.cover.rank() == self.module.dim
            and img_f == kernel_space(self.cover)
            and self.omega_inclusion.rank() == self.omega.dim
            and image_space(self.omega_inclusion) == kernel_space(self.f)
            and self.euler_check()
        )

    def is_minimal(self) -> bool:
        return radical_space(self.r0).contains_space(kernel_space(self.cover)) and radical_space(
            self.r1
        ).contains_space(image_space(self.omega_inclusion))


def min_presentation(v: Representation) -> ProjPresentation:
    r0, pi0 = projective_cover(v)
    k, inc = kernel(pi0)
    r1, pi1 = projective_cover(k)
    f = inc.compose(pi1)
    om, om_inc = kernel(f)
    pres = ProjPresentation(v, r1, r0, f, pi0, k, inc, om, om_inc, minimal=True)
    if not pres.is_exact():
        raise AssertionError("presentation is not exact")
    return pres


@dataclass
class Ext1Result:
    dim: int
    presentation: ProjPresentation
    cocycles: tuple[RepMorphism, ...]  # maps syzygy -> n whose classes form a basis of Ext^1


def ext1(m: Representation, n: Representation, presentation: Optional[ProjPresentation] = None) -> Ext1Result:
    """``Ext^1(m, n) = coker(Hom(P0, n) -> Hom(syzygy, n))``."""
    same_algebra(m, n)
    pres = presentation or min_presentation(m)
    hk = hom_space(pres.syzygy, n)
    if hk.dim == 0:
        return Ext1Result(0, pres, ())
    h0 = hom_space(pres.r0, n)
    rows = [hk.coordinates(g.compose(pres.syzygy_inclusion)) for g in h0.basis]
    ech = la.Echelon(hk.dim, m.p)
    for r in rows:
        ech.add(r)
    keep = []
    for i in range(hk.dim):
        e = np.zeros(hk.dim, dtype=DTYPE)
        e[i] = 1
        if ech.add(e):
            keep.append(hk.basis[i])
    return Ext1Result(len(keep), pres, tuple(keep))


def extension_module(pres: ProjPresentation, n: Representation, theta: RepMorphism) -> tuple[Representation, RepMorphism, RepMorphism]:
    """Pushout of ``syzygy -> r0`` along ``theta: syzygy -> n``.

    Returns ``(E, n -> E, E -> module)`` for the extension ``0 -> n -> E -> module -> 0``.
    """
    p = n.p
    ds = direct_sum([pres.r0, n])
    tot = ds.module
    # image of k -> (inc(k), -theta(k))
    f = ds.injections[0].compose(pres.syzygy_inclusion) - ds.injections[1].compose(theta)
    e, pi, _ = quotient(tot, image_space(f), name="E")
    into = pi.compose(ds.injections[1])
    # E -> module: (x, y) -> cover(x)
    cover_from_sum = pres.cover.compose(ds.projections[0])
    flat = la.matmul(cover_from_sum.flat, _section(pi), p)
    out = RepMorphism.from_flat(e, pres.module, flat, check=True)
    return e, into, out


def _section(pi: RepMorphism) -> np.ndarray:
    """A linear right inverse of a surjective morphism (flat)."""
    x = la.solve(pi.flat, la.identity(pi.target.dim), pi.p)
    if x is None:
        raise ValueError("morphism is not surjective")
    return x


def trace_space(family: Sequence[Representation], m: Representation) -> Subspace:
    rows = []
    for x in family:
        for f in hom_space(x, m).basis:
            rows.append(f.flat.T)
    if not rows:
        return Subspace.zero(m.dim, m.p)
    return Subspace(np.vstack(rows), m.dim, m.p)


def reject_space(family: Sequence[Representation], m: Representation) -> Subspace:
    mats = []
    for x in family:
        for f in hom_space(m, x).basis:
            mats.append(f.flat)
    if not mats:
        return Subspace.full(m.dim, m.p)
    return la.kernel_basis(np.vstack(mats), m.p)


def trace_and_reject(family: Sequence[Representation], m: Representation) -> tuple[Subspace, Subspace]:
    return trace_space(family, m), reject_space(family, m)


# ---------------------------------------------------------------- duality


def injective_sum(alg: PathAlgebra, socles: Sequence[int], name: Optional[str] = None) -> tuple[Representation, dict]:
    """``D(A e_i)`` summed over ``socles``; basis at vertex ``v`` is dual to the paths ``v -> i``.

    Returns the module and the position map ``(k, path) -> flat index``.
    """
    q = alg.quiver
    pos = {}
    dims = []
    flat = 0
    for v in range(q.n_vertices):
        count = 0
        for k, i in enumerate(socles):
            for u in alg.paths_between(v, i):
                pos[(k, u)] = flat
                flat += 1
                count += 1
        dims.append(count)
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    maps = []
    for a in range(q.n_arrows):
        s, t = q.source[a], q.target[a]
        block = la.zeros(dims[t], dims[s])
        av = alg.basis_vector(alg.arrow(a))
        for k, i in enumerate(socles):
            # (xi . a)(y) = xi(a y) for y a path t -> i
            for y in alg.paths_between(t, i):
                prod = alg.product(av, alg.basis_vector(y))
                for u in alg.paths_between(s, i):
                    if prod[u]:
                        block[pos[(k, y)] - offs[t], pos[(k, u)] - offs[s]] = prod[u]
        maps.append(block)
    return Representation(alg, dims, maps, name=name, check=False), pos


def nakayama_map(f: RepMorphism) -> RepMorphism:
    """``nu f`` for a map of projective sums, ``nu = D Hom(-, A)``."""
    alg = f.source.algebra
    p = alg.p
    elems = projective_map_elements(f)
    src_tops, tgt_tops = f.source.projective_tops, f.target.projective_tops
    nsrc, spos = injective_sum(alg, src_tops)
    ntgt, tpos = injective_sum(alg, tgt_tops)
    flat = la.zeros(ntgt.dim, nsrc.dim)
    # xi in D(e_v A e_j) goes to z -> xi(z x) on e_v A e_i, for x = elems[k][l]
    for k, i in enumerate(tgt_tops):
        for l, j in enumerate(src_tops):
            x = elems[k][l]
            if not x.any():
                continue
            for v in range(alg.quiver.n_vertices):
                for z in alg.paths_between(v, i):
                    prod = alg.product(alg.basis_vector(z), x)
                    for u in alg.paths_between(v, j):
                        if prod[u]:
                            flat[tpos[(k, z)], spos[(l, u)]] = (flat[tpos[(k, z)], spos[(l, u)]] + prod[u]) % p
    return RepMorphism.from_flat(nsrc, ntgt, flat, check=True)


def ar_translate(m: Representation, presentation: Optional[ProjPresentation] = None) -> Representation:
    """``tau m = ker(nu f)`` for the minimal presentation ``f: P1 -> P0`` of ``m``.

    Projective summands of ``m`` contribute nothing, since their part of a
    minimal presentation is ``0 -> P``.
    """
    pres = presentation or min_presentation(m)
    if pres.r1.dim == 0:
        return zero_module(m.algebra)
    tau, _ = kernel(nakayama_map(pres.f))
    tau.name = "tau"
    return tau


# ---------------------------------------------------------------- ideals


def module_times_ideal(m: Representation, ideal: Ideal) -> Subspace:
    if ideal.dim == 0 or m.dim == 0:
        return Subspace.zero(m.dim, m.p)
    eye = la.identity(m.dim)
    rows = [la.matmul(eye, m.action_matrix(x).T, m.p) for x in ideal.space.basis]
    return Subspace(np.vstack(rows), m.dim, m.p)


def killed_by_ideal_power(m: Representation, ideal: Ideal) -> Optional[int]:
    """Smallest ``k >= 1`` with ``m * ideal^k = 0``; ``None`` if no power does."""
    if m.dim == 0:
        return 1
    for k, term in enumerate(ideal_power_chain(ideal), start=1):
        if module_times_ideal(m, term).dim == 0:
            return k
    return None


def is_projective_module(m: Representation) -> bool:
    pres = min_presentation(m)
    return pres.syzygy.dim == 0
