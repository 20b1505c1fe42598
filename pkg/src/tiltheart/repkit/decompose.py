"""Krull-Schmidt decomposition by Fitting splitting, and isomorphism tests.

The splitting engine works on anything that exposes a flat underlying
space, a basis of its endomorphism algebra as flat matrices, and a way to
restrict to an invariant subspace.  Modules and two-term complexes both
use it.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .. import exactla as la
from ..exactla import DTYPE, Subspace
from .module import Representation, RepMorphism, hom_space, submodule

SEED = 20240917


class NonSplitWarning(UserWarning):
    pass


def _fitting_power(y: np.ndarray, p: int) -> np.ndarray:
    return la.matrix_power(y, y.shape[0], p)


def _is_nilpotent(y: np.ndarray, p: int) -> bool:
    return not _fitting_power(y, p).any()


def _splitting_power(x: np.ndarray, p: int) -> Optional[np.ndarray]:
    """``(x - c)^N`` of rank strictly between 0 and N for some scalar c, if any."""
    n = x.shape[0]
    eye = la.identity(n)
    for c in range(p):
        yn = _fitting_power((x - c * eye) % p, p)
        r = la.rank(yn, p)
        if 0 < r < n:
            return yn
    return None


def local_certificate(basis: Sequence[np.ndarray], p: int) -> bool:
    """True when the span of ``basis`` is ``F_p * 1 + N`` with ``N`` a nilpotent ideal."""
    if not basis:
        return False
    n = basis[0].shape[0]
    eye = la.identity(n)
    shifted = []
    for x in basis:
        for c in range(p):
            y = (x - c * eye) % p
            if _is_nilpotent(y, p):
                shifted.append(y)
                break
        else:
            return False
    vecs = [y.reshape(-1) for y in shifted]
    nil = Subspace(np.array(vecs), n * n, p)
    if nil.dim != len(basis) - 1:
        return False
    for y, z in itertools.product(nil.basis, repeat=2):
        prod = la.matmul(y.reshape(n, n), z.reshape(n, n), p)
        if not nil.contains(prod.reshape(-1)):
            return False
    return True


@dataclass
class Leaf:
    node: object
    inclusion: np.ndarray  # ambient x leaf
    projection: np.ndarray  # leaf x ambient
    certified: bool


def split(node, p: int, rng: Optional[np.random.Generator] = None, tries: int = 64) -> list[Leaf]:
    """Recursively split ``node`` into pieces with local endomorphism algebra."""
    rng = rng if rng is not None else np.random.default_rng(SEED)
    n = node.dim
    if n == 0:
        return []
    basis = node.end_basis()
    yn = None
    for x in basis:
        yn = _splitting_power(x, p)
        if yn is not None:
            break
    certified = False
    if yn is None:
        certified = local_certificate(basis, p)
        if not certified:
            for _ in range(tries):
                coeffs = rng.integers(0, p, size=len(basis))
                x = sum((int(c) * b for c, b in zip(coeffs, basis)), la.zeros(n, n)) % p
                yn = _splitting_power(x, p)
                if yn is not None:
                    break
    if yn is None:
        ident = la.identity(n)
        return [Leaf(node, ident, ident, certified)]
    ker = la.kernel_basis(yn, p)
    img = Subspace(yn.T, n, p)
    kn, kinc = node.restrict(ker)
    inn, iinc = node.restrict(img)
    t = np.hstack([kinc, iinc])
    tinv = la.inverse(t, p)
    kproj, iproj = tinv[: kinc.shape[1]], tinv[kinc.shape[1] :]
    leaves = []
    for child, inc, proj in ((kn, kinc, kproj), (inn, iinc, iproj)):
        for leaf in split(child, p, rng, tries):
            leaves.append(
                Leaf(leaf.node, la.matmul(inc, leaf.inclusion, p), la.matmul(leaf.projection, proj, p), leaf.certified)
            )
    return leaves


def local_iso_witness(
    a, b, homs: Callable[[object, object], list[np.ndarray]], p: int
) -> Optional[np.ndarray]:
    """For objects with local endomorphism rings: an isomorphism ``a -> b`` or None.

    ``a ~ b`` iff some ``g o f`` with ``f: a -> b``, ``g: b -> a`` basis maps is
    not nilpotent; then ``f`` is invertible.
    """
    if a.dim != b.dim:
        return None
    fs = homs(a, b)
    gs = homs(b, a)
    for f in fs:
        for g in gs:
            if not _is_nilpotent(la.matmul(g, f, p), p):
                return f
    return None


def group_isoclasses(nodes, homs, p: int, key=lambda n: n.dim) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, node in enumerate(nodes):
        for grp in groups:
            rep = nodes[grp[0]]
            if key(rep) == key(node) and local_iso_witness(rep, node, homs, p) is not None:
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


# ---------------------------------------------------------------- modules


class _ModuleNode:
    def __init__(self, m: Representation):
        self.module = m
        self.dim = m.dim

    def end_basis(self):
        return [f.flat for f in hom_space(self.module, self.module).basis]

    def restrict(self, space: Subspace):
        sub, inc = submodule(self.module, space)
        return _ModuleNode(sub), inc.flat


def _module_homs(a: _ModuleNode, b: _ModuleNode):
    return [f.flat for f in hom_space(a.module, b.module).basis]


@dataclass
class Summand:
    module: Representation
    inclusion: RepMorphism
    projection: RepMorphism
    certified: bool = True


@dataclass
class Decomposition:
    module: Representation
    summands: list[Summand]
    groups: list[list[int]]
    nonsplit: bool = False

    @property
    def multiplicities(self) -> list[tuple[Representation, int]]:
        return [(self.summands[g[0]].module, len(g)) for g in self.groups]

    def dims(self) -> list[int]:
        return sorted((s.module.dim for s in self.summands), reverse=True)


def decompose(m: Representation) -> Decomposition:
    p = m.p
    leaves = split(_ModuleNode(m), p)
    summands = []
    nonsplit = False
    for leaf in leaves:
        sub = leaf.node.module
        inc = RepMorphism.from_flat(sub, m, leaf.inclusion, check=False)
        proj = RepMorphism.from_flat(m, sub, leaf.projection, check=False)
        if not leaf.certified:
            nonsplit = True
        summands.append(Summand(sub, inc, proj, leaf.certified))
    if nonsplit:
        warnings.warn("indecomposable summand with non-split local endomorphism ring", NonSplitWarning)
    groups = group_isoclasses([leaf.node for leaf in leaves], _module_homs, p, key=lambda n: n.module.dims)
    return Decomposition(m, summands, groups, nonsplit)


@dataclass
class IsoResult:
    verdict: Optional[bool]  # None means inconclusive
    witness: Optional[RepMorphism] = None
    method: str = ""

    def __bool__(self) -> bool:
        return bool(self.verdict)


def is_isomorphic(m: Representation, n: Representation, exhaustive_cap: int = 2**10, tries: int = 32) -> IsoResult:
    if m.algebra is not n.algebra:
        raise ValueError("modules over different algebras")
    if m.dims != n.dims:
        return IsoResult(False, None, "dimension vector")
    p = m.p
    hs = hom_space(m, n)
    for f in hs.basis:
        if f.is_iso():
            return IsoResult(True, f, "basis")
    if p ** hs.dim <= exhaustive_cap:
        for coeffs in itertools.product(range(p), repeat=hs.dim):
            f = hs.combination(coeffs)
            if f.is_iso():
                return IsoResult(True, f, "exhaustive")
        return IsoResult(False, None, "exhaustive")
    rng = np.random.default_rng(SEED)
    for _ in range(tries):
        f = hs.combination(rng.integers(0, p, size=hs.dim))
        if f.is_iso():
            return IsoResult(True, f, "sampling")
    dm, dn = decompose(m), decompose(n)
    if dm.nonsplit or dn.nonsplit:
        return IsoResult(None, None, "decomposition (non-split summand)")
    unused = list(range(len(dn.summands)))
    pieces = []
    for sm in dm.summands:
        for k in unused:
            sn = dn.summands[k]
            if sm.module.dims != sn.module.dims:
                continue
            w = local_iso_witness(_ModuleNode(sm.module), _ModuleNode(sn.module), _module_homs, p)
            if w is not None:
                f = RepMorphism.from_flat(sm.module, sn.module, w, check=False)
                pieces.append(sn.inclusion.compose(f).compose(sm.projection))
                unused.remove(k)
                break
        else:
            return IsoResult(False, None, "decomposition")
    total = pieces[0]
    for f in pieces[1:]:
        total = total + f
    if not total.is_iso():
        raise AssertionError("matched decompositions did not assemble to an isomorphism")
    return IsoResult(True, total, "decomposition")
