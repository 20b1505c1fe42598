"""The heart of the torsion pair ``(Gen V, Y)`` as two-term complexes.

A complex ``c1 --d--> c0`` sits in degrees -1 and 0.  It lies in the heart
when ``ker d`` receives no nonzero map from ``V`` and ``coker d`` is a
quotient of a sum of copies of ``V``.  Morphisms out of a complex with
projective terms are chain maps up to homotopy; general morphisms are
carried as a diagram through an extension module ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .exactla import DTYPE, Echelon, Subspace
from .quivalg import Ideal, annihilator
from .repkit import (
    HomSpace,
    ProjPresentation,
    Representation,
    RepMorphism,
    cokernel,
    direct_sum,
    hom_space,
    identity,
    image_space,
    kernel,
    killed_by_ideal_power,
    min_presentation,
    module_times_ideal,
    projective_cover,
    quotient,
    regular_module,
    submodule,
    submodule_lattice,
    trace_space,
    zero_module,
    zero_morphism,
)
from .repkit.module import factor_through_mono, projective_sum
from .tiltcheck import Faithfulness, Status, TorsionCertificate


class UncertifiedTorsion(ValueError):
    pass


class GeneratorVerificationError(RuntimeError):
    def __init__(self, certificate: str, detail: str = ""):
        self.certificate = certificate
        super().__init__(f"generator verification failed: {certificate}" + (f" ({detail})" if detail else ""))


@dataclass
class TwoTermComplex:
    c1: Representation
    c0: Representation
    d: RepMorphism
    name: Optional[str] = None

    def __post_init__(self):
        if self.d.source is not self.c1 or self.d.target is not self.c0:
            if not (self.d.source.same_as(self.c1) and self.d.target.same_as(self.c0)):
                raise ValueError("differential does not go from c1 to c0")

    @property
    def algebra(self):
        return self.c1.algebra

    @property
    def p(self) -> int:
        return self.c1.p

    @property
    def has_projective_terms(self) -> bool:
        return self.c1.projective_tops is not None and self.c0.projective_tops is not None

    def dim_vectors(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.c1.dims, self.c0.dims

    def __repr__(self) -> str:
        return f"<TwoTermComplex {self.c1.dims} -> {self.c0.dims}>"


def stalk0(x: Representation) -> TwoTermComplex:
    """``0 -> x`` (x in degree 0)."""
    z = zero_module(x.algebra)
    return TwoTermComplex(z, x, zero_morphism(z, x))


def stalk1(y: Representation) -> TwoTermComplex:
    """``y -> 0`` (y in degree -1), i.e. ``y[1]``."""
    z = zero_module(y.algebra)
    return TwoTermComplex(y, z, zero_morphism(y, z))


def complex_from_presentation(pres: ProjPresentation) -> TwoTermComplex:
    return TwoTermComplex(pres.r1, pres.r0, pres.f)


def cohomology(c: TwoTermComplex):
    """``((H^-1, inclusion), (H^0, projection))``."""
    return kernel(c.d), cokernel(c.d)


class Torsion:
    """The torsion pair ``(Gen V, Y)``; the torsion part of ``N`` is the trace of ``V`` in ``N``."""

    def __init__(self, v: Representation, certificate: TorsionCertificate):
        self.v = v
        self.certificate = certificate

    def require(self) -> None:
        if self.certificate.status is not Status.CERTIFIED:
            raise UncertifiedTorsion(f"torsion class certificate is {self.certificate.status.value}")

    def torsion_part(self, n: Representation) -> Subspace:
        return trace_space([self.v], n)

    def is_torsion(self, n: Representation) -> bool:
        return self.torsion_part(n).dim == n.dim

    def is_torsion_free(self, n: Representation) -> bool:
        return self.torsion_part(n).dim == 0

    @cached_property
    def annihilator(self) -> Ideal:
        return annihilator(self.v.algebra, self.v)


def heart_membership(c: TwoTermComplex, torsion: Torsion) -> bool:
    torsion.require()
    (h1, _), (h0, _) = cohomology(c)
    return torsion.is_torsion_free(h1) and torsion.is_torsion(h0)


class HeartFunctors:
    """``H, H'`` from the heart to modules and ``T, T'`` from modules to the heart."""

    def __init__(self, torsion: Torsion):
        torsion.require()
        self.torsion = torsion

    def H(self, c: TwoTermComplex) -> Representation:
        return kernel(c.d)[0]

    def H_prime(self, c: TwoTermComplex) -> Representation:
        return cokernel(c.d)[0]

    def T(self, n: Representation) -> TwoTermComplex:
        free, _, _ = quotient(n, self.torsion.torsion_part(n))
        return stalk1(free)

    def T_prime(self, n: Representation) -> TwoTermComplex:
        tors, _ = submodule(n, self.torsion.torsion_part(n))
        return stalk0(tors)


# ---------------------------------------------------------------- chain maps


@dataclass
class ChainMap:
    source: TwoTermComplex
    target: TwoTermComplex
    phi1: RepMorphism
    phi0: RepMorphism

    def is_chain_map(self) -> bool:
        lhs = self.target.d.compose(self.phi1)
        rhs = self.phi0.compose(self.source.d)
        return np.array_equal(lhs.flat, rhs.flat)

    def compose(self, first: "ChainMap") -> "ChainMap":
        return ChainMap(first.source, self.target, self.phi1.compose(first.phi1), self.phi0.compose(first.phi0))

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, self.phi1 + other.phi1, self.phi0 + other.phi0)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, self.phi1.scale(c), self.phi0.scale(c))

    @property
    def flat(self) -> np.ndarray:
        """Block-diagonal matrix on ``c1 + c0`` (flat spaces stacked)."""
        s, t = self.source, self.target
        out = la.zeros(t.c1.dim + t.c0.dim, s.c1.dim + s.c0.dim)
        out[: t.c1.dim, : s.c1.dim] = self.phi1.flat
        out[t.c1.dim :, s.c1.dim :] = self.phi0.flat
        return out

    @classmethod
    def from_flat(cls, source: TwoTermComplex, target: TwoTermComplex, flat) -> "ChainMap":
        a1, b1 = target.c1.dim, source.c1.dim
        phi1 = RepMorphism.from_flat(source.c1, target.c1, flat[:a1, :b1], check=False)
        phi0 = RepMorphism.from_flat(source.c0, target.c0, flat[a1:, b1:], check=False)
        return cls(source, target, phi1, phi0)


def identity_chain_map(c: TwoTermComplex) -> ChainMap:
    return ChainMap(c, c, identity(c.c1), identity(c.c0))


def zero_chain_map(s: TwoTermComplex, t: TwoTermComplex) -> ChainMap:
    return ChainMap(s, t, zero_morphism(s.c1, t.c1), zero_morphism(s.c0, t.c0))


class ChainMapSpace:
    """All chain maps ``source -> target`` in coordinates of ``Hom(c1,c1') + Hom(c0,c0')``."""

    def __init__(self, source: TwoTermComplex, target: TwoTermComplex):
        self.source = source
        self.target = target
        p = source.p
        self.h1 = hom_space(source.c1, target.c1)
        self.h0 = hom_space(source.c0, target.c0)
        n1, n0 = self.h1.dim, self.h0.dim
        cols = []
        for f in self.h1.basis:
            cols.append(target.d.compose(f).vector())
        for g in self.h0.basis:
            cols.append((-g.compose(source.d).vector()) % p)
        if cols and cols[0].size:
            self.cycles = la.kernel_basis(np.array(cols).T, p)
        else:
            self.cycles = Subspace.full(n1 + n0, p)

    @property
    def dim(self) -> int:
        return self.cycles.dim

    def element(self, coords) -> ChainMap:
        coords = np.asarray(coords, dtype=DTYPE).reshape(-1)
        n1 = self.h1.dim
        return ChainMap(self.source, self.target, self.h1.combination(coords[:n1]), self.h0.combination(coords[n1:]))

    @cached_property
    def basis(self) -> tuple[ChainMap, ...]:
        return tuple(self.element(r) for r in self.cycles.basis)

    def coordinates(self, f: ChainMap) -> np.ndarray:
        return np.concatenate([self.h1.coordinates(f.phi1), self.h0.coordinates(f.phi0)])


class HomotopyHom:
    """``Hom_K(source, target)``: chain maps modulo null-homotopic ones.

    ``representatives`` are chain maps whose classes form a basis; the
    identity comes first when source and target coincide.
    """

    def __init__(self, source: TwoTermComplex, target: TwoTermComplex):
        if not source.has_projective_terms:
            raise ValueError("source complex must have projective terms")
        self.source = source
        self.target = target
        p = source.p
        self.chains = ChainMapSpace(source, target)
        n = self.chains.h1.dim + self.chains.h0.dim
        # null-homotopies s: source.c0 -> target.c1 give (s o d, d' o s)
        hs = hom_space(source.c0, target.c1)
        self._boundary = Echelon(n, p)
        for s in hs.basis:
            null = ChainMap(source, target, s.compose(source.d), target.d.compose(s))
            self._boundary.add(self.chains.coordinates(null))
        self.boundaries = self._boundary.subspace()
        ech = Echelon(n, p)
        for row in self.boundaries.basis:
            ech.add(row)
        reps: list[np.ndarray] = []
        candidates = list(self.chains.cycles.basis)
        if source is target:
            candidates.insert(0, self.chains.coordinates(identity_chain_map(source)))
        for c in candidates:
            if ech.add(c):
                reps.append(np.asarray(c, dtype=DTYPE) % p)
        self._reps = reps
        self._solver = np.vstack(reps + [self.boundaries.basis]) if reps else None

    @property
    def dim(self) -> int:
        return len(self._reps)

    @cached_property
    def representatives(self) -> tuple[ChainMap, ...]:
        return tuple(self.chains.element(r) for r in self._reps)

    def class_coordinates(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the homotopy class of ``f`` in the representative basis."""
        if self.dim == 0:
            return np.zeros(0, dtype=DTYPE)
        v = self.chains.coordinates(f)
        x = la.solve(self._solver.T, v.reshape(-1, 1), self.source.p)
        if x is None:
            raise ValueError("not a chain map between these complexes")
        return x.reshape(-1)[: self.dim]

    def is_null(self, f: ChainMap) -> bool:
        return self.boundaries.contains(self.chains.coordinates(f))


def chain_hom_mod_homotopy(p: TwoTermComplex, m: TwoTermComplex) -> HomotopyHom:
    return HomotopyHom(p, m)


# ---------------------------------------------------------------- morphisms in the heart


@dataclass
class NoohiMorphism:
    """Heart morphism ``source -> target`` through ``0 -> target.c1 -> e -> source.c0 -> 0``."""

    source: TwoTermComplex
    target: TwoTermComplex
    e: Representation
    k: RepMorphism  # source.c1 -> e
    iota: RepMorphism  # target.c1 -> e
    sigma: RepMorphism  # e -> source.c0
    rho: RepMorphism  # e -> target.c0

    def check(self) -> bool:
        z = lambda f: f.is_zero()
        exact = (
            self.iota.rank() == self.target.c1.dim
            and self.sigma.rank() == self.source.c0.dim
            and image_space(self.iota) == la.kernel_basis(self.sigma.flat, self.e.p)
        )
        return (
            exact
            and np.array_equal(self.sigma.compose(self.k).flat, self.source.d.flat)
            and np.array_equal(self.rho.compose(self.iota).flat, self.target.d.flat)
            and z(self.rho.compose(self.k))
            and z(self.sigma.compose(self.iota))
        )


def noohi_from_chain_map(phi: ChainMap) -> NoohiMorphism:
    """``e = target.c1 + source.c0``, ``k = (-phi1, d)``, ``rho = (d', phi0)``."""
    s, t = phi.source, phi.target
    ds = direct_sum([t.c1, s.c0], algebra=s.algebra)
    e = ds.module
    iota = ds.injections[0]
    sigma = ds.projections[1]
    k = ds.injections[1].compose(s.d) - ds.injections[0].compose(phi.phi1)
    rho = t.d.compose(ds.projections[0]) + phi.phi0.compose(ds.projections[1])
    out = NoohiMorphism(s, t, e, k, iota, sigma, rho)
    if not out.check():
        raise AssertionError("Noohi datum violates its defining identities")
    return out


def noohi_kernel_cokernel(mu: NoohiMorphism, torsion: Torsion) -> tuple[TwoTermComplex, TwoTermComplex]:
    """Kernel ``source.c1 -> A`` and cokernel ``e/A -> target.c0``.

    ``A`` sits between ``im k`` and ``ker rho`` with ``A / im k`` the torsion
    part of ``ker rho / im k``.
    """
    torsion.require()
    p = mu.e.p
    ker_rho = la.kernel_basis(mu.rho.flat, p)
    im_k = image_space(mu.k)
    if not ker_rho.contains_space(im_k):
        raise AssertionError("rho o k is not zero")
    kr, kr_inc = submodule(mu.e, ker_rho)
    im_in_kr = Subspace(_coords_in(kr_inc, im_k.basis) if im_k.dim else la.zeros(0, kr.dim), kr.dim, p)
    q, q_pi, q_sec = quotient(kr, im_in_kr)
    tors = torsion.torsion_part(q)
    # preimage of the torsion part in ker rho, then pushed into e
    pre_rows = [im_in_kr.basis] if im_in_kr.dim else []
    if tors.dim:
        pre_rows.append(la.matmul(tors.basis, q_sec.T, p))
    pre = Subspace(np.vstack(pre_rows), kr.dim, p) if pre_rows else Subspace.zero(kr.dim, p)
    a_space = Subspace(la.matmul(pre.basis, kr_inc.flat.T, p), mu.e.dim, p) if pre.dim else Subspace.zero(mu.e.dim, p)
    a_mod, a_inc = submodule(mu.e, a_space)
    k_into_a = factor_through_mono(mu.k, a_inc)
    ker_cx = TwoTermComplex(mu.source.c1, a_mod, k_into_a, name="kernel")
    ea, ea_pi, ea_sec = quotient(mu.e, a_space)
    rho_bar = RepMorphism.from_flat(ea, mu.target.c0, la.matmul(mu.rho.flat, ea_sec, p), check=True)
    coker_cx = TwoTermComplex(ea, mu.target.c0, rho_bar, name="cokernel")
    return ker_cx, coker_cx


def _coords_in(inc: RepMorphism, rows: np.ndarray) -> np.ndarray:
    """Coordinates, in the source of a mono ``inc``, of ambient row vectors in its image."""
    x = la.solve(inc.flat, rows.T, inc.p)
    if x is None:
        raise ValueError("vectors outside the image")
    return x.T


def euler_characteristic(c: TwoTermComplex) -> tuple[int, ...]:
    """Per vertex ``dim H^0 - dim H^-1`` (equals ``dim c0 - dim c1``)."""
    (h1, _), (h0, _) = cohomology(c)
    return tuple(a - b for a, b in zip(h0.dims, h1.dims))


# ---------------------------------------------------------------- projectivity and generation


@dataclass
class ProjectivityResult:
    projective: bool
    witness: Optional[RepMorphism] = None  # a map c1 -> V not of the form psi o d


def is_projective_in_heart(c: TwoTermComplex, v: Representation) -> ProjectivityResult:
    """Every map ``c1 -> V`` factors as ``psi o d`` with ``psi: c0 -> V``."""
    p = v.p
    h1 = hom_space(c.c1, v)
    if h1.dim == 0:
        return ProjectivityResult(True)
    h0 = hom_space(c.c0, v)
    ech = Echelon(h1.dim, p)
    for g in h0.basis:
        ech.add(h1.coordinates(g.compose(c.d)))
    for f in h1.basis:
        if ech.reduce(h1.coordinates(f)).any():
            return ProjectivityResult(False, f)
    return ProjectivityResult(True)


def is_projective_via_annihilator(c: TwoTermComplex, ann: Ideal) -> bool:
    """``ker d`` lies inside ``c1 * Ann V`` (``c1`` projective)."""
    if c.c1.projective_tops is None:
        raise ValueError("degree -1 term is not a constructed projective")
    return module_times_ideal(c.c1, ann).contains_space(la.kernel_basis(c.d.flat, c.p))


def filtered_by_gen_bar(v: Representation, m: Representation, ann: Optional[Ideal] = None) -> bool:
    """``m`` has a finite filtration with factors in Gen-bar V.

    Gen-bar V is the class of modules killed by ``Ann V``, so the filtered
    class is the modules killed by some power of ``Ann V``.
    """
    ann = ann if ann is not None else annihilator(v.algebra, v)
    return killed_by_ideal_power(m, ann) is not None


@dataclass
class RejectChain:
    terms: list[Subspace]  # Rej^0 = A, Rej^1, ..., up to the first repeat (excluded)
    stationary_index: int
    family_size: int

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]

    @property
    def stationary(self) -> Subspace:
        return self.terms[self.stationary_index]


def quotient_family(v: Representation, cap: int = 12) -> list[Representation]:
    """``V/K`` for every proper submodule ``K`` of ``V``."""
    out = []
    for k in submodule_lattice(v, cap=cap):
        if k.dim < v.dim:
            out.append(quotient(v, k)[0])
    return out


def reject_chain(v: Representation, cap: int = 12, family: Optional[Sequence[Representation]] = None) -> RejectChain:
    """Iterate ``Rej`` of the regular module with respect to all quotients of ``V``."""
    fam = list(family) if family is not None else quotient_family(v, cap)
    reg = regular_module(v.algebra)
    p = v.p
    terms = [Subspace.full(reg.dim, p)]
    current, inc = reg, None
    while True:
        rej = _reject_in(fam, current)
        # rej is a subspace of the current term; push it into the regular module
        if inc is None:
            ambient = rej
        else:
            ambient = Subspace(la.matmul(rej.basis, inc.flat.T, p), reg.dim, p) if rej.dim else Subspace.zero(reg.dim, p)
        if ambient == terms[-1]:
            return RejectChain(terms, len(terms) - 1, len(fam))
        terms.append(ambient)
        current, inc = submodule(reg, ambient)


def _reject_in(family: Sequence[Representation], m: Representation) -> Subspace:
    if m.dim == 0:
        return Subspace.zero(0, m.p)
    # rows of all maps m -> w span the annihilator of the reject
    ech = Echelon(m.dim, m.p)
    for w in family:
        for f in hom_space(m, w).basis:
            for row in f.flat:
                ech.add(row)
        if len(ech) == m.dim:
            break
    if not len(ech):
        return Subspace.full(m.dim, m.p)
    return la.kernel_basis(ech.subspace().basis, m.p)


@dataclass
class GeneratorWitness:
    presentation: ProjPresentation
    r2: Representation
    xi: RepMorphism  # r2 -> stationary reject term
    stationary: Representation
    chain: RejectChain
    generator: TwoTermComplex
    exponent: int  # (Ann V)^exponent kills A / Rej^n
    checks: dict = field(default_factory=dict)


def build_generator(v: Representation, torsion: Torsion, chain: Optional[RejectChain] = None, cap: int = 12) -> GeneratorWitness:
    """The complex ``R1 + R2 --(f, 0)--> R0`` with ``R2`` a projective cover of the stationary reject term."""
    torsion.require()
    alg = v.algebra
    p = v.p
    pres = min_presentation(v)
    chain = chain or reject_chain(v, cap)
    reg = regular_module(alg)
    stat, stat_inc = submodule(reg, chain.stationary)
    r2, xi = projective_cover(stat)
    checks = {}
    if hom_space(r2, v).dim != 0:
        raise GeneratorVerificationError("Hom(R2, V) = 0")
    checks["hom_r2_v_zero"] = True
    ds = direct_sum([pres.r1, r2], algebra=alg)
    c1 = ds.module
    d = pres.f.compose(ds.projections[0])
    gen = TwoTermComplex(c1, pres.r0, d, name="generator")
    if not heart_membership(gen, torsion):
        raise GeneratorVerificationError("generator lies in the heart")
    checks["in_heart"] = True
    pr = is_projective_in_heart(gen, v)
    if not pr.projective:
        raise GeneratorVerificationError("projective in the heart", "a map R1 -> V does not extend")
    if not is_projective_via_annihilator(gen, torsion.annihilator):
        raise GeneratorVerificationError("projective in the heart (annihilator form)")
    checks["projective"] = True
    top, _, _ = quotient(reg, chain.stationary)
    k = killed_by_ideal_power(top, torsion.annihilator)
    if k is None:
        raise GeneratorVerificationError("A / Rej^n killed by a power of Ann V")
    checks["annihilator_power"] = k
    return GeneratorWitness(pres, r2, xi, stat, chain, gen, k, checks)
