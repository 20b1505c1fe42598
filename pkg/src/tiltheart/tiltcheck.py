"""Torsion-class, faithfulness and tilting certificates for a module ``V``.

``Gen V`` is certified to be a torsion class when ``Hom(V, tau V) = 0``
(``V`` is tau-rigid, so ``Gen V`` is closed under extensions).  A
refutation is only reported with a concrete extension ``0 -> X -> E -> Y -> 0``
of members of ``Gen V`` whose middle term leaves ``Gen V``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .exactla import DTYPE
from .quivalg import FinDimAlgebra, Ideal, PathAlgebra, annihilator, quotient_algebra
from .repkit import (
    Representation,
    RepMorphism,
    ar_translate,
    decompose,
    direct_sum,
    ext1,
    extension_module,
    hom_space,
    image_space,
    is_isomorphic,
    kernel,
    module_times_ideal,
    projective_sum,
    quotient,
    regular_module,
    top_multiplicities,
    trace_space,
    zero_morphism,
)
from .repkit.homological import radical_space
from .repkit.module import from_generators


class Status(str, enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass
class ExtensionWitness:
    left: Representation  # X, the submodule
    right: Representation  # Y, the quotient
    middle: Representation  # E
    trace_dim: int  # dimension of the trace of V in E (< dim E)


@dataclass
class TorsionCertificate:
    status: Status
    tau: Representation
    rigidity_witness: Optional[RepMorphism] = None  # nonzero map V -> tau V
    counterexample: Optional[ExtensionWitness] = None
    note: str = ""


def in_gen(v: Representation, m: Representation) -> bool:
    return trace_space([v], m).dim == m.dim


def torsion_class_certificate(v: Representation, search_extensions: bool = True) -> TorsionCertificate:
    tau = ar_translate(v)
    hs = hom_space(v, tau)
    if hs.dim == 0:
        return TorsionCertificate(Status.CERTIFIED, tau, note="Hom(V, tau V) = 0")
    witness = hs.basis[0]
    if search_extensions:
        ce = find_extension_counterexample(v)
        if ce is not None:
            return TorsionCertificate(
                Status.REFUTED, tau, witness, ce, note="extension of members of Gen V leaves Gen V"
            )
    return TorsionCertificate(
        Status.UNKNOWN, tau, witness, None, note="V is not tau-rigid and no extension counterexample was found"
    )


def find_extension_counterexample(v: Representation) -> Optional[ExtensionWitness]:
    """Search extensions between indecomposable summands of ``V`` (and ``V`` itself)."""
    parts = [s.module for s in decompose(v).summands]
    candidates = parts + ([v] if len(parts) > 1 else [])
    for y in candidates:
        for x in candidates:
            res = ext1(y, x)
            for theta in res.cocycles:
                e, _, _ = extension_module(res.presentation, x, theta)
                t = trace_space([v], e).dim
                if t < e.dim:
                    return ExtensionWitness(x, y, e, t)
    return None


@dataclass
class Faithfulness:
    status: Status
    faithful: Optional[bool]
    witness: Optional[RepMorphism] = None  # nonzero map V -> A


def faithfulness(v: Representation, certificate: Optional[TorsionCertificate] = None) -> Faithfulness:
    """``A`` is torsion-free iff ``Hom(V, A) = 0``; needs a certified torsion class."""
    if certificate is not None and certificate.status is not Status.CERTIFIED:
        return Faithfulness(Status.UNKNOWN, None)
    hs = hom_space(v, regular_module(v.algebra))
    if hs.dim == 0:
        return Faithfulness(Status.CERTIFIED, True)
    return Faithfulness(Status.CERTIFIED, False, hs.basis[0])


# ---------------------------------------------------------------- modules over A / Ann V


class RelativeModules:
    """Projective modules over ``A / I`` realised as ``A``-modules ``P(i) / P(i) I``."""

    def __init__(self, algebra: PathAlgebra, ideal: Ideal):
        self.algebra = algebra
        self.ideal = ideal

    def cover(self, m: Representation):
        """Projective cover over ``A / I`` of a module killed by ``I``: ``(Q, Q -> m)``."""
        if module_times_ideal(m, self.ideal).dim:
            raise ValueError("module is not annihilated by the ideal")
        rad = radical_space(m)
        tops, images = [], []
        for i in range(len(m.dims)):
            local = la.Subspace(rad.basis[:, m.vertex_slice(i)], m.dims[i], m.p)
            for c in local.complement():
                w = np.zeros(m.dim, dtype=DTYPE)
                w[m.vertex_slice(i)] = c
                tops.append(i)
                images.append(w)
        p = projective_sum(self.algebra, tops)
        pi = from_generators(p, m, images)
        q, qpi, section = quotient(p, module_times_ideal(p, self.ideal))
        flat = la.matmul(pi.flat, section, m.p)
        return q, RepMorphism.from_flat(q, m, flat, check=True)

    def is_projective(self, m: Representation) -> bool:
        q, _ = self.cover(m)
        return q.dim == m.dim


@dataclass
class TiltingReport:
    over_quotient: FinDimAlgebra
    pd_le_1: bool
    ext_vanishes: bool
    summand_count: int
    simple_count: int
    verdict: Optional[bool]  # None when a non-split summand blocks the count
    syzygy: Optional[Representation] = None
    coresolution_ok: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    def failing_conditions(self) -> list[str]:
        out = []
        if not self.pd_le_1:
            out.append("projective dimension over A/Ann V exceeds 1")
        if not self.ext_vanishes:
            out.append("Ext^1 over A/Ann V of V with itself is nonzero")
        if self.summand_count != self.simple_count:
            out.append(
                f"{self.summand_count} isoclasses of indecomposable summands but {self.simple_count} simples over A/Ann V"
            )
        return out


def tilting_over_annihilator(v: Representation, check_coresolution: bool = False) -> TiltingReport:
    alg = v.algebra
    ann = annihilator(alg, v)
    rv = quotient_algebra(alg, ann)
    rel = RelativeModules(alg, ann)
    q0, pi = rel.cover(v)
    k, inc = kernel(pi)
    pd_ok = rel.is_projective(k)
    # Ext^1 over A/Ann V: coker(Hom(Q0, V) -> Hom(K, V))
    hk = hom_space(k, v)
    h0 = hom_space(q0, v)
    restricted = [hk.coordinates(g.compose(inc)) for g in h0.basis]
    r = la.rank(np.array(restricted), v.p) if restricted and hk.dim else 0
    ext_ok = hk.dim - r == 0
    dec = decompose(v)
    summands = len(dec.groups)
    simples = sum(1 for d in v.dims if d > 0)
    verdict: Optional[bool] = pd_ok and ext_ok and summands == simples
    notes = []
    if dec.nonsplit:
        verdict = None
        notes.append("non-split indecomposable summand; summand count not trusted")
    report = TiltingReport(rv, pd_ok, ext_ok, summands, simples, verdict, k, None, notes)
    if check_coresolution:
        report.coresolution_ok = coresolution_in_add(v)
    return report


def universal_map_from_regular(v: Representation) -> RepMorphism:
    """``A -> V^m`` whose components form a basis of ``Hom(A, V)`` (a left add V-approximation)."""
    a = regular_module(v.algebra)
    hs = hom_space(a, v)
    ds = direct_sum([v] * hs.dim, algebra=v.algebra)
    total = None
    for k, f in enumerate(hs.basis):
        g = ds.injections[k].compose(f)
        total = g if total is None else total + g
    if total is None:
        return zero_morphism(a, ds.module)
    return total


def completion(v: Representation) -> Representation:
    """``V + coker(A -> V^m)``: same ``Gen``, and tilting over ``A/Ann V`` when ``V`` is tau-rigid."""
    g = universal_map_from_regular(v)
    c, _, _ = quotient(g.target, image_space(g))
    if c.dim == 0:
        return v
    out = direct_sum([v, c]).module
    out.name = "completion"
    return out


def coresolution_in_add(v: Representation) -> bool:
    """Slow cross-check of the third tilting condition: ``coker(A/Ann V -> V^m)`` lies in add V."""
    alg = v.algebra
    ann = annihilator(alg, v)
    g = universal_map_from_regular(v)
    if module_times_ideal(g.target, ann).dim:
        raise AssertionError("V^m not annihilated by Ann V")
    c, _, _ = quotient(g.target, image_space(g))
    if c.dim == 0:
        return True
    parts = [s.module for s in decompose(v).summands]
    for s in decompose(c).summands:
        if not any(p.dims == s.module.dims and is_isomorphic(p, s.module).verdict for p in parts):
            return False
    return True


# ---------------------------------------------------------------- cross-checks


@dataclass
class MembershipRow:
    module: Representation
    in_gen: bool
    in_genbar: bool
    in_perp: bool

    @property
    def consistent(self) -> bool:
        return self.in_gen == (self.in_genbar and self.in_perp)


def quasi_tilting_crosscheck(v: Representation, testset: Sequence[Representation]) -> tuple[list[MembershipRow], list[MembershipRow]]:
    """Membership table for ``Gen V = Gen-bar V  cap  V-perp`` on a finite testset (partial check)."""
    ann = annihilator(v.algebra, v)
    rows = []
    for m in testset:
        rows.append(
            MembershipRow(
                m,
                in_gen(v, m),
                module_times_ideal(m, ann).dim == 0,
                ext1(v, m).dim == 0,
            )
        )
    return rows, [r for r in rows if not r.consistent]


class EmptySurvivors(ValueError):
    pass


def prune_ext_projectives(modules: Sequence[Representation]) -> tuple[Representation, list[int]]:
    """Delete, lowest index first, any ``X_i`` with ``Ext^1(X_j, X_i) != 0`` for a survivor ``X_j``.

    Returns the direct sum of the survivors and their input indices.
    """
    if not modules:
        raise EmptySurvivors("no input modules")
    alive = list(range(len(modules)))
    cache: dict[tuple[int, int], int] = {}

    def ext_dim(j: int, i: int) -> int:
        if (j, i) not in cache:
            cache[(j, i)] = ext1(modules[j], modules[i]).dim
        return cache[(j, i)]

    while True:
        victim = next((i for i in alive if any(ext_dim(j, i) for j in alive)), None)
        if victim is None:
            break
        alive.remove(victim)
        if not alive:
            raise EmptySurvivors("every module was deleted")
    return direct_sum([modules[i] for i in alive]).module, alive
