"""End-to-end analysis: is the heart of ``(Gen V, Y)`` a module category, and over what?

The verdict is three-valued.  ``equivalent`` needs every certificate and
the generator verification to pass; ``not-equivalent`` needs a concrete
refutation on a well-posed (torsion, faithful) input; anything else is
``inconclusive`` with a reason.
"""

from __future__ import annotations

import enum
import hashlib
import json
import time
import warnings
from dataclasses import dataclass, field
from typing import Any, Optional

from .endalg import EndAlgebra, NotBasic, QuiverPresentation, decompose_complex, gabriel_quiver
from .fileformat import canonical_input
from .heartcore import (
    GeneratorVerificationError,
    GeneratorWitness,
    Torsion,
    build_generator,
    complex_from_presentation,
    heart_membership,
    is_projective_in_heart,
    reject_chain,
)
from .quivalg import PathAlgebra
from .repkit import LatticeCapExceeded, Representation, min_presentation
from .repkit.decompose import NonSplitWarning
from .tiltcheck import Status, completion, faithfulness, tilting_over_annihilator, torsion_class_certificate

SCHEMA = 1


class Verdict(str, enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {"equivalent": 0, "not-equivalent": 1, "inconclusive": 2}[self.value]


@dataclass
class Options:
    lattice_cap: int = 12  # enumerate submodules only when p**dim V <= 2**lattice_cap
    degree_cap: int = 4  # minimum path length searched for relations of Theta
    length_cap: int = 64
    check_coresolution: bool = True
    timings: bool = False


@dataclass
class AnalysisReport:
    digest: str
    p: int
    algebra_dim: int
    module_dims: tuple[int, ...]
    torsion_class: str = "unknown"
    faithful: str = "unknown"
    tilting: str = "unknown"
    verdict: Verdict = Verdict.INCONCLUSIVE
    reason: str = ""
    witness: Optional[dict] = None
    annihilator_dim: Optional[int] = None
    tilting_detail: Optional[dict] = None
    presentation: Optional[dict] = None
    reject_chain: Optional[dict] = None
    generator: Optional[dict] = None
    theta: Optional[dict] = None
    timings: dict = field(default_factory=dict)
    # live objects for library callers; not serialized
    generator_witness: Optional[GeneratorWitness] = field(default=None, repr=False)
    end_algebra: Optional[EndAlgebra] = field(default=None, repr=False)
    quiver_presentation: Optional[QuiverPresentation] = field(default=None, repr=False)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        out = {
            "schema": SCHEMA,
            "input_sha256": self.digest,
            "field": self.p,
            "algebra_dim": self.algebra_dim,
            "module_dims": list(self.module_dims),
            "certificates": {
                "torsion_class": self.torsion_class,
                "faithful": self.faithful,
                "tilting_over_quotient": self.tilting,
            },
            "annihilator_dim": self.annihilator_dim,
            "tilting": self.tilting_detail,
            "presentation": self.presentation,
            "reject_chain": self.reject_chain,
            "generator": self.generator,
            "theta": self.theta,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "witness": self.witness,
        }
        if timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=False) + "\n"


def _tops(m: Representation) -> list[int]:
    return [int(t) + 1 for t in m.projective_tops or ()]


def _tilting_dict(rep) -> dict:
    return {
        "pd_le_1": rep.pd_le_1,
        "ext_vanishes": rep.ext_vanishes,
        "summand_classes": rep.summand_count,
        "simples": rep.simple_count,
        "coresolution": rep.coresolution_ok,
        "failing": rep.failing_conditions(),
    }


def _matrix_list(a) -> list:
    return [[int(x) for x in row] for row in a]


def analyze(algebra: PathAlgebra, module: Representation, options: Optional[Options] = None) -> AnalysisReport:
    opts = options or Options()
    v = module
    report = AnalysisReport(
        hashlib.sha256(canonical_input(algebra, v).encode()).hexdigest(), algebra.p, algebra.dim, v.dims
    )
    clock = time.perf_counter()

    def lap(name: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        report.timings[name] = now - clock
        clock = now

    def stop(verdict: Verdict, reason: str, witness: Optional[dict] = None) -> AnalysisReport:
        report.verdict, report.reason, report.witness = verdict, reason, witness
        return report

    if v.dim == 0:
        return stop(Verdict.INCONCLUSIVE, "V is zero; Gen V is the zero class and the pair is not faithful")

    # torsion class
    cert = torsion_class_certificate(v)
    report.torsion_class = cert.status.value
    lap("torsion_certificate")
    if cert.status is Status.REFUTED:
        ce = cert.counterexample
        return stop(
            Verdict.INCONCLUSIVE,
            "ill-posed: Gen V is not a torsion class (not closed under extensions)",
            {
                "map_V_to_tauV": _matrix_list(cert.rigidity_witness.flat),
                "tau_dims": list(cert.tau.dims),
                "extension": {"left": list(ce.left.dims), "middle": list(ce.middle.dims), "right": list(ce.right.dims), "trace_dim": ce.trace_dim},
            },
        )
    if cert.status is Status.UNKNOWN:
        return stop(
            Verdict.INCONCLUSIVE,
            "V is not tau-rigid and no extension counterexample was found",
            {"map_V_to_tauV": _matrix_list(cert.rigidity_witness.flat), "tau_dims": list(cert.tau.dims)},
        )

    # faithfulness
    fa = faithfulness(v, cert)
    report.faithful = "certified" if fa.faithful else "refuted"
    lap("faithfulness")
    if not fa.faithful:
        return stop(
            Verdict.INCONCLUSIVE,
            "ill-posed: the torsion pair is not faithful (Hom(V, A) is nonzero)",
            {"map_V_to_A": _matrix_list(fa.witness.flat)},
        )

    # tilting over A / Ann V, retried on the completion before refuting
    tr = tilting_over_annihilator(v, check_coresolution=opts.check_coresolution)
    report.annihilator_dim = algebra.dim - tr.over_quotient.dim
    report.tilting_detail = _tilting_dict(tr)
    lap("tilting")
    if tr.verdict is None:
        report.tilting = "unknown"
        return stop(Verdict.INCONCLUSIVE, "; ".join(tr.notes) or "tilting test inconclusive")
    if not tr.verdict:
        vc = completion(v)
        trc = tilting_over_annihilator(vc, check_coresolution=opts.check_coresolution)
        report.tilting_detail["completion"] = {"dims": list(vc.dims), **_tilting_dict(trc)}
        if trc.verdict is None:
            report.tilting = "unknown"
            return stop(Verdict.INCONCLUSIVE, "; ".join(trc.notes) or "tilting test inconclusive")
        if not trc.verdict:
            report.tilting = "refuted"
            return stop(
                Verdict.NOT_EQUIVALENT,
                "no module with the same Gen is tilting over A/Ann V",
                {"failing": trc.failing_conditions(), "completion_dims": list(vc.dims)},
            )
    report.tilting = "certified"

    # presentation and heart-projectivity
    pres = min_presentation(v)
    report.presentation = {
        "R1": {"tops": _tops(pres.r1), "dim": pres.r1.dim},
        "R0": {"tops": _tops(pres.r0), "dim": pres.r0.dim},
        "omega_dims": list(pres.omega.dims),
        "omega_dim": pres.omega.dim,
    }
    torsion = Torsion(v, cert)
    pc = complex_from_presentation(pres)
    report.presentation["in_heart"] = heart_membership(pc, torsion)
    report.presentation["projective_in_heart"] = is_projective_in_heart(pc, v).projective
    lap("presentation")

    # reject chain and generator
    try:
        chain = reject_chain(v, cap=opts.lattice_cap)
    except LatticeCapExceeded as exc:
        return stop(Verdict.INCONCLUSIVE, f"lattice cap exceeded: {exc}")
    report.reject_chain = {"dims": chain.dims, "stationary_index": chain.stationary_index, "quotients": chain.family_size}
    lap("reject_chain")
    try:
        gw = build_generator(v, torsion, chain=chain)
    except GeneratorVerificationError as exc:
        return stop(Verdict.INCONCLUSIVE, f"generator verification failed: {exc}")
    report.generator_witness = gw
    lap("generator")

    with warnings.catch_warnings():
        warnings.simplefilter("error", NonSplitWarning)
        try:
            dec = decompose_complex(gw.generator)
        except NonSplitWarning as exc:
            return stop(Verdict.INCONCLUSIVE, f"generator decomposition: {exc}")
    basic = dec.basic_form()
    mult = {id(dec.summands[g[0]].complex): len(g) for g in dec.groups}
    report.generator = {
        "R2": {"tops": _tops(gw.r2), "dim": gw.r2.dim},
        "annihilator_exponent": gw.exponent,
        "checks": {k: v_ for k, v_ in gw.checks.items()},
        "terms": {"degree-1": list(gw.generator.c1.dims), "degree0": list(gw.generator.c0.dims)},
        "summands": [
            {
                "degree-1": list(c.c1.dims),
                "degree0": list(c.c0.dims),
                "degree-1_tops": _tops(c.c1),
                "degree0_tops": _tops(c.c0),
                "multiplicity": mult[id(c)],
            }
            for c in basic
        ],
        "contractible_summands": len(dec.contractible),
    }
    lap("decomposition")

    theta = EndAlgebra(basic)
    try:
        qp = gabriel_quiver(theta, degree_cap=opts.degree_cap)
    except NotBasic as exc:
        return stop(Verdict.INCONCLUSIVE, f"endomorphism algebra: {exc}")
    report.end_algebra, report.quiver_presentation = theta, qp
    report.theta = {
        "dim": theta.dim,
        "vertices": list(qp.quiver.vertices),
        "arrows": [list(a) for a in qp.quiver.arrows],
        "relations": list(qp.relations),
        "relation_degrees": [list(d) for d in qp.relation_degrees],
        "quadratic_relations": qp.quadratic_dim,
        "degree_cap": max(qp.degree_cap, qp.radical_power_zero),
        "radical_nilpotency": qp.radical_power_zero,
        "presented_dim": qp.presented_dim,
        "arrow_convention": "arrow i->j is a radical map from summand j to summand i",
    }
    lap("end_algebra")
    if qp.presented_dim != theta.dim:
        return stop(Verdict.INCONCLUSIVE, "relations found within the degree cap do not present Theta")
    return stop(Verdict.EQUIVALENT, "V is tilting over A/Ann V and the generator passed verification")
