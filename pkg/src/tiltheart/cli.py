"""Command line front end.

Exit codes: 0 equivalent (or success), 1 not-equivalent, 2 inconclusive,
3 input or computation error, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .endalg import EndAlgebra, basic_form, gabriel_quiver
from .fileformat import InputData, InputError, load, module_toml, quiver_toml
from .heartcore import (
    GeneratorVerificationError,
    HomotopyHom,
    Torsion,
    UncertifiedTorsion,
    build_generator,
    cohomology,
    noohi_from_chain_map,
    noohi_kernel_cokernel,
    stalk0,
)
from .pipeline import Options, analyze
from .quivalg import AdmissibilityError
from .repkit import LatticeCapExceeded, regular_module, submodule_lattice
from .tiltcheck import EmptySurvivors, prune_ext_projectives, torsion_class_certificate

EXIT_ERROR = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _need_module(data: InputData):
    if data.module is None:
        raise InputError("this command needs a [module] section")
    return data.module


def _torsion(data: InputData) -> Torsion:
    v = _need_module(data)
    return Torsion(v, torsion_class_certificate(v))


def cmd_validate(args, data: InputData) -> int:
    alg = data.algebra
    print(f"algebra: {alg.quiver.n_vertices} vertices, {alg.quiver.n_arrows} arrows, dim {alg.dim} over F_{alg.p}")
    if data.module is not None:
        print(f"module: dims {list(data.module.dims)} (dim {data.module.dim})")
    if data.modules:
        print(f"modules: {len(data.modules)}")
    if data.complexes:
        print(f"complexes: {', '.join(data.complexes)}")
    print(f"sha256: {data.digest}")
    return 0


def cmd_analyze(args, data: InputData) -> int:
    opts = Options(lattice_cap=args.lattice_cap, degree_cap=args.degree_cap, timings=args.timings)
    report = analyze(data.algebra, _need_module(data), opts)
    if args.json:
        sys.stdout.write(report.to_json(timings=args.timings))
    else:
        d = report.to_dict(timings=args.timings)
        print(f"verdict: {d['verdict']} ({d['reason']})")
        for k, v in d["certificates"].items():
            print(f"  {k}: {v}")
        if d["reject_chain"]:
            print(f"  reject chain dims: {d['reject_chain']['dims']}, stationary at {d['reject_chain']['stationary_index']}")
        if d["theta"]:
            t = d["theta"]
            print(f"  Theta: dim {t['dim']}, {len(t['vertices'])} vertices, {len(t['arrows'])} arrows, {len(t['relations'])} relations")
        if args.timings:
            for k, v in d["timings"].items():
                print(f"  time {k}: {v:.3f}s")
    return report.verdict.exit_code


def cmd_generator(args, data: InputData) -> int:
    torsion = _torsion(data)
    gw = build_generator(_need_module(data), torsion, cap=args.lattice_cap)
    g = gw.generator
    print(f"generator: degree -1 dims {list(g.c1.dims)}, degree 0 dims {list(g.c0.dims)}")
    print(f"  R1 tops {[t + 1 for t in gw.presentation.r1.projective_tops]}")
    print(f"  R2 tops {[t + 1 for t in gw.r2.projective_tops]}")
    print(f"  R0 tops {[t + 1 for t in gw.presentation.r0.projective_tops]}")
    print(f"  reject chain dims {gw.chain.dims}; Ann V power {gw.exponent} kills A/Rej")
    return 0


def cmd_end_algebra(args, data: InputData) -> int:
    if args.regular:
        basic = basic_form(stalk0(regular_module(data.algebra)))
        names = data.algebra.quiver.vertices
    else:
        torsion = _torsion(data)
        basic = basic_form(build_generator(_need_module(data), torsion, cap=args.lattice_cap).generator)
        names = None
    theta = EndAlgebra(basic)
    qp = gabriel_quiver(theta, degree_cap=args.degree_cap, names=names)
    sys.stdout.write(f"# dim {theta.dim}, presented dim {qp.presented_dim}\n")
    sys.stdout.write(quiver_toml(qp.quiver, qp.relations, theta.p))
    return 0 if qp.dimension_matches else 2


def _complex_pair(args, data: InputData):
    names = list(data.complexes)
    src = args.source or (names[0] if names else None)
    tgt = args.target or (names[1] if len(names) > 1 else src)
    try:
        return data.complexes[src], data.complexes[tgt]
    except KeyError:
        raise InputError(f"unknown complex; available: {names}") from None


def cmd_heart(args, data: InputData) -> int:
    if args.operation == "hom":
        s, t = _complex_pair(args, data)
        h = HomotopyHom(s, t)
        print(f"dim Hom({s.name or 'source'}, {t.name or 'target'}) = {h.dim}")
        return 0
    if data.morphism is None:
        raise InputError("heart kernel/cokernel needs a [morphism] section")
    torsion = _torsion(data)
    mu = noohi_from_chain_map(data.morphism)
    ker, coker = noohi_kernel_cokernel(mu, torsion)
    c = ker if args.operation == "kernel" else coker
    (h1, _), (h0, _) = cohomology(c)
    print(f"{args.operation}: degree -1 dims {list(c.c1.dims)}, degree 0 dims {list(c.c0.dims)}")
    print(f"  cohomology: H^-1 dims {list(h1.dims)}, H^0 dims {list(h0.dims)}")
    if h1.dim == 0 and h0.dim == 0:
        print("  zero object of the heart")
    return 0


def cmd_lattice(args, data: InputData) -> int:
    m = _need_module(data)
    subs = submodule_lattice(m, cap=args.lattice_cap)
    print(f"{len(subs)} submodules")
    for s in subs:
        print(f"  dim {s.dim}")
    return 0


def cmd_prune(args, data: InputData) -> int:
    mods = data.modules
    survivors, alive = prune_ext_projectives(mods)
    text = quiver_toml(data.algebra.quiver, list(data.algebra.relation_text), data.algebra.p)
    for i in alive:
        text += "\n" + module_toml(mods[i], header="[[modules]]")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"survivors: {[mods[i].name for i in alive]} -> {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tiltheart", description="Module-category test for hearts of faithful torsion pairs.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, operations=None):
        sp = sub.add_parser(name, help=help_)
        if operations:
            sp.add_argument("operation", choices=operations)
        sp.add_argument("file")
        sp.add_argument("--lattice-cap", type=int, default=12)
        sp.add_argument("--degree-cap", type=int, default=4)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "parse and validate an input file")
    sp = add("analyze", cmd_analyze, "run the full analysis")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--timings", action="store_true")
    add("generator", cmd_generator, "build the small projective generator")
    sp = add("end-algebra", cmd_end_algebra, "quiver with relations of the generator's endomorphism algebra")
    sp.add_argument("--regular", action="store_true", help="use the stalk complex of the regular module instead")
    sp = add("heart", cmd_heart, "operations in the heart on [[complexes]] / [morphism]", ["hom", "kernel", "cokernel"])
    sp.add_argument("--source")
    sp.add_argument("--target")
    add("lattice", cmd_lattice, "enumerate the submodule lattice of [module]")
    sp = add("prune", cmd_prune, "drop modules that are targets of Ext from survivors")
    sp.add_argument("-o", "--output")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = load(args.file)
        return args.func(args, data)
    except (
        InputError,
        AdmissibilityError,
        UncertifiedTorsion,
        GeneratorVerificationError,
        LatticeCapExceeded,
        EmptySurvivors,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
