import pytest

from helpers import a2, a3, dual_numbers, six_vertex, six_vertex_module
from tiltheart.quivalg import Quiver, annihilator, build_path_algebra
from tiltheart.repkit import projective, regular_module, simple, submodule_lattice, quotient
from tiltheart.tiltcheck import (
    EmptySurvivors,
    RelativeModules,
    Status,
    completion,
    coresolution_in_add,
    faithfulness,
    in_gen,
    prune_ext_projectives,
    quasi_tilting_crosscheck,
    tilting_over_annihilator,
    torsion_class_certificate,
)


def test_torsion_certificate_examples():
    assert torsion_class_certificate(simple(a2(), 0)).status is Status.CERTIFIED
    assert torsion_class_certificate(regular_module(a2())).status is Status.CERTIFIED
    assert torsion_class_certificate(six_vertex_module()).status is Status.CERTIFIED


def test_dual_numbers_refuted_with_witness():
    s = simple(dual_numbers(), 0)
    cert = torsion_class_certificate(s)
    assert cert.status is Status.REFUTED
    assert cert.tau.dims == (1,)
    assert cert.rigidity_witness.is_iso()
    ce = cert.counterexample
    assert ce.middle.dim == 2 and ce.trace_dim < ce.middle.dim


def test_unknown_without_search():
    cert = torsion_class_certificate(simple(dual_numbers(), 0), search_extensions=False)
    assert cert.status is Status.UNKNOWN


def test_faithfulness():
    alg = a2()
    assert faithfulness(simple(alg, 0)).faithful is True
    f = faithfulness(simple(alg, 1))
    assert f.faithful is False and f.witness.rank() == 1
    assert faithfulness(six_vertex_module()).faithful is True


def test_faithfulness_needs_certified_torsion():
    s = simple(dual_numbers(), 0)
    assert faithfulness(s, torsion_class_certificate(s)).status is Status.UNKNOWN


def test_tilting_reports():
    rep = tilting_over_annihilator(regular_module(a2()))
    assert rep.verdict and rep.over_quotient.dim == 3
    rep = tilting_over_annihilator(simple(a2(), 0), check_coresolution=True)
    assert rep.verdict and rep.over_quotient.dim == 1 and rep.coresolution_ok
    rep = tilting_over_annihilator(six_vertex_module(), check_coresolution=True)
    assert rep.verdict and rep.over_quotient.dim == 6
    assert (rep.summand_count, rep.simple_count) == (4, 4)
    assert rep.failing_conditions() == []


def test_tilting_fails_for_too_few_summands_and_completion_repairs_it():
    # over 1 -> 2 -> 3, V = P(1) alone is faithful and rigid but has one summand for three simples
    v = projective(a3(), 0)
    rep = tilting_over_annihilator(v)
    assert not rep.verdict and rep.summand_count == 1 and rep.simple_count == 3
    assert any("isoclasses" in msg for msg in rep.failing_conditions())
    vc = completion(v)
    assert vc.dim > v.dim
    assert tilting_over_annihilator(vc).verdict


def test_relative_projectives():
    v = six_vertex_module()
    ann = annihilator(v.algebra, v)
    rel = RelativeModules(v.algebra, ann)
    q, pi = rel.cover(v)
    assert pi.rank() == v.dim
    assert rel.is_projective(q)
    with pytest.raises(ValueError):
        rel.cover(regular_module(v.algebra))


def test_coresolution():
    assert coresolution_in_add(six_vertex_module())


def test_quasi_tilting_crosscheck():
    alg = a2()
    v = simple(alg, 0)
    reg = regular_module(alg)
    tests = [quotient(reg, k)[0] for k in submodule_lattice(reg)]
    rows, bad = quasi_tilting_crosscheck(v, tests)
    assert len(rows) == len(tests) and not bad
    rows, bad = quasi_tilting_crosscheck(v, [v])
    assert rows[0].in_gen and not bad


def test_in_gen():
    alg = a2()
    assert in_gen(projective(alg, 0), simple(alg, 0))
    assert not in_gen(simple(alg, 0), simple(alg, 1))


def test_prune():
    alg = a2()
    mods = [simple(alg, 0), simple(alg, 1), projective(alg, 0)]
    survivors, alive = prune_ext_projectives(mods)
    assert alive == [0, 2] and survivors.dims == (2, 1)


def test_prune_semisimple_keeps_everything():
    k2 = build_path_algebra(Quiver(("1", "2"), ()), [])
    mods = [simple(k2, 0), simple(k2, 1)]
    assert prune_ext_projectives(mods)[1] == [0, 1]


def test_prune_empties():
    with pytest.raises(EmptySurvivors):
        prune_ext_projectives([simple(dual_numbers(), 0)])
