from collections import Counter

import numpy as np
import pytest

from helpers import a2, corpus_inputs, six_vertex_module, small_algebras
from tiltheart.endalg import (
    EndAlgebra,
    NotBasic,
    basic_form,
    decompose_complex,
    end_algebra,
    gabriel_quiver,
    radical,
)
from tiltheart.heartcore import HomotopyHom, Torsion, TwoTermComplex, build_generator, stalk0
from tiltheart.quivalg import Quiver, build_path_algebra
from tiltheart.repkit import projective_map, projective_sum, regular_module, simple
from tiltheart.tiltcheck import torsion_class_certificate


def a2_complexes():
    alg = a2()
    c1 = projective_sum(alg, [1])
    p1 = projective_sum(alg, [0])
    presented = TwoTermComplex(c1, p1, projective_map(c1, p1, [[alg.parse_element("a")]]))
    shifted = TwoTermComplex(c1, projective_sum(alg, []), projective_map(c1, projective_sum(alg, []), []))
    return presented, shifted


def a2_generator():
    v = simple(a2(), 0)
    return build_generator(v, Torsion(v, torsion_class_certificate(v))).generator


def incidence(quiver: Quiver) -> Counter:
    return Counter((s, t) for _, s, t in quiver.arrows)


def test_end_of_stalk_regular_is_the_algebra():
    for alg in small_algebras():
        e = end_algebra(stalk0(regular_module(alg)))
        assert e.dim == alg.dim
        assert e.check_associative() and e.check_unit()


def test_decompose_a2_generator():
    dec = decompose_complex(a2_generator())
    mult = sorted((c.c1.dims, c.c0.dims, n) for c, n in dec.multiplicities)
    assert mult == [((0, 1), (0, 0), 2), ((0, 1), (1, 1), 1)]
    assert not dec.contractible


def test_decompose_doubled_complex():
    presented, _ = a2_complexes()
    alg = a2()
    c1 = projective_sum(alg, [1, 1])
    c0 = projective_sum(alg, [0, 0])
    a, z = alg.parse_element("a"), alg.parse_element("0")
    doubled = TwoTermComplex(c1, c0, projective_map(c1, c0, [[a, z], [z, a]]))
    dec = decompose_complex(doubled)
    assert [n for _, n in dec.multiplicities] == [2]
    assert len(dec.basic_form()) == 1
    assert HomotopyHom(dec.basic_form()[0], presented).dim == 1


def test_contractible_summands_are_dropped():
    alg = a2()
    c = projective_sum(alg, [0])
    cone = TwoTermComplex(c, c, projective_map(c, c, [[alg.parse_element("e1")]]))
    dec = decompose_complex(cone)
    assert dec.contractible == [0] and dec.basic_form() == []


def test_theta_a2():
    theta = EndAlgebra(basic_form(a2_generator()))
    assert theta.dim == 3
    assert theta.check_associative() and theta.check_unit()
    qp = gabriel_quiver(theta)
    assert len(qp.quiver.vertices) == 2 and len(qp.quiver.arrows) == 1
    assert qp.relations == [] and qp.dimension_matches


def test_theta_a2_blocks():
    presented, shifted = a2_complexes()
    theta = EndAlgebra(basic_form(a2_generator()))
    dims = {k: h.dim for k, h in theta.homs.items()}
    # one block is Hom(presented, shifted) = k, the reverse is zero
    assert sorted(dims.values()) == [0, 1, 1, 1]
    assert HomotopyHom(presented, shifted).dim == 1 and HomotopyHom(shifted, presented).dim == 0


def test_semisimple_theta_has_no_arrows():
    k2 = build_path_algebra(Quiver(("1", "2"), ()), [])
    theta = EndAlgebra(basic_form(stalk0(regular_module(k2))))
    qp = gabriel_quiver(theta)
    assert qp.quiver.arrows == () and qp.dimension_matches


def test_radical_is_nilpotent_ideal():
    v = six_vertex_module()
    gen = build_generator(v, Torsion(v, torsion_class_certificate(v))).generator
    theta = EndAlgebra(basic_form(gen))
    j = radical(theta)
    assert j.dim == theta.dim - theta.n_summands
    power, steps = j, 1
    while power.dim:
        rows = [theta.product(x, y) for x in power.basis for y in j.basis]
        power = theta.subspace(np.array(rows))
        steps += 1
        assert steps <= theta.dim
    for b in range(theta.dim):
        e = theta.basis_vector(b)
        assert all(j.contains(theta.product(e, x)) and j.contains(theta.product(x, e)) for x in j.basis)


def test_non_basic_input_rejected():
    presented, _ = a2_complexes()
    with pytest.raises(NotBasic):
        gabriel_quiver(EndAlgebra([presented, presented]))


@pytest.mark.parametrize("name,data", corpus_inputs(), ids=lambda x: x if isinstance(x, str) else "")
def test_round_trip_regular(name, data):
    alg = data.algebra
    basic = basic_form(stalk0(regular_module(alg)))
    theta = EndAlgebra(basic)
    assert theta.dim == alg.dim
    qp = gabriel_quiver(theta, names=alg.quiver.vertices)
    assert incidence(qp.quiver) == incidence(alg.quiver)
    assert qp.quiver.vertices == alg.quiver.vertices
    assert qp.presented_dim == alg.dim
    assert len(qp.relations) == len(alg.relation_text)
