import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_dioph import exact
from toric_dioph.corpus import KLEINSCHMIDT_PARAMS, corpus
from toric_dioph.divisor import (
    NotARelation,
    NotGloballyGenerated,
    Relation,
    anticanonical,
    as_divisor,
    d_sigma,
    d_sigma_all,
    deg_relation,
    pic_basis,
    support_function,
)
from toric_dioph.fan import walls
from toric_dioph.positivity import find_sigma0

FAN_NAMES = sorted(corpus())
fan_names = st.sampled_from(FAN_NAMES)
coeffs = st.integers(-4, 4)

CORPUS = corpus()


def test_pic_rank_examples(P2, S7):
    pb = pic_basis(P2)
    assert pb.r == 1
    assert pb.class_matrix == ((1, 1, 1),)
    assert pb.boundary_classes() == [(1,), (1,), (1,)]
    assert pic_basis(S7).r == 3
    for name in KLEINSCHMIDT_PARAMS:
        assert pic_basis(CORPUS[name]).r == 2


def test_pic_basis_is_a_kernel_basis(all_fans):
    for fan in all_fans.values():
        for row in pic_basis(fan).class_matrix:
            assert exact.matvec(fan.ray_matrix, row) == [0] * fan.dim


def test_support_function_p2(P2_literal):
    phi = support_function(P2_literal, (0, 0, 1))
    assert phi.m[0] == (0, 0)


def test_support_function_anticanonical(all_fans):
    for fan in all_fans.values():
        phi = support_function(fan, anticanonical(fan))
        assert [phi(r) for r in fan.rays] == [-1] * fan.nrays


def test_support_function_f1_value(F1, F1_literal):
    # (2,1) = 2 e1 + e2 lies in the cone spanned by e1 and e2
    for fan in (F1, F1_literal):
        assert support_function(fan, anticanonical(fan))((2, 1)) == -3


def test_deg_relation_examples(P2, F1, S7):
    assert deg_relation(S7, anticanonical(S7), (1, 0, 1, 0, 0)) == 2
    assert deg_relation(P2, (1, 0, 0), (1, 1, 1)) == 1
    from toric_dioph.kleinschmidt import build

    K = build(1, 1, [1])
    assert deg_relation(K.fan, anticanonical(K.fan), K.C3) == 3


def test_d_sigma_s7_chart():
    # the chart monomial X_0^2 X_1^2 X_4^3
    S7 = CORPUS["S7"]
    s0 = find_sigma0(S7)
    assert set(S7.max_cones[s0]) == {2, 3}
    assert d_sigma(S7, anticanonical(S7), s0) == (2, 2, 0, 0, 3)


def test_d_sigma_p2_boundary(P2):
    # ray 0 is (-1,-1); D = D_0
    for k, cone in enumerate(P2.max_cones):
        rep = d_sigma(P2, (1, 0, 0), k)
        assert all(rep[i] == 0 for i in cone)
        if 0 in cone:
            assert rep[0] == 0 and sorted(rep) == [0, 0, 1]


def test_d_sigma_requires_nef(P2):
    with pytest.raises(NotGloballyGenerated):
        d_sigma(P2, (-1, 0, 0), 0)


@given(fan_names, st.data())
def test_d_sigma_vanishes_on_cone(name, data):
    fan = CORPUS[name]
    D = data.draw(st.lists(coeffs, min_size=fan.nrays, max_size=fan.nrays))
    for k, rep in enumerate(d_sigma_all(fan, D)):
        assert all(rep[i] == 0 for i in fan.max_cones[k])


@given(fan_names, st.data())
def test_d_sigma_class_equals_class_of_d(name, data):
    fan = CORPUS[name]
    pb = pic_basis(fan)
    D = data.draw(st.lists(coeffs, min_size=fan.nrays, max_size=fan.nrays))
    for rep in d_sigma_all(fan, D):
        assert pb.class_of(rep) == pb.class_of(D)


@given(fan_names, st.data())
def test_deg_relation_bilinear(name, data):
    fan = CORPUS[name]
    rels = [w.relation for w in walls(fan)]
    D1 = data.draw(st.lists(coeffs, min_size=fan.nrays, max_size=fan.nrays))
    D2 = data.draw(st.lists(coeffs, min_size=fan.nrays, max_size=fan.nrays))
    a, b = data.draw(coeffs), data.draw(coeffs)
    c1, c2 = data.draw(st.sampled_from(rels)), data.draw(st.sampled_from(rels))
    D = [a * x + b * y for x, y in zip(D1, D2)]
    assert deg_relation(fan, D, c1) == a * deg_relation(fan, D1, c1) + b * deg_relation(fan, D2, c1)
    c = [x + y for x, y in zip(c1, c2)]
    assert deg_relation(fan, D1, c) == deg_relation(fan, D1, c1) + deg_relation(fan, D1, c2)


@given(fan_names, st.data())
def test_deg_relation_depends_only_on_class(name, data):
    fan = CORPUS[name]
    D = data.draw(st.lists(coeffs, min_size=fan.nrays, max_size=fan.nrays))
    m = data.draw(st.lists(coeffs, min_size=fan.dim, max_size=fan.dim))
    shifted = [a + exact.dot(m, r) for a, r in zip(D, fan.rays)]
    for w in walls(fan):
        assert deg_relation(fan, shifted, w.relation) == deg_relation(fan, D, w.relation)


def test_wall_degree_counts_completing_rays(all_fans):
    rng = random.Random(3)
    for fan in all_fans.values():
        D = [rng.randint(-3, 3) for _ in range(fan.nrays)]
        for w in walls(fan):
            u, u2 = w.completing
            assert deg_relation(fan, D, w.relation) == D[u] + D[u2] + sum(
                w.relation[i] * D[i] for i in w.rays
            )


def test_relation_validation(S7):
    assert Relation.of(S7, (1, 0, 1, 0, 0)).positive
    with pytest.raises(NotARelation):
        Relation.of(S7, (1, 1, 1, 1, 1))
    with pytest.raises(NotARelation):
        Relation.of(S7, (1, 0, 1))
    with pytest.raises(ValueError):
        as_divisor(S7, (1, 1))
