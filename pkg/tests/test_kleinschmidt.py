import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_dioph.acceptance import min_very_free_degree
from toric_dioph.curves import enumerate_positive_relations, general_line
from toric_dioph.divisor import anticanonical, deg_relation, pic_basis
from toric_dioph.exact import hermite_normal_form
from toric_dioph.fan import validate
from toric_dioph.kleinschmidt import (
    BadParameters,
    NotBigNef,
    build,
    decompose,
    ess_constant,
    positivity_rank2,
)
from toric_dioph.positivity import positivity
from toric_dioph.primitive import beta, centred_collections


@st.composite
def parameters(draw):
    s = draw(st.integers(1, 2))
    t = draw(st.integers(1, 2))
    a = sorted(draw(st.lists(st.integers(0, 3), min_size=t, max_size=t)))
    return s, t, a


def test_build_f1():
    K = build(1, 1, [1])
    assert K.fan.nrays == 4 and len(K.fan.max_cones) == 4
    assert validate(K.fan).ok
    assert K.b == (1,)


def test_build_product_of_lines():
    K = build(1, 1, [0])
    assert set(K.fan.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert validate(K.fan).ok


def test_build_projective_bundle():
    K = build(2, 1, [2])
    assert K.n == 3 and K.fan.nrays == 5 and validate(K.fan).ok


@settings(max_examples=20)
@given(parameters())
def test_build_valid_and_rank_two(params):
    K = build(*params)
    assert validate(K.fan).ok
    assert pic_basis(K.fan).r == 2
    assert K.C3.coeffs == tuple(K.a_t * x + y for x, y in zip(K.C1.coeffs, K.C2.coeffs))
    # C1 and C2 form a basis of the relation lattice
    H, _ = hermite_normal_form([K.C1.coeffs, K.C2.coeffs])
    assert tuple(map(tuple, H)) == pic_basis(K.fan).class_matrix


def test_build_rejects_bad_parameters():
    for args in [(0, 1, [1]), (1, 1, [1, 2]), (1, 2, [2, 1]), (1, 1, [-1])]:
        with pytest.raises(BadParameters):
            build(*args)


def test_positivity_rank2_examples():
    F2 = build(1, 1, [2])
    p = positivity_rank2(F2, anticanonical(F2.fan))
    assert (p.A, p.B) == (2, 4) and p.B == p.A * F2.a_t
    assert p.nef and p.big and not p.ample
    F1 = build(1, 1, [1])
    p = positivity_rank2(F1, anticanonical(F1.fan))
    assert (p.A, p.B) == (2, 3) and p.ample
    D_t = [0] * F1.fan.nrays
    D_t[F1.t] = 1
    p = positivity_rank2(F1, D_t)
    assert (p.A, p.B) == (1, 0) and not p.nef and not p.big


@settings(max_examples=30)
@given(parameters(), st.data())
def test_positivity_rank2_agrees_with_general_test(params, data):
    K = build(*params)
    D = data.draw(st.lists(st.integers(-3, 3), min_size=K.fan.nrays, max_size=K.fan.nrays))
    p = positivity_rank2(K, D)
    q = positivity(K.fan, D)
    assert (p.nef, p.ample, p.big) == (q.nef, q.ample, q.big)


def test_ess_constant_examples():
    cases = {(1, 1, (1,)): (3, "C3"), (1, 1, (0,)): (4, "C1+C3"), (1, 1, (2,)): (4, "C3")}
    for (s, t, a), (value, branch) in cases.items():
        K = build(s, t, a)
        ess = ess_constant(K, anticanonical(K.fan))
        assert (ess.value, ess.branch) == (value, branch)
    F1 = build(1, 1, [1])
    assert ess_constant(F1, anticanonical(F1.fan)).relation == F1.C3


def test_ess_constant_refuses_non_nef():
    F1 = build(1, 1, [1])
    with pytest.raises(NotBigNef):
        ess_constant(F1, (0, 1, 0, 0))


@settings(max_examples=15)
@given(parameters())
def test_positive_relations_in_c1_c2_cone(params):
    K = build(*params)
    for rel in enumerate_positive_relations(K.fan, 3):
        p, q = decompose(K, rel.coeffs)
        assert p >= 0 and q >= 0 and p >= q * K.a_t


@settings(max_examples=15)
@given(parameters())
def test_beta_and_essential_constant(params):
    K = build(*params)
    D = anticanonical(K.fan)
    if not positivity(K.fan, D).nef or not positivity(K.fan, D).big:
        return
    b = beta(K.fan, D)
    if K.a_t > 0:
        assert [c.relation for c in centred_collections(K.fan)] == [K.C1]
        assert b == deg_relation(K.fan, D, K.C1)
    else:
        assert b == min(deg_relation(K.fan, D, K.C1), deg_relation(K.fan, D, K.C2))
    ess = ess_constant(K, D)
    assert ess.value > b
    assert ess.value == min_very_free_degree(K.fan, D, 4)


@settings(max_examples=15)
@given(parameters())
def test_general_line_class(params):
    K = build(*params)
    line = general_line(K.fan, K.sigma0, [1] * K.n)
    if all(b != 0 for b in K.b):
        assert line.relation == K.C3
    else:
        assert line.relation == K.C1 + K.C3


def test_decompose_rejects_other_vectors():
    K = build(1, 1, [1])
    with pytest.raises(ValueError):
        decompose(K, (1, 0, 0, 0))
