from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_dioph import exact
from toric_dioph.arith import chart_map
from toric_dioph.corpus import corpus
from toric_dioph.curves import (
    CurveFamily,
    NotPositive,
    ZeroParameter,
    _presentation_certified,
    chart_line,
    dual_kernel_h0,
    dual_kernel_h0_by_roots,
    enumerate_positive_relations,
    general_line,
    poly_from_factors,
    random_lift,
    splitting_type,
    type_from_h0,
    very_free,
)
from toric_dioph.divisor import Relation, anticanonical, deg_relation
from toric_dioph.kleinschmidt import build
from toric_dioph.positivity import find_sigma0

CORPUS = corpus()


def brute_force_relations(fan, bound):
    return sorted(
        c for c in product(range(bound + 1), repeat=fan.nrays)
        if any(c) and not any(exact.matvec(fan.ray_matrix, c))
    )


def test_enumerate_p2(P2):
    assert [r.coeffs for r in enumerate_positive_relations(P2, 3)] == [(1, 1, 1), (2, 2, 2), (3, 3, 3)]


def test_enumerate_f1_generated_by_c1_c2():
    K = build(1, 1, [1])
    got = {r.coeffs for r in enumerate_positive_relations(K.fan, 2)}
    want = set()
    for p, q in product(range(5), repeat=2):
        c = tuple(p * x + q * y for x, y in zip(K.C1.coeffs, K.C2.coeffs))
        if (p or q) and p >= q and all(0 <= x <= 2 for x in c):
            want.add(c)
    assert got == want


def test_enumerate_s7_minimum_degree(S7):
    rels = enumerate_positive_relations(S7, 2)
    assert min(deg_relation(S7, anticanonical(S7), c) for c in rels) == 2


def test_enumerate_matches_brute_force(all_fans):
    for name in ("P2", "S7", "S6", "F0", "F1", "F2"):
        fan = all_fans[name]
        got = sorted(r.coeffs for r in enumerate_positive_relations(fan, 2))
        assert got == brute_force_relations(fan, 2), name


def test_enumerate_closed_under_addition(all_fans):
    for fan in all_fans.values():
        rels = {r.coeffs for r in enumerate_positive_relations(fan, 3)}
        for a in rels:
            for b in rels:
                s = tuple(x + y for x, y in zip(a, b))
                if max(s) <= 3:
                    assert s in rels


def test_very_free_examples(S7):
    assert not very_free(S7, (1, 0, 1, 0, 0))
    F0 = build(1, 1, [0])
    assert very_free(F0.fan, (1, 1, 1, 1))
    assert F0.C3 == F0.C2
    assert not very_free(F0.fan, F0.C3)
    assert very_free(F0.fan, F0.C1 + F0.C3)


def test_very_free_rejects_non_positive(S7):
    with pytest.raises(NotPositive):
        very_free(S7, (1, 1, 0, 0, -1))
    with pytest.raises(NotPositive):
        very_free(S7, (0, 0, 0, 0, 0))


def test_poly_from_factors():
    # (u - 2v)(3u + v) = 3u^2 - 5uv - 2v^2
    assert poly_from_factors([(1, -2), (3, 1)]) == [-2, -5, 3]
    assert poly_from_factors([]) == [1]


def test_random_lift_has_distinct_roots(S7):
    curve = random_lift(S7, (1, 1, 1, 1, 0), seed=5)
    roots = [b for fs in curve.factors for _, b in fs]
    assert len(roots) == 4 == len(set(roots))
    assert curve.degrees() == (1, 1, 1, 1, 0)
    assert random_lift(S7, (1, 1, 1, 1, 0), seed=5) == curve


def test_type_from_h0():
    assert type_from_h0([0, 1, 2, 4]) == (0, 2)
    assert type_from_h0([0, 0, 1, 3]) == (1, 2)


def test_splitting_type_examples(P2, S7):
    assert splitting_type(P2, (1, 1, 1)).degrees == (1, 2)
    assert splitting_type(S7, (1, 0, 1, 0, 0)).degrees == (0, 2)
    for a in (1, 2, 3):
        K = build(1, 1, [a])
        assert splitting_type(K.fan, K.C3).degrees == tuple(sorted((a, 2)))


def test_splitting_type_seed_independent(S7):
    c = (1, 1, 1, 1, 0)
    assert splitting_type(S7, c, seed=0) == splitting_type(S7, c, seed=12345)


def test_certificate_rejects_degenerate_lift(P2):
    rel = Relation((1, 1, 1))
    constant = CurveFamily(rel, (((1, -5),), ((1, -5),), ((1, -5),)))
    assert not _presentation_certified(P2, constant)
    assert _presentation_certified(P2, random_lift(P2, rel, 0))


def _relations_pool():
    pool = []
    for name, fan in sorted(corpus().items()):
        pool += [(name, r.coeffs) for r in enumerate_positive_relations(fan, 2)]
    return pool


POOL = _relations_pool()


@settings(max_examples=25)
@given(st.sampled_from(POOL), st.integers(0, 10**6))
def test_splitting_type_invariants(item, seed):
    name, c = item
    fan = CORPUS[name]
    st_ = splitting_type(fan, c, seed)
    assert sum(st_.degrees) == sum(c)
    assert len(st_.degrees) == fan.dim
    assert st_.mu_min >= 0
    assert very_free(fan, c) == (st_.mu_min >= 1)


@settings(max_examples=25)
@given(st.sampled_from(POOL), st.integers(0, 10**6))
def test_h0_routes_agree(item, seed):
    name, c = item
    fan = CORPUS[name]
    curve = random_lift(fan, c, seed)
    for k in range(-1, sum(c) + 1):
        assert dual_kernel_h0(fan, curve, k) == dual_kernel_h0_by_roots(fan, curve, k)


def test_general_line_p2(P2):
    chart = P2.max_cones.index((1, 2))
    line = general_line(P2, chart, (1, 1))
    assert line.relation.coeffs == (1, 1, 1)
    assert deg_relation(P2, (1, 0, 0), line.relation) == 1


def test_general_line_s7(S7):
    line = general_line(S7, find_sigma0(S7), (1, 1))
    assert deg_relation(S7, anticanonical(S7), line.relation) == 3


def test_general_line_f1():
    K = build(1, 1, [1])
    line = general_line(K.fan, K.sigma0, (1, 1))
    assert line.relation == K.C3
    assert deg_relation(K.fan, anticanonical(K.fan), line.relation) == 3


def test_general_line_zero_parameter(S7):
    with pytest.raises(ZeroParameter):
        general_line(S7, 0, (1, 0))
    with pytest.raises(ZeroParameter):
        chart_line(S7, 0, (0, 0))


@given(
    st.sampled_from(["P2", "P3", "S7", "F1", "F2", "K(2,1,[2])"]),
    st.data(),
)
def test_chart_line_traces_the_line(name, data):
    fan = CORPUS[name]
    sigma = data.draw(st.integers(0, len(fan.max_cones) - 1))
    m = data.draw(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=fan.dim, max_size=fan.dim))
    if not any(m):
        return
    line = chart_line(fan, sigma, m)
    assert chart_map(fan, sigma, line.evaluate(0, 1)) == (1,) * fan.dim
    u, v = 3, 2
    t = Fraction(u, v)
    X = line.evaluate(u, v)
    if all(X):
        assert chart_map(fan, sigma, X) == tuple(Fraction(x) * t + 1 for x in m)
