import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_dioph import exact
from toric_dioph.corpus import KLEINSCHMIDT_PARAMS, corpus, projective_space
from toric_dioph.curves import enumerate_positive_relations
from toric_dioph.divisor import anticanonical, deg_relation
from toric_dioph.fan import random_unimodular
from toric_dioph.positivity import effective_cone, positivity
from toric_dioph.primitive import (
    HypothesisStarFails,
    IsProjectiveSpace,
    NotAmple,
    NotNefOrBig,
    accumulating_locus,
    beta,
    centred_collections,
    diagnostics_star,
    is_face,
    primitive_collections,
)

CORPUS = corpus()


def summary(fan):
    return {pc.rays: pc.centred for pc in primitive_collections(fan)}


def test_p2_single_collection(P2):
    (pc,) = primitive_collections(P2)
    assert pc.rays == (0, 1, 2) and pc.centred and pc.cardinality == 3


def test_s7_collections(S7):
    # rays: 0 e1, 1 e2, 2 -e1, 3 -e2, 4 e1+e2
    assert summary(S7) == {(0, 2): True, (1, 3): True, (0, 1): False, (2, 4): False, (3, 4): False}
    (pc,) = [p for p in primitive_collections(S7) if p.rays == (0, 1)]
    assert pc.relation.coeffs == (1, 1, 0, 0, -1)


def test_f1_collections(F1_literal):
    # rays: 0 e1, 1 e2, 2 -e1, 3 e1-e2
    assert summary(F1_literal) == {(0, 2): True, (1, 3): False}
    (pc,) = [p for p in primitive_collections(F1_literal) if p.rays == (1, 3)]
    assert pc.relation.coeffs == (-1, 1, 0, 1)


def test_collections_are_minimal_non_faces(all_fans):
    for fan in all_fans.values():
        for pc in primitive_collections(fan):
            assert not is_face(fan, pc.rays)
            assert all(is_face(fan, T) for T in combinations(pc.rays, len(pc.rays) - 1))
            assert exact.matvec(fan.ray_matrix, pc.relation.coeffs) == [0] * fan.dim


def test_centred_support_has_one_relation(all_fans):
    for fan in all_fans.values():
        for pc in centred_collections(fan):
            assert exact.rank([fan.rays[i] for i in pc.rays]) == pc.cardinality - 1


def test_centred_collections_disjoint(all_fans):
    for fan in all_fans.values():
        for p, q in combinations(centred_collections(fan), 2):
            assert not set(p.rays) & set(q.rays)


def test_beta_examples(S7, F1):
    assert beta(S7, anticanonical(S7)) == 2
    for n in (1, 2, 3, 4):
        Pn = projective_space(n)
        assert beta(Pn, anticanonical(Pn)) == n + 1
    assert beta(F1, anticanonical(F1)) == 2


def test_beta_requires_nef_and_big(P2, S7):
    with pytest.raises(NotNefOrBig):
        beta(P2, (-1, 0, 0))
    with pytest.raises(NotNefOrBig):
        beta(S7, (0, 0, 0, 0, 0))


def test_beta_equals_min_over_positive_relations(all_fans):
    for name, fan in all_fans.items():
        if not effective_cone(fan).star_star:
            continue
        D = anticanonical(fan)
        rels = enumerate_positive_relations(fan, 4)
        assert beta(fan, D) == min(deg_relation(fan, D, c) for c in rels), name


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_beta_lattice_invariant(seed):
    rng = random.Random(seed)
    for fan in corpus().values():
        g = fan.transform(random_unimodular(fan.dim, rng))
        D = anticanonical(fan)
        assert beta(g, D) == beta(fan, D)


def test_locus_s7(S7):
    Y = accumulating_locus(S7, anticanonical(S7))
    assert Y.beta == 2
    assert set(S7.max_cones[Y.sigma0]) == {2, 3}
    fixed = {c.collection: c.fixed_positions for c in Y.components}
    pos = {i: k for k, i in enumerate(S7.max_cones[Y.sigma0])}
    # the collection {e1, -e1} gives {y = 1} on the -e2 coordinate and vice versa
    assert fixed == {(0, 2): (pos[3],), (1, 3): (pos[2],)}
    assert Y.meets_only_at_q0()
    assert Y.contains((1, 5)) and Y.contains((7, 1)) and not Y.contains((2, 3))


def test_locus_projective_space(P2):
    with pytest.raises(IsProjectiveSpace):
        accumulating_locus(P2, (1, 0, 0))


def test_locus_f1(F1):
    Y = accumulating_locus(F1, anticanonical(F1))
    (comp,) = Y.components
    assert len(comp.collection) == 2 and len(comp.fixed_positions) == 1
    assert comp.to_dict()["dimension"] == 1


def test_locus_needs_ample():
    F2 = CORPUS["F2"]
    D = anticanonical(F2)
    assert not positivity(F2, D).ample
    with pytest.raises(NotAmple):
        accumulating_locus(F2, D)


def test_locus_needs_star(S6):
    with pytest.raises(HypothesisStarFails):
        accumulating_locus(S6, anticanonical(S6))


def test_diagnostics_s7(S7):
    rep = diagnostics_star(S7, anticanonical(S7))
    assert rep.all_pass and rep.beta == 2


def test_diagnostics_kleinschmidt():
    for name in KLEINSCHMIDT_PARAMS:
        fan = CORPUS[name]
        D = anticanonical(fan)
        if positivity(fan, D).nef:
            assert diagnostics_star(fan, D).all_pass, name


def test_diagnostics_precondition(S6):
    with pytest.raises(HypothesisStarFails):
        diagnostics_star(S6, anticanonical(S6))
