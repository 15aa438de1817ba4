"""Primitive collections, the constant beta and the accumulating locus."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import exact
from .divisor import Relation, as_divisor
from .fan import Fan, locate_cone
from .positivity import find_sigma0, positivity


class NoCPC(ValueError):
    pass


class NotNefOrBig(ValueError):
    pass


class NotAmple(ValueError):
    pass


class HypothesisStarFails(ValueError):
    pass


class IsProjectiveSpace(ValueError):
    pass


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class PrimitiveCollection:
    rays: tuple[int, ...]
    centred: bool
    relation: Relation
    cone: int | None = None  # cone containing the ray sum, non-centred only
    cone_coords: tuple[int, ...] | None = None

    @property
    def cardinality(self) -> int:
        return len(self.rays)

    def to_dict(self) -> dict:
        d = {
            "rays": list(self.rays),
            "centred": self.centred,
            "cardinality": self.cardinality,
            "relation": list(self.relation.coeffs),
        }
        if not self.centred:
            d["cone"] = self.cone
            d["cone_coords"] = list(self.cone_coords)
        return d


def is_face(fan: Fan, S) -> bool:
    S = set(S)
    return any(S <= c for c in fan.cone_sets)


@lru_cache(maxsize=256)
def _primitive_collections(fan: Fan) -> tuple[PrimitiveCollection, ...]:
    fan.require_smooth_complete()
    found: list[PrimitiveCollection] = []
    for k in range(2, fan.dim + 2):
        for S in combinations(range(fan.nrays), k):
            if is_face(fan, S):
                continue
            if any(not is_face(fan, T) for T in combinations(S, k - 1)):
                continue
            total = [sum(fan.rays[i][l] for i in S) for l in range(fan.dim)]
            c = [0] * fan.nrays
            for i in S:
                c[i] += 1
            if not any(total):
                found.append(PrimitiveCollection(S, True, Relation(tuple(c))))
                continue
            cone, coords = locate_cone(fan, total)
            for i, x in zip(fan.max_cones[cone], coords):
                c[i] -= x
            found.append(
                PrimitiveCollection(S, False, Relation(tuple(c)), cone, tuple(int(x) for x in coords))
            )
    return tuple(found)


def primitive_collections(fan: Fan) -> list[PrimitiveCollection]:
    """All minimal non-faces, smallest first, each with its primitive relation."""
    pcs = list(_primitive_collections(fan))
    if not any(p.centred for p in pcs):
        warnings.warn("fan has no centred primitive collection; it cannot be projective")
    return pcs


def centred_collections(fan: Fan) -> list[PrimitiveCollection]:
    return [p for p in _primitive_collections(fan) if p.centred]


def _beta_unchecked(fan: Fan, D: Sequence[int]) -> int:
    cpcs = centred_collections(fan)
    if not cpcs:
        raise NoCPC("fan has no centred primitive collection")
    return min(exact.dot(p.relation.coeffs, D) for p in cpcs)


def beta(fan: Fan, D: Sequence[int]) -> int:
    """Minimal degree of ``D`` over the centred primitive relations."""
    D = as_divisor(fan, D)
    rep = positivity(fan, D)
    if not (rep.nef and rep.big):
        raise NotNefOrBig(f"divisor must be nef and big (nef={rep.nef}, big={rep.big})")
    return _beta_unchecked(fan, D)


@dataclass(frozen=True)
class LocusComponent:
    collection: tuple[int, ...]
    sigma0: int
    fixed_rays: tuple[int, ...]  # rays rho in sigma0(1) \ I, where y_rho = 1
    fixed_positions: tuple[int, ...]  # the same, as chart coordinate positions

    def contains(self, y: Sequence) -> bool:
        return all(y[k] == 1 for k in self.fixed_positions)

    def to_dict(self) -> dict:
        return {
            "collection": list(self.collection),
            "sigma0": self.sigma0,
            "fixed_rays": list(self.fixed_rays),
            "fixed_coordinates": list(self.fixed_positions),
            "dimension": len(self.collection) - 1,
            "cardinality": len(self.collection),
        }


@dataclass(frozen=True)
class AccumulatingLocus:
    beta: int
    sigma0: int
    components: tuple[LocusComponent, ...]
    dim: int

    def contains(self, y: Sequence) -> bool:
        """Whether the chart point ``y`` (in ``sigma0`` coordinates) lies on the locus."""
        return any(c.contains(y) for c in self.components)

    def meets_only_at_q0(self) -> bool:
        for a, b in combinations(self.components, 2):
            if set(a.fixed_positions) | set(b.fixed_positions) != set(range(self.dim)):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "sigma0": self.sigma0,
            "components": [c.to_dict() for c in self.components],
        }


def accumulating_locus(fan: Fan, D: Sequence[int]) -> AccumulatingLocus:
    """Union of the chart subvarieties attached to the CPCs of minimal degree."""
    D = as_divisor(fan, D)
    rep = positivity(fan, D)
    if not rep.ample:
        raise NotAmple("the locus is only described for ample divisors; beta is an upper bound")
    if fan.r == 1:
        raise IsProjectiveSpace("projective space has no proper accumulating locus")
    s0 = find_sigma0(fan)
    if s0 is None:
        raise HypothesisStarFails("no max cone has all outside rays with nonpositive coordinates")
    b = _beta_unchecked(fan, D)
    cone = fan.max_cones[s0]
    comps = []
    for p in centred_collections(fan):
        if exact.dot(p.relation.coeffs, D) != b:
            continue
        fixed = tuple(i for i in cone if i not in p.rays)
        comps.append(LocusComponent(p.rays, s0, fixed, tuple(cone.index(i) for i in fixed)))
    return AccumulatingLocus(b, s0, tuple(comps), fan.dim)


@dataclass
class DiagnosticReport:
    sigma0: int
    beta: int
    items: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(v["pass"] for v in self.items.values())

    def to_dict(self) -> dict:
        return {"sigma0": self.sigma0, "beta": self.beta, "all_pass": self.all_pass, "items": self.items}


def outside_relations(fan: Fan, s0: int) -> dict[int, Relation]:
    """For each ray outside ``sigma0``, the relation ``rho_j + sum b_ij rho_i = 0``."""
    out = {}
    cone = fan.max_cones[s0]
    for j in range(fan.nrays):
        if j in fan.cone_sets[s0]:
            continue
        c = [0] * fan.nrays
        c[j] = 1
        for i, x in zip(cone, fan.cone_coords(s0, fan.rays[j])):
            c[i] = -x
        out[j] = Relation(tuple(c))
    return out


def diagnostics_star(fan: Fan, D: Sequence[int]) -> DiagnosticReport:
    """Check the combinatorial consequences of a simplicial effective cone."""
    D = as_divisor(fan, D)
    s0 = find_sigma0(fan)
    if s0 is None:
        raise HypothesisStarFails("no max cone has all outside rays with nonpositive coordinates")
    if not positivity(fan, D).nef:
        raise NotNefOrBig("divisor must be globally generated")
    b = _beta_unchecked(fan, D)
    cone = fan.max_cones[s0]
    rels = outside_relations(fan, s0)
    degs = {j: exact.dot(rel.coeffs, D) for j, rel in rels.items()}

    bad_a = [j for j, rel in rels.items() if not rel.positive or degs[j] < b]
    cpcs = centred_collections(fan)
    bad_b = [list(p.rays) for p in cpcs if len(set(p.rays) - fan.cone_sets[s0]) != 1]
    bad_c = [
        [list(p.rays), list(q.rays)] for p, q in combinations(cpcs, 2) if set(p.rays) & set(q.rays)
    ]
    bad_d = [
        [i, j]
        for j, rel in rels.items()
        for i in cone
        if degs[j] < rel.coeffs[i] * b
    ]
    rep = DiagnosticReport(s0, b)
    rep.items = {
        "outside_relations_positive": {
            "pass": not bad_a,
            "degrees": {str(j): degs[j] for j in rels},
            "failures": bad_a,
        },
        "cpc_one_outside_ray": {"pass": not bad_b, "failures": bad_b},
        "cpcs_disjoint": {"pass": not bad_c, "failures": bad_c},
        "degree_grid": {"pass": not bad_d, "failures": bad_d},
    }
    return rep
