"""Positivity of divisors and the effective cone."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .divisor import as_divisor, d_sigma_all, pic_basis
from .fan import Fan, walls


@dataclass
class PositivityReport:
    nef: bool
    ample: bool
    big: bool
    nef_witness: tuple[int, int] | None = None  # (ray, cone) violating convexity
    ample_witness: tuple[int, int] | None = None
    interior_point: list[Fraction] | None = None

    @property
    def globally_generated(self) -> bool:
        return self.nef

    @property
    def very_ample(self) -> bool:
        return self.ample

    def flags(self) -> dict:
        return {
            "nef": self.nef,
            "ample": self.ample,
            "big": self.big,
            "globally_generated": self.globally_generated,
            "very_ample": self.very_ample,
        }

    def to_dict(self) -> dict:
        d = self.flags()
        d["witnesses"] = {
            "nef": list(self.nef_witness) if self.nef_witness else None,
            "ample": list(self.ample_witness) if self.ample_witness else None,
            "interior_point": [str(x) for x in self.interior_point] if self.interior_point else None,
        }
        return d


def is_big(fan: Fan, D: Sequence[int]) -> tuple[bool, list[Fraction] | None]:
    """Whether ``{m : <m, rho_i> >= -a_i}`` has an interior point."""
    D = as_divisor(fan, D)
    return exact.lp_strict_feasible([list(r) for r in fan.rays], [-a for a in D])


def positivity(fan: Fan, D: Sequence[int]) -> PositivityReport:
    """Nef and ample via convexity of the support function, big via ``P_D``.

    ``D(sigma)_rho = a_rho + <m_D(sigma), rho>`` is the gap between the
    linear extension of the support function on ``sigma`` and its value at
    ``rho``, so convexity is nonnegativity of every ``D(sigma)``.
    """
    fan.require_smooth_complete()
    D = as_divisor(fan, D)
    reps = d_sigma_all(fan, D)
    nef_w = ample_w = None
    for k, rep in enumerate(reps):
        for i, x in enumerate(rep):
            if x < 0 and nef_w is None:
                nef_w = (i, k)
            if i not in fan.cone_sets[k] and x <= 0 and ample_w is None:
                ample_w = (i, k)
    big, point = is_big(fan, D)
    return PositivityReport(
        nef=nef_w is None,
        ample=ample_w is None,
        big=big,
        nef_witness=nef_w,
        ample_witness=ample_w,
        interior_point=point,
    )


def kleiman(fan: Fan, D: Sequence[int]) -> tuple[bool, bool]:
    """(nef, ample) from the degrees of ``D`` on the wall curves."""
    D = as_divisor(fan, D)
    degs = [exact.dot(w.relation, D) for w in walls(fan)]
    return all(d >= 0 for d in degs), all(d > 0 for d in degs)


@dataclass
class EffConeReport:
    extreme_classes: list[tuple[int, ...]]
    extreme_rays: list[list[int]]  # boundary divisors on each extreme ray
    r: int
    sigma0_all: list[int]
    simplicial: bool = field(init=False)

    def __post_init__(self):
        self.simplicial = len(self.extreme_classes) == self.r

    @property
    def sigma0(self) -> int | None:
        return self.sigma0_all[0] if self.sigma0_all else None

    @property
    def star(self) -> bool:
        return self.simplicial

    @property
    def star_star(self) -> bool:
        return self.sigma0 is not None

    def to_dict(self) -> dict:
        return {
            "extreme_classes": [list(c) for c in self.extreme_classes],
            "extreme_rays": self.extreme_rays,
            "simplicial": self.simplicial,
            "sigma0": self.sigma0,
            "sigma0_candidates": self.sigma0_all,
            "star": self.star,
            "star_star": self.star_star,
        }


def _primitive_direction(v: Sequence[int]) -> tuple[int, ...]:
    g = exact.vector_gcd(v)
    return tuple(x // g for x in v) if g else tuple(v)


def sigma0_candidates(fan: Fan) -> list[int]:
    """Max cones in whose basis every outside ray has coordinates <= 0."""
    fan.require_smooth_complete()
    return [
        k
        for k in range(len(fan.max_cones))
        if all(
            max(fan.cone_coords(k, fan.rays[j])) <= 0
            for j in range(fan.nrays)
            if j not in fan.cone_sets[k]
        )
    ]


def find_sigma0(fan: Fan) -> int | None:
    cands = sigma0_candidates(fan)
    return cands[0] if cands else None


def effective_cone(fan: Fan) -> EffConeReport:
    """Extreme rays of the cone spanned by the boundary classes.

    A direction is dropped when its class lies in the cone spanned by the
    other directions (one exact LP each).  The cone-coordinate criterion
    for a simplicial effective cone is evaluated separately and returned as
    ``sigma0_all``; the two are compared by the callers and tests.
    """
    pb = pic_basis(fan)
    classes = pb.boundary_classes()
    directions: dict[tuple[int, ...], list[int]] = {}
    for i, c in enumerate(classes):
        directions.setdefault(_primitive_direction(c), []).append(i)
    dirs = list(directions)
    keep = []
    for d in dirs:
        others = [e for e in dirs if e != d]
        if not exact.in_cone(others, d):
            keep.append(d)
    extreme_classes = [classes[directions[d][0]] for d in keep]
    extreme_rays = [directions[d] for d in keep]
    return EffConeReport(extreme_classes, extreme_rays, pb.r, sigma0_candidates(fan))
