"""Torus-invariant divisors, the Picard lattice and degrees of relations.

A divisor ``D = sum a_i D_i`` is passed around as its integer coefficient
vector, aligned with the fan's ray order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import exact
from .fan import Fan, locate_cone


class NotGloballyGenerated(ValueError):
    pass


class NotARelation(ValueError):
    pass


def anticanonical(fan: Fan) -> tuple[int, ...]:
    return (1,) * fan.nrays


def as_divisor(fan: Fan, D: Sequence[int]) -> tuple[int, ...]:
    D = tuple(int(x) for x in D)
    if len(D) != fan.nrays:
        raise ValueError(f"divisor has {len(D)} coefficients, fan has {fan.nrays} rays")
    return D


@dataclass(frozen=True)
class Relation:
    """Integer vector ``c`` with ``sum c_i rho_i = 0``; also a curve class."""

    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, fan: Fan, c: Sequence[int]) -> "Relation":
        c = tuple(int(x) for x in c)
        if len(c) != fan.nrays:
            raise NotARelation(f"relation has {len(c)} entries, fan has {fan.nrays} rays")
        if any(exact.matvec(fan.ray_matrix, c)):
            raise NotARelation(f"{list(c)} is not a relation between the rays")
        return cls(c)

    @property
    def positive(self) -> bool:
        return all(x >= 0 for x in self.coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.coeffs) if x)

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "Relation") -> "Relation":
        return Relation(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k: int) -> "Relation":
        return Relation(tuple(k * a for a in self.coeffs))


@dataclass(frozen=True)
class PicBasis:
    """Coordinates on Pic, fixed by the HNF basis of the relation lattice.

    Row ``j`` of ``class_matrix`` is the ``j``-th basis relation; the class of
    a divisor is the vector of its degrees on these relations.
    """

    r: int
    class_matrix: tuple[tuple[int, ...], ...]

    def class_of(self, D: Sequence[int]) -> tuple[int, ...]:
        return tuple(exact.dot(row, D) for row in self.class_matrix)

    def boundary_classes(self) -> list[tuple[int, ...]]:
        nrays = len(self.class_matrix[0]) if self.class_matrix else 0
        return [tuple(row[i] for row in self.class_matrix) for i in range(nrays)]

    def relations(self) -> list[Relation]:
        return [Relation(row) for row in self.class_matrix]


@lru_cache(maxsize=256)
def pic_basis(fan: Fan) -> PicBasis:
    fan.require_smooth_complete()
    K = exact.kernel_lattice(fan.ray_matrix)
    assert len(K) == fan.r
    return PicBasis(fan.r, tuple(tuple(row) for row in K))


@dataclass(frozen=True)
class SupportFunction:
    fan: Fan
    D: tuple[int, ...]
    m: tuple[tuple[int, ...], ...]  # m_D(sigma) per max cone

    def __call__(self, v: Sequence) -> int:
        k, _ = locate_cone(self.fan, v)
        return exact.dot(self.m[k], v)

    def pairing(self, k: int, v: Sequence):
        return exact.dot(self.m[k], v)


def support_function(fan: Fan, D: Sequence[int]) -> SupportFunction:
    """Per-cone characters ``m_D(sigma)`` with ``<m, rho_i> = -a_i`` on ``sigma(1)``."""
    fan.require_smooth_complete()
    D = as_divisor(fan, D)
    ms = []
    for k, cone in enumerate(fan.max_cones):
        dual = fan.dual_bases[k]
        m = [0] * fan.dim
        for pos, i in enumerate(cone):
            m = [x - D[i] * y for x, y in zip(m, dual[pos])]
        ms.append(tuple(m))
    return SupportFunction(fan, D, tuple(ms))


def deg_relation(fan: Fan, D: Sequence[int], P) -> int:
    """Degree of ``O(D)`` on the curve class of a relation."""
    c = P.coeffs if isinstance(P, Relation) else tuple(P)
    D = as_divisor(fan, D)
    direct = exact.dot(c, D)
    if __debug__:
        phi = support_function(fan, D)
        via_phi = -sum(ci * phi(fan.rays[i]) for i, ci in enumerate(c) if ci)
        assert via_phi == direct, (via_phi, direct)
    return direct


def d_sigma_all(fan: Fan, D: Sequence[int]) -> list[tuple[int, ...]]:
    """``D(sigma)`` for every max cone, without the effectivity check."""
    phi = support_function(fan, D)
    return [
        tuple(a + exact.dot(m, rho) for a, rho in zip(phi.D, fan.rays))
        for m in phi.m
    ]


def d_sigma(fan: Fan, D: Sequence[int], sigma: int) -> tuple[int, ...]:
    """The effective representative of ``D`` supported off ``sigma(1)``."""
    all_reps = d_sigma_all(fan, D)
    for k, rep in enumerate(all_reps):
        if min(rep) < 0:
            raise NotGloballyGenerated(
                f"D(sigma) for cone {k} has coefficient {min(rep)} on ray {rep.index(min(rep))}"
            )
    return all_reps[sigma]
