"""Picard rank two: the Kleinschmidt fans and their closed-form invariants.

Rays (0-based, ``n = s + t``)::

    rho_0     = -(e_1 + ... + e_t)
    rho_i     = e_i                                  1 <= i <= n
    rho_{n+1} = -(e_{t+1} + ... + e_n) + sum_{i<=t} a_i e_i

Maximal cones drop one ray among ``rho_0..rho_t`` and one among
``rho_{t+1}..rho_{n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import exact
from .divisor import Relation, as_divisor
from .fan import Fan
from .positivity import positivity


class BadParameters(ValueError):
    pass


class NotBigNef(ValueError):
    pass


@dataclass(frozen=True)
class KleinschmidtData:
    s: int
    t: int
    a: tuple[int, ...]
    fan: Fan
    C1: Relation
    C2: Relation
    C3: Relation
    sigma0: int

    @property
    def n(self) -> int:
        return self.s + self.t

    @property
    def a_t(self) -> int:
        return self.a[-1]

    @property
    def b(self) -> tuple[int, ...]:
        """``b_i = a_t - a_i`` for ``i < t`` and ``b_t = a_t``."""
        return tuple(self.a_t - x for x in self.a[:-1]) + (self.a_t,)


def build(s: int, t: int, a: Sequence[int]) -> KleinschmidtData:
    a = tuple(int(x) for x in a)
    if s < 1 or t < 1:
        raise BadParameters("s and t must be at least 1")
    if len(a) != t:
        raise BadParameters(f"need exactly t={t} values a_i, got {len(a)}")
    if any(x < 0 for x in a) or list(a) != sorted(a):
        raise BadParameters("a must be nonnegative and nondecreasing")
    n = s + t

    def e(i):
        return [int(k == i - 1) for k in range(n)]

    rays = [[-1 if k < t else 0 for k in range(n)]]
    rays += [e(i) for i in range(1, n + 1)]
    rays.append([a[k] if k < t else -1 for k in range(n)])

    cones = []
    sigma0 = None
    for i in range(t + 1):
        for j in range(1, s + 2):
            cones.append([k for k in range(n + 2) if k not in (i, t + j)])
            if i == t and t + j == n + 1:
                sigma0 = len(cones) - 1
    fan = Fan(n, rays, cones, name=f"kleinschmidt({s},{t},{list(a)})")

    c1 = [1 if k <= t else 0 for k in range(n + 2)]
    c2 = [1 if k > t else 0 for k in range(n + 2)]
    for i in range(1, t + 1):
        c2[i] = -a[i - 1]
    c3 = [a[-1] * x + y for x, y in zip(c1, c2)]
    return KleinschmidtData(
        s, t, a, fan,
        Relation.of(fan, c1), Relation.of(fan, c2), Relation.of(fan, c3),
        sigma0,
    )


@dataclass
class Rank2Positivity:
    A: int
    B: int
    nef: bool
    ample: bool
    big: bool

    def to_dict(self) -> dict:
        return dict(A=self.A, B=self.B, nef=self.nef, ample=self.ample, big=self.big)


def positivity_rank2(K: KleinschmidtData, D: Sequence[int]) -> Rank2Positivity:
    """Positivity from the coordinates ``(A, B)`` of ``[D]`` in the basis ``[D_t], [D_{n+1}]``.

    ``Eff`` is spanned by ``[D_t]`` and ``[D_{n+1}]``, so big means both
    coordinates are positive.
    """
    D = as_divisor(K.fan, D)
    A = exact.dot(K.C1.coeffs, D)
    B = exact.dot(K.C2.coeffs, D) + A * K.a_t
    return Rank2Positivity(
        A, B,
        nef=A >= 0 and B >= A * K.a_t,
        ample=A > 0 and B > A * K.a_t,
        big=A > 0 and B > 0,
    )


@dataclass
class EssentialConstant:
    value: int
    relation: Relation
    branch: str  # "C3" or "C1+C3"

    def to_dict(self) -> dict:
        return {"alpha_ess": self.value, "class": list(self.relation.coeffs), "branch": self.branch}


def ess_constant(K: KleinschmidtData, D: Sequence[int]) -> EssentialConstant:
    """Essential constant at the base point for a big and nef ``D``.

    It is the degree of the lowest very free class: ``C3`` when every
    ``b_i`` is nonzero, otherwise ``C1 + C3``.
    """
    D = as_divisor(K.fan, D)
    rep = positivity(K.fan, D)
    if not (rep.nef and rep.big):
        raise NotBigNef(f"divisor must be big and nef (nef={rep.nef}, big={rep.big})")
    if all(b != 0 for b in K.b):
        rel, branch = K.C3, "C3"
    else:
        rel, branch = K.C1 + K.C3, "C1+C3"
    return EssentialConstant(exact.dot(rel.coeffs, D), rel, branch)


def decompose(K: KleinschmidtData, c: Sequence[int]) -> tuple[int, int]:
    """Coordinates ``(p, q)`` of a relation in the basis ``C1, C2``."""
    # C2 is supported on rho_{n+1} with coefficient 1, C1 is not
    q = c[K.n + 1]
    p = c[0]
    if [p * x + q * y for x, y in zip(K.C1.coeffs, K.C2.coeffs)] != list(c):
        raise ValueError(f"{list(c)} is not an integer combination of C1 and C2")
    return p, q
