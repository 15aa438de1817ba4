"""Rational points over Q: Cox lifts, heights and distances to the base point.

A point of the open torus is given in the chart of a maximal cone ``sigma``
by coordinates ``y_k``, one per ray ``sigma[k]``.  The chart map from Cox
coordinates is ``y_k = prod_j X_j ** <rho_{sigma[k]}^dual, rho_j>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

import sympy

from . import exact
from .divisor import NotGloballyGenerated, as_divisor, d_sigma_all, support_function
from .fan import Fan, locate_cone

INF = "inf"


class NotInTorus(ValueError):
    pass


def parse_place(place) -> str | int:
    if place is None or place in (INF, "oo", "infinity", "∞"):
        return INF
    p = int(place)
    if not sympy.isprime(p):
        raise ValueError(f"place must be 'inf' or a prime, got {place}")
    return p


@dataclass(frozen=True)
class RationalPoint:
    chart: int
    y: tuple[Fraction, ...]

    @classmethod
    def of(cls, chart: int, y: Sequence) -> "RationalPoint":
        return cls(chart, tuple(Fraction(x) for x in y))

    @classmethod
    def from_pairs(cls, chart: int, pairs: Sequence[Sequence[int]]) -> "RationalPoint":
        return cls(chart, tuple(Fraction(int(a), int(b)) for a, b in pairs))

    def to_pairs(self) -> list[list[int]]:
        return [[x.numerator, x.denominator] for x in self.y]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.y) + ")"


@dataclass(frozen=True)
class CoxPoint:
    X: tuple[int, ...]
    chart: int

    def to_dict(self) -> dict:
        return {"X": list(self.X), "chart": self.chart}


def chart_exponents(fan: Fan, sigma: int) -> list[list[int]]:
    """Row ``k`` holds ``<rho_{sigma[k]}^dual, rho_j>`` for every ray ``j``."""
    return exact.matmul(fan.dual_bases[sigma], fan.ray_matrix)


def chart_map(fan: Fan, sigma: int, X: Sequence[int]) -> tuple[Fraction, ...]:
    """Chart coordinates of the point with Cox coordinates ``X``."""
    out = []
    for row in chart_exponents(fan, sigma):
        y = Fraction(1)
        for x, e in zip(X, row):
            if e:
                y *= Fraction(x) ** e
        out.append(y)
    return tuple(out)


def valuation(x: int, p: int) -> int:
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def _primes_of(P: RationalPoint) -> list[int]:
    ps: set[int] = set()
    for y in P.y:
        for part in (y.numerator, y.denominator):
            ps.update(sympy.factorint(abs(part)))
    return sorted(ps)


def _valuation_vectors(fan: Fan, P: RationalPoint) -> dict[int, list[int]]:
    """``u_p = sum_k v_p(y_k) rho_{sigma[k]}`` for each prime ``p`` of ``P``."""
    cone = fan.max_cones[P.chart]
    out = {}
    for p in _primes_of(P):
        vals = [valuation(y.numerator, p) - valuation(y.denominator, p) for y in P.y]
        out[p] = [sum(v * fan.rays[i][l] for v, i in zip(vals, cone)) for l in range(fan.dim)]
    return out


def cox_lift(fan: Fan, P: RationalPoint) -> CoxPoint:
    """The coprime integer Cox lift of ``P``.

    For each prime the valuation vector ``u_p`` is located in a cone; its
    cone coordinates are the exponents of ``p`` in the ``X_rho``, which puts
    the support of every prime inside a single cone.  Signs come from the
    mod-2 version of the chart map; among valid sign vectors the
    lexicographically first (``+`` before ``-``, in ray order) is taken.
    """
    fan.require_smooth_complete()
    if any(y == 0 for y in P.y):
        raise NotInTorus(f"point {P} has a zero coordinate")
    mags = [1] * fan.nrays
    for p, u in _valuation_vectors(fan, P).items():
        k, coords = locate_cone(fan, u)
        for i, e in zip(fan.max_cones[k], coords):
            mags[i] *= p ** int(e)
    X = [s * m for s, m in zip(_signs(fan, P), mags)]
    return CoxPoint(tuple(X), P.chart)


def _signs(fan: Fan, P: RationalPoint) -> list[int]:
    cone = fan.max_cones[P.chart]
    expo = chart_exponents(fan, P.chart)
    outside = [j for j in range(fan.nrays) if j not in fan.cone_sets[P.chart]]
    best = None
    for bits in product((0, 1), repeat=len(outside)):
        s = [0] * fan.nrays
        for j, b in zip(outside, bits):
            s[j] = b
        for k, i in enumerate(cone):
            want = int(P.y[k] < 0)
            s[i] = (want + sum(expo[k][j] * s[j] for j in outside)) % 2
        if best is None or s < best:
            best = s
    return [-1 if b else 1 for b in best]


def is_coprime(fan: Fan, X: Sequence[int]) -> bool:
    """gcd over every primitive collection is 1."""
    from .primitive import primitive_collections

    for pc in primitive_collections(fan):
        g = 0
        for i in pc.rays:
            g = gcd(g, X[i])
        if g != 1:
            return False
    return True


def _monomial(X: Sequence[int], E: Sequence[int]) -> int:
    out = 1
    for x, e in zip(X, E):
        if e:
            out *= x**e
    return abs(out)


def salberger_height(fan: Fan, D: Sequence[int], P: RationalPoint, lift: CoxPoint | None = None) -> int:
    """``max_sigma |X^{D(sigma)}|`` on the coprime lift."""
    D = as_divisor(fan, D)
    reps = d_sigma_all(fan, D)
    if any(min(rep) < 0 for rep in reps):
        raise NotGloballyGenerated("height needs a globally generated divisor")
    X = (lift or cox_lift(fan, P)).X
    return max(_monomial(X, rep) for rep in reps)


def chart_height(fan: Fan, D: Sequence[int], P: RationalPoint, sigma: int | None = None,
                 lift: CoxPoint | None = None) -> int:
    """``|X^{D(sigma)}|`` on the coprime lift for one fixed cone (default: the chart)."""
    D = as_divisor(fan, D)
    sigma = P.chart if sigma is None else sigma
    rep = d_sigma_all(fan, D)[sigma]
    if min(rep) < 0:
        raise NotGloballyGenerated("height needs a globally generated divisor")
    X = (lift or cox_lift(fan, P)).X
    return _monomial(X, rep)


def character(fan: Fan, P: RationalPoint, m: Sequence[int]) -> Fraction:
    """Value of the character ``chi^m`` at ``P``."""
    cone = fan.max_cones[P.chart]
    out = Fraction(1)
    for y, i in zip(P.y, cone):
        e = exact.dot(m, fan.rays[i])
        if e:
            out *= y**e
    return out


def height_from_characters(fan: Fan, D: Sequence[int], P: RationalPoint) -> int:
    """The same height without a lift, as a product of local maxima.

    At each prime the factor is ``max_sigma |chi^{m_D(sigma)}(P)|_p`` and at
    infinity it is ``max_sigma |chi^{m_D(sigma)}(P)|``.
    """
    phi = support_function(fan, D)
    if any(min(rep) < 0 for rep in d_sigma_all(fan, D)):
        raise NotGloballyGenerated("height needs a globally generated divisor")
    total = Fraction(1)
    for p, u in _valuation_vectors(fan, P).items():
        total *= Fraction(p) ** max(-exact.dot(m, u) for m in phi.m)
    total *= max(abs(character(fan, P, m)) for m in phi.m)
    assert total.denominator == 1
    return int(total)


def padic_abs(x: Fraction, p: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    v = valuation(x.numerator, p) - valuation(x.denominator, p)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def distance(P: RationalPoint, place=INF) -> Fraction:
    """``min(1, max_k |y_k - 1|)`` at the given place."""
    place = parse_place(place)
    if place == INF:
        worst = max(abs(y - 1) for y in P.y)
    else:
        worst = max(padic_abs(y - 1, place) for y in P.y)
    return min(Fraction(1), worst)
