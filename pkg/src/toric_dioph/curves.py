"""Rational curves from relations: enumeration, very-freeness, splitting types.

Homogeneous polynomials in ``(u, v)`` are stored as products of linear forms
``alpha*u + beta*v``; coefficient lists are indexed by the power of ``u``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import sympy

from . import exact
from .divisor import Relation
from .fan import Fan, locate_cone


class NotPositive(ValueError):
    pass


class GenericityFailure(RuntimeError):
    pass


class ZeroParameter(ValueError):
    pass


def _as_positive(fan: Fan, c) -> Relation:
    rel = c if isinstance(c, Relation) else Relation.of(fan, c)
    if not rel.positive or not any(rel.coeffs):
        raise NotPositive(f"{list(rel.coeffs)} is not a nonzero positive relation")
    return rel


def enumerate_positive_relations(fan: Fan, coeff_bound: int) -> list[Relation]:
    """All nonzero relations with ``0 <= c_i <= coeff_bound``.

    The coefficients on the rays outside the first max cone determine the
    rest, so the scan runs over that box and solves for the cone part.
    """
    fan.require_smooth_complete()
    cone = fan.max_cones[0]
    outside = [j for j in range(fan.nrays) if j not in fan.cone_sets[0]]
    # coordinates of each outside ray in the cone basis
    coords = {j: fan.cone_coords(0, fan.rays[j]) for j in outside}
    out = []
    for cj in product(range(coeff_bound + 1), repeat=len(outside)):
        c = [0] * fan.nrays
        for j, x in zip(outside, cj):
            c[j] = x
        ok = True
        for pos, i in enumerate(cone):
            ci = -sum(x * coords[j][pos] for j, x in zip(outside, cj))
            if not 0 <= ci <= coeff_bound:
                ok = False
                break
            c[i] = ci
        if ok and any(c):
            out.append(Relation(tuple(c)))
    out.sort(key=lambda rel: (rel.total, rel.coeffs))
    return out


def very_free(fan: Fan, c) -> bool:
    """Whether the rays in the support of ``c`` span ``Q^n``."""
    rel = _as_positive(fan, c)
    return exact.rank([fan.rays[i] for i in rel.support]) == fan.dim


# --------------------------------------------------------------------------
# homogeneous polynomials as products of linear forms


def poly_from_factors(factors: Sequence[tuple[int, int]]) -> list[int]:
    """Coefficients (by power of u) of a product of forms ``alpha*u + beta*v``."""
    coeffs = [1]
    for alpha, beta in factors:
        nxt = [0] * (len(coeffs) + 1)
        for e, x in enumerate(coeffs):
            nxt[e] += beta * x
            nxt[e + 1] += alpha * x
        coeffs = nxt
    return coeffs


@dataclass(frozen=True)
class CurveFamily:
    """A map ``P^1 -> X`` given by one homogeneous form per ray."""

    relation: Relation
    factors: tuple[tuple[tuple[int, int], ...], ...]  # per ray, its linear factors
    seed: int | None = None
    chart: int | None = None
    parameter: tuple | None = None

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)

    def evaluate(self, u: int, v: int) -> list[int]:
        """Cox coordinates at ``(u : v)``; not coprime in general."""
        out = []
        for fs in self.factors:
            x = 1
            for alpha, beta in fs:
                x *= alpha * u + beta * v
            out.append(x)
        return out

    def polys(self) -> list[list[int]]:
        return [poly_from_factors(f) for f in self.factors]

    def to_dict(self) -> dict:
        d = {
            "relation": list(self.relation.coeffs),
            "factors": [[list(l) for l in f] for f in self.factors],
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if self.chart is not None:
            d["chart"] = self.chart
            d["parameter"] = [str(x) for x in self.parameter]
        return d


def random_lift(fan: Fan, c, seed: int) -> CurveFamily:
    """A lift whose forms are products of distinct linear forms ``u - b v``.

    Every root ``b`` is drawn from ``1..1000`` and no root is reused, so the
    forms are pairwise coprime.
    """
    rel = _as_positive(fan, c)
    rng = random.Random(seed)
    roots = rng.sample(range(1, 1001), rel.total)
    factors = []
    pos = 0
    for ci in rel.coeffs:
        factors.append(tuple((1, -b) for b in roots[pos:pos + ci]))
        pos += ci
    return CurveFamily(rel, tuple(factors), seed)


# --------------------------------------------------------------------------
# splitting type


@dataclass(frozen=True)
class SplittingType:
    degrees: tuple[int, ...]
    h0: tuple[int, ...] = field(default=(), compare=False)  # h0 of the dual twisted by k = -1, 0, ...
    seeds: tuple[int, ...] = field(default=(), compare=False)

    @property
    def mu_min(self) -> int:
        return self.degrees[0]

    def to_dict(self) -> dict:
        return {"degrees": list(self.degrees), "mu_min": self.mu_min, "seeds": list(self.seeds)}


def _presentation_certified(fan: Fan, curve: CurveFamily) -> bool:
    """Whether ``O^r -> sum O(c_i)`` is a sub-bundle for this lift.

    The maximal minors of the ``(n+r) x r`` matrix ``(w_ji f_i)`` must have
    no common zero on ``P^1``: their gcd (with ``v = 1``) is constant, and
    some minor keeps its full degree, so ``(1 : 0)`` is not a common zero.
    """
    W = exact.kernel_lattice(fan.ray_matrix)
    r = len(W)
    u = sympy.Symbol("u")
    fs = [sympy.Poly(list(reversed(p)), u, domain="ZZ") for p in curve.polys()]
    degs = curve.degrees()
    g = None
    full_degree = False
    for rows in combinations(range(fan.nrays), r):
        M = sympy.Matrix(r, r, lambda a, b: W[b][rows[a]] * fs[rows[a]].as_expr())
        minor = sympy.Poly(M.det(method="bareiss"), u, domain="ZZ")
        if minor.is_zero:
            continue
        if minor.degree() == sum(degs[i] for i in rows):
            full_degree = True
        g = minor if g is None else sympy.gcd(g, minor)
        if g.degree() == 0 and full_degree:
            return True
    return g is not None and g.degree() == 0 and full_degree


def dual_kernel_h0(fan: Fan, curve: CurveFamily, k: int) -> int:
    """``h^0`` of the dual of the pulled-back tangent bundle, twisted by ``k``.

    The dual sits as the kernel of ``sum O(-c_i) -> O^r`` given by the
    relation lattice basis ``w_j``; global sections of a kernel are the
    kernel of the map on sections.
    """
    W = exact.kernel_lattice(fan.ray_matrix)
    r = len(W)
    polys = curve.polys()
    degs = curve.degrees()
    cols = []
    for i, f in enumerate(polys):
        for s in range(k - degs[i] + 1):
            col = [0] * (r * (k + 1))
            for j in range(r):
                w = W[j][i]
                if w:
                    for e, x in enumerate(f):
                        col[j * (k + 1) + e + s] = w * x
            cols.append(col)
    if not cols:
        return 0
    if k < 0:
        return len(cols)
    return len(cols) - exact.rank(exact.transpose(cols))


def dual_kernel_h0_by_roots(fan: Fan, curve: CurveFamily, k: int) -> int:
    """Same dimension as :func:`dual_kernel_h0`, counted on the character side.

    Sections correspond to ``m`` in ``S_k^n`` (forms of degree ``k`` with
    values in ``M``) such that ``f_i`` divides ``<m, rho_i>`` for every ray;
    with distinct roots this is vanishing at each root of ``f_i``.
    """
    if k < 0:
        return 0
    n = fan.dim
    rows = []
    for i, fs in enumerate(curve.factors):
        for alpha, beta in fs:
            # root of alpha*u + beta*v is (u : v) = (-beta : alpha)
            pu, pv = -beta, alpha
            row = []
            for l in range(n):
                for e in range(k + 1):
                    row.append(fan.rays[i][l] * pu**e * pv ** (k - e))
            rows.append(row)
    total = n * (k + 1)
    if not rows:
        return total
    return total - exact.rank(rows)


def type_from_h0(h: Sequence[int], kmin: int = -1) -> tuple[int, ...]:
    """Recover ``a_1 <= ... <= a_m`` from ``h(k) = sum max(0, k - a_l + 1)``."""
    first = [h[0]] + [h[i] - h[i - 1] for i in range(1, len(h))]
    out = []
    prev = 0
    for idx, d in enumerate(first):
        k = kmin + idx
        if d < prev:
            raise ArithmeticError(f"h0 sequence {list(h)} is not convex")
        out.extend([k] * (d - prev))
        prev = d
    return tuple(out)


def _splitting_once(fan: Fan, rel: Relation, seed: int, max_tries: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    for attempt in range(max_tries):
        s = seed + 7919 * attempt
        curve = random_lift(fan, rel, s)
        if _presentation_certified(fan, curve):
            break
    else:
        raise GenericityFailure(f"no certified lift after {max_tries} samples (seed {seed})")
    top = rel.total
    h = tuple(dual_kernel_h0(fan, curve, k) for k in range(-1, top + 1))
    if h[0] != 0:
        raise ArithmeticError("dual bundle has sections at twist -1")
    degs = type_from_h0(h)
    return degs, h, s


def splitting_type(fan: Fan, c, seed: int = 0, max_tries: int = 8) -> SplittingType:
    """Splitting type of the pulled-back tangent bundle along a general lift.

    Two independent seeds must give the same multiset.
    """
    rel = _as_positive(fan, c)
    fan.require_smooth_complete()
    d1, h1, s1 = _splitting_once(fan, rel, seed, max_tries)
    d2, _, s2 = _splitting_once(fan, rel, seed + 1_000_003, max_tries)
    if d1 != d2:
        raise GenericityFailure(f"seeds {s1} and {s2} disagree: {d1} vs {d2}")
    if len(d1) != fan.dim or sum(d1) != rel.total:
        raise ArithmeticError(f"splitting type {d1} inconsistent with rank {fan.dim}, degree {rel.total}")
    return SplittingType(d1, h1, (s1, s2))


# --------------------------------------------------------------------------
# lines in a chart


def chart_line(fan: Fan, sigma: int, m: Sequence) -> CurveFamily:
    """The line ``t -> (m_1 t + 1, ..., m_n t + 1)`` in the chart of ``sigma``.

    Coordinates with ``m_k = 0`` stay at 1.  With ``t = u/v`` the lift is
    ``X_k = m_k u + v`` on the rays of ``sigma`` that move, ``v^(a_rho)`` on
    the rays of the cone ``tau`` containing minus their sum (``a`` being the
    coordinates there) and 1 elsewhere.  For rational ``m`` with common
    denominator ``q`` the forms are ``q m_k u + q v`` and ``(q v)^(a_rho)``,
    which keeps every form integral and still gives ``t = u/v``.
    """
    fan.require_smooth_complete()
    cone = fan.max_cones[sigma]
    if len(m) != fan.dim:
        raise ValueError(f"line parameter needs {fan.dim} entries")
    mq = [Fraction(x) for x in m]
    den = math.lcm(*(x.denominator for x in mq))
    mi = [int(x * den) for x in mq]
    moving = [cone[k] for k in range(fan.dim) if mi[k] != 0]
    if not moving:
        raise ZeroParameter("line parameter is zero")
    target = [-sum(fan.rays[i][l] for i in moving) for l in range(fan.dim)]
    tau, coords = locate_cone(fan, target)
    c = [0] * fan.nrays
    factors: list[list[tuple[int, int]]] = [[] for _ in range(fan.nrays)]
    for k in range(fan.dim):
        if mi[k] != 0:
            c[cone[k]] += 1
            factors[cone[k]].append((mi[k], den))
    for i, a in zip(fan.max_cones[tau], coords):
        c[i] += int(a)
        factors[i].extend([(0, den)] * int(a))
    rel = Relation.of(fan, c)
    return CurveFamily(rel, tuple(tuple(f) for f in factors), chart=sigma, parameter=tuple(mq))


def general_line(fan: Fan, sigma: int, m: Sequence) -> CurveFamily:
    if any(x == 0 for x in m):
        raise ZeroParameter("every line parameter must be nonzero")
    return chart_line(fan, sigma, m)
