"""Empirical approximation exponents at the base point ``Q0 = (1, ..., 1)``.

Two tools: slope estimates of ``log H`` against ``-log d`` along a curve
through ``Q0``, and exhaustive Liouville searches for the minimum of
``d^gamma * H`` over a box of rational points.  Searches run a float
prefilter in log space and then re-evaluate every near-minimal point with
exact arithmetic; only the exact values are reported.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .arith import (
    INF,
    RationalPoint,
    chart_height,
    chart_map,
    cox_lift,
    distance,
    padic_abs,
    parse_place,
    salberger_height,
)
from .curves import CurveFamily
from .divisor import as_divisor, d_sigma_all, deg_relation, support_function
from .fan import Fan
from .positivity import find_sigma0, positivity
from .primitive import (
    AccumulatingLocus,
    IsProjectiveSpace,
    NotApplicable,
    NotNefOrBig,
    accumulating_locus,
)


class CurveMissesQ0(ValueError):
    pass


def default_chart(fan: Fan) -> int:
    s0 = find_sigma0(fan)
    return 0 if s0 is None else s0


def _require_gg_big(fan: Fan, D) -> None:
    rep = positivity(fan, D)
    if not (rep.nef and rep.big):
        raise NotNefOrBig(f"divisor must be globally generated and big (nef={rep.nef}, big={rep.big})")


# --------------------------------------------------------------------------
# slopes along curves


@dataclass
class SlopeEstimate:
    gamma: float
    window: int
    residual: float
    expected: int | None = None
    samples: list = field(default_factory=list)  # (u, v, point, d, H), exact

    def relative_error(self) -> float | None:
        if self.expected is None:
            return None
        return abs(self.gamma - self.expected) / self.expected

    def to_dict(self) -> dict:
        return {
            "gamma": f"{self.gamma:.6f}",
            "window": self.window,
            "residual": f"{self.residual:.3e}",
            "expected": self.expected,
        }


SCHEDULES = ("zero+", "zero-", "infinity")


def _parameter_schedule(top: int, count: int = 40) -> list[int]:
    vals = sorted({max(1, round(10 ** (math.log10(top) * k / (count - 1)))) for k in range(count)})
    return vals


def _swap(curve: CurveFamily) -> CurveFamily:
    return CurveFamily(
        curve.relation,
        tuple(tuple((b, a) for a, b in fs) for fs in curve.factors),
        curve.seed,
        curve.chart,
        curve.parameter,
    )


def estimate_alpha_on_curve(
    fan: Fan,
    D: Sequence[int],
    curve: CurveFamily,
    place=INF,
    schedule: str = "zero+",
    top: int = 10**6,
    window: int = 20,
) -> SlopeEstimate:
    """Least-squares slope of ``log H`` against ``-log d`` along ``curve``.

    The curve meets ``Q0`` at ``(u : v) = (0 : 1)``.  At infinity the points
    are ``(+-1 : N)`` with ``N`` geometric up to ``top``; at a prime ``p``
    they are ``(p^k : 1)``.  The ``infinity`` schedule uses the inverted
    parameter ``s = 1/t`` running to infinity, which reaches the same points
    through the swapped forms.
    """
    D = as_divisor(fan, D)
    _require_gg_big(fan, D)
    place = parse_place(place)
    if schedule not in SCHEDULES:
        raise ValueError(f"schedule must be one of {SCHEDULES}")
    chart = default_chart(fan) if curve.chart is None else curve.chart
    if any(y != 1 for y in chart_map(fan, chart, curve.evaluate(0, 1))):
        raise CurveMissesQ0("curve does not pass through the base point at (0 : 1)")

    if place == INF:
        Ns = _parameter_schedule(top)
        sign = -1 if schedule == "zero-" else 1
        params = [(sign, N) for N in Ns]
    else:
        kmax = max(1, int(math.log(top) / math.log(place)))
        params = [(place**k, 1) for k in range(1, kmax + 1)]
    swapped = _swap(curve)
    samples = []
    for u, v in params:
        if schedule == "infinity":
            X = swapped.evaluate(v, u)
        else:
            X = curve.evaluate(u, v)
        if any(x == 0 for x in X):
            continue
        P = RationalPoint(chart, chart_map(fan, chart, X))
        d = distance(P, place)
        if d == 0 or d == 1:
            continue
        H = salberger_height(fan, D, P)
        samples.append((u, v, P, d, H))
    tail = samples[-window:]
    if len(tail) < 3:
        raise ValueError("not enough sample points on the curve")
    xs = np.array([-_log(d) for *_, d, _ in tail])
    ys = np.array([_log(H) for *_, H in tail])
    A = np.vstack([xs, np.ones_like(xs)]).T
    (slope, icpt), res, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - ys) ** 2)))
    expected = deg_relation(fan, D, curve.relation)
    return SlopeEstimate(float(slope), len(tail), resid, expected, samples)


def _log(x) -> float:
    """Natural log of a positive int or Fraction without overflow."""
    x = Fraction(x)
    return _log_int(x.numerator) - _log_int(x.denominator)


def _log_int(n: int) -> float:
    if n < 2**1000:
        return math.log(n)
    s = n.bit_length() - 64
    return math.log(n >> s) + s * math.log(2)


# --------------------------------------------------------------------------
# Liouville searches


def box_values(B: int) -> list[Fraction]:
    """Reduced fractions ``p/q`` with ``1 <= |p| <= B`` and ``1 <= q <= B``, sorted."""
    vals = {Fraction(p, q) for q in range(1, B + 1) for p in range(-B, B + 1) if p and math.gcd(p, q) == 1}
    return sorted(vals)


def _size(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


@dataclass
class Candidate:
    point: RationalPoint
    d: Fraction
    H: int

    def key(self, gamma: Fraction) -> Fraction:
        """``(d^gamma H)^b`` for ``gamma = a/b``; monotone in ``d^gamma H``."""
        return self.d**gamma.numerator * Fraction(self.H) ** gamma.denominator

    def value(self, gamma: Fraction):
        if gamma.denominator == 1:
            return self.d ** int(gamma) * self.H
        return float(self.d) ** float(gamma) * self.H

    def row(self, gamma: Fraction) -> dict:
        return {
            "point": [str(y) for y in self.point.y],
            "d": str(self.d),
            "H": self.H,
            "value": str(self.value(gamma)),
        }


@dataclass
class LiouvilleResult:
    gamma: Fraction
    bound: int
    height: str
    place: object
    npoints: int
    best: Candidate | None
    rows: list = field(default_factory=list)

    @property
    def min_value(self):
        return None if self.best is None else self.best.value(self.gamma)

    def at_least(self, c) -> bool:
        """Exact test ``min d^gamma H >= c``."""
        c = Fraction(c)
        return self.best is None or self.best.key(self.gamma) >= c**self.gamma.denominator

    def to_dict(self) -> dict:
        out = {
            "gamma": str(self.gamma),
            "bound": self.bound,
            "height": self.height,
            "place": str(self.place),
            "points": self.npoints,
        }
        if self.best is not None:
            out["min"] = str(self.min_value)
            out["argmin"] = [str(y) for y in self.best.point.y]
            out["d"] = str(self.best.d)
            out["H"] = self.best.H
        return out


class SearchBox:
    """All chart points of a box with their float log-distances and log-heights.

    Built once per (fan, D, chart, place, height, B) and reused for every
    exponent, nested sub-box and locus restriction.
    """

    def __init__(self, fan: Fan, D, B: int, chart: int | None = None, place=INF,
                 height: str = "salberger", jobs: int = 1, max_points: int = 30_000_000):
        D = as_divisor(fan, D)
        _require_gg_big(fan, D)
        if height not in ("salberger", "chart"):
            raise ValueError("height must be 'salberger' or 'chart'")
        self.fan, self.D, self.B = fan, D, B
        self.chart = default_chart(fan) if chart is None else chart
        self.place = parse_place(place)
        self.height = height
        self.values = box_values(B)
        nv = len(self.values)
        n = fan.dim
        total = nv**n
        if total > max_points:
            raise ValueError(f"box has {total} points, more than the limit {max_points}")

        cone = fan.max_cones[self.chart]
        phi = support_function(fan, D)
        # M[s, k] = <m_D(sigma_s), rho_{chart[k]}>
        M = np.array([[sum(a * b for a, b in zip(m, fan.rays[i])) for i in cone] for m in phi.m], dtype=float)
        primes = list(sympy.primerange(2, B + 1))
        logp = np.array([math.log(p) for p in primes])
        val = np.zeros((nv, len(primes)))
        for a, y in enumerate(self.values):
            for b, p in enumerate(primes):
                val[a, b] = _val(y.numerator, p) - _val(y.denominator, p)
        logabs = np.array([_log(abs(y)) for y in self.values])
        logdist = np.array([
            -np.inf if y == 1 else _log(_dist1(y, self.place)) for y in self.values
        ])
        self.sizes = np.array([_size(y) for y in self.values])
        self.one = self.values.index(Fraction(1))

        rest = np.indices((nv,) * (n - 1)).reshape(n - 1, -1).T if n > 1 else np.zeros((1, 0), dtype=int)
        chunk = rest.shape[0]

        def work(i0: int):
            idx = np.concatenate([np.full((chunk, 1), i0), rest], axis=1)
            # finite places: -phi_D(u_p) = max_s -<m_s, u_p>
            fin = None
            arch = None
            for s in range(M.shape[0]):
                lin = np.zeros((chunk, len(primes)))
                arc = np.zeros(chunk)
                for k in range(n):
                    if M[s, k]:
                        lin -= M[s, k] * val[idx[:, k]]
                        arc += M[s, k] * logabs[idx[:, k]]
                fin = lin if fin is None else np.maximum(fin, lin)
                if height == "salberger":
                    arch = arc if arch is None else np.maximum(arch, arc)
                elif s == self.chart:
                    arch = arc
            logH = fin @ logp + arch
            logd = np.minimum(0.0, logdist[idx].max(axis=1))
            return logd, logH

        if jobs > 1:
            with ThreadPoolExecutor(jobs) as ex:
                parts = list(ex.map(work, range(nv)))
        else:
            parts = [work(i0) for i0 in range(nv)]
        self.logd = np.concatenate([p[0] for p in parts])
        self.logH = np.concatenate([p[1] for p in parts])
        self.npoints_total = total
        self._coord_cache = None
        self._size_cache = None

    def index_to_point(self, flat: int) -> RationalPoint:
        nv = len(self.values)
        ys = []
        for _ in range(self.fan.dim):
            flat, r = divmod(flat, nv)
            ys.append(r)
        ys.reverse()
        return RationalPoint(self.chart, tuple(self.values[i] for i in ys))

    def _coords(self) -> np.ndarray:
        if self._coord_cache is None:
            nv = len(self.values)
            self._coord_cache = np.array(
                np.unravel_index(np.arange(self.npoints_total), (nv,) * self.fan.dim)
            ).T
        return self._coord_cache

    def _point_sizes(self) -> np.ndarray:
        if self._size_cache is None:
            self._size_cache = self.sizes[self._coords()].max(axis=1)
        return self._size_cache

    def mask(self, sub_bound: int | None = None, locus: AccumulatingLocus | None = None,
             on_locus: bool = False, near_only: bool = False) -> np.ndarray:
        coords = self._coords()
        keep = np.isfinite(self.logd)  # drops Q0
        if near_only:
            keep &= self.logd < 0
        if sub_bound is not None:
            keep &= self._point_sizes() <= sub_bound
        if locus is not None:
            if locus.sigma0 != self.chart:
                raise ValueError("locus is expressed in a different chart")
            hit = np.zeros(self.npoints_total, dtype=bool)
            for comp in locus.components:
                h = np.ones(self.npoints_total, dtype=bool)
                for k in comp.fixed_positions:
                    h &= coords[:, k] == self.one
                hit |= h
            keep &= hit if on_locus else ~hit
        return keep

    def exact(self, P: RationalPoint) -> Candidate:
        d = distance(P, self.place)
        if self.height == "salberger":
            H = salberger_height(self.fan, self.D, P)
        else:
            H = chart_height(self.fan, self.D, P, self.chart)
        return Candidate(P, d, H)

    def minimum(self, gamma, mask: np.ndarray | None = None, dump: int = 0,
                tol: float = 1e-6) -> LiouvilleResult:
        gamma = Fraction(gamma)
        if mask is None:
            mask = self.mask()
        where = np.flatnonzero(mask)
        bound = int(self._point_sizes()[where].max()) if len(where) else 0
        if len(where) == 0:
            return LiouvilleResult(gamma, bound, self.height, self.place, 0, None)
        vals = float(gamma) * self.logd[where] + self.logH[where]
        lo = vals.min()
        cand = where[vals <= lo + tol]
        exact = [self.exact(self.index_to_point(int(i))) for i in cand]
        best = min(exact, key=lambda c: (c.key(gamma), c.point.y))
        rows = []
        if dump:
            k = min(dump, len(where))
            top = where[np.argpartition(vals, k - 1)[:k]]
            dumped = [self.exact(self.index_to_point(int(i))) for i in top]
            dumped.sort(key=lambda c: (c.key(gamma), c.point.y))
            rows = [c.row(gamma) for c in dumped]
        return LiouvilleResult(gamma, bound, self.height, self.place, len(where), best, rows)


def _val(x: int, p: int) -> int:
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def _dist1(y: Fraction, place) -> Fraction:
    if place == INF:
        return min(Fraction(1), abs(y - 1))
    return min(Fraction(1), padic_abs(y - 1, place))


def liouville_search(
    fan: Fan,
    D: Sequence[int],
    gamma,
    B: int,
    excluded: AccumulatingLocus | None = None,
    place=INF,
    height: str = "salberger",
    chart: int | None = None,
    dump: int = 0,
    jobs: int = 1,
) -> LiouvilleResult:
    """Exact minimum of ``d^gamma H`` over the chart points of the box ``B``.

    Points are ``y`` with every ``y_k = p/q`` reduced, ``1 <= |p| <= B`` and
    ``1 <= q <= B``, other than ``Q0``; points of ``excluded`` are skipped.
    Ties go to the lexicographically smallest point.
    """
    if excluded is not None and chart is None:
        chart = excluded.sigma0
    box = SearchBox(fan, D, B, chart, place, height, jobs)
    return box.minimum(gamma, box.mask(locus=excluded), dump=dump)


def nested_minima(fan: Fan, D, gamma, B: int, excluded=None, place=INF, height="salberger",
                  chart=None, jobs: int = 1) -> list[LiouvilleResult]:
    """Minima over the boxes ``B/4``, ``B/2`` and ``B``."""
    if excluded is not None and chart is None:
        chart = excluded.sigma0
    box = SearchBox(fan, D, B, chart, place, height, jobs)
    return [box.minimum(gamma, box.mask(b, excluded)) for b in _nested(B)]


def _nested(B: int) -> list[int]:
    return sorted({max(1, B // 4), max(1, B // 2), B})


DELTAS = (Fraction(1, 4), Fraction(1, 2), Fraction(1))


@dataclass
class AccumulationReport:
    beta: int
    bounds: list[int]
    on_locus: list[LiouvilleResult]
    off_locus: dict  # delta -> list of LiouvilleResult over the nested boxes
    passing: list[Fraction]
    near_off_locus: dict = field(default_factory=dict)  # same, only points with d < 1

    @property
    def passed(self) -> bool:
        return bool(self.passing)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "bounds": self.bounds,
            "on_locus": [r.to_dict() for r in self.on_locus],
            "off_locus": {str(k): [r.to_dict() for r in v] for k, v in self.off_locus.items()},
            "near_off_locus": {str(k): [r.to_dict() for r in v] for k, v in self.near_off_locus.items()},
            "passing_deltas": [str(x) for x in self.passing],
            "pass": self.passed,
        }


def verify_accumulation(fan: Fan, D, locus: AccumulatingLocus | None = None, B: int = 20,
                        place=INF, height: str = "salberger", jobs: int = 1) -> AccumulationReport:
    """Compare ``d^beta H`` on the locus with ``d^(beta+delta) H`` off it.

    A probed ``delta`` passes when the off-locus minima over the two largest
    nested boxes are exactly equal, i.e. enlarging the box no longer pushes
    the minimum down.  Since ``d`` is capped at 1, far points keep every
    minimum at most 1; the report also lists minima over points with
    ``d < 1`` alone.
    """
    D = as_divisor(fan, D)
    if locus is None:
        try:
            locus = accumulating_locus(fan, D)
        except IsProjectiveSpace as exc:
            raise NotApplicable(str(exc)) from exc
    if fan.r == 1:
        raise NotApplicable("projective space has no proper accumulating locus")
    box = SearchBox(fan, D, B, locus.sigma0, place, height, jobs)
    bounds = _nested(B)
    on = [box.minimum(locus.beta, box.mask(b, locus, on_locus=True)) for b in bounds]
    off = {}
    near = {}
    passing = []
    for delta in DELTAS:
        res = [box.minimum(locus.beta + delta, box.mask(b, locus)) for b in bounds]
        off[delta] = res
        near[delta] = [
            box.minimum(locus.beta + delta, box.mask(b, locus, near_only=True)) for b in bounds
        ]
        if len(res) >= 2 and res[-1].best is not None and res[-2].best is not None:
            if res[-1].best.key(res[-1].gamma) == res[-2].best.key(res[-2].gamma):
                passing.append(delta)
    return AccumulationReport(locus.beta, bounds, on, off, passing, near)
