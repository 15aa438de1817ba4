"""Fans of smooth complete toric varieties.

A fan is given by its primitive rays in ``N = Z^n`` and its maximal cones,
each a set of ``n`` ray indices.  Rays and cones keep the order they were
given in; everything downstream refers to rays by that index.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from . import exact


class FanError(ValueError):
    """Base class for fan validation failures."""

    kind = "FanError"

    def __init__(self, index, message: str):
        super().__init__(message)
        self.index = index

    def to_dict(self) -> dict:
        return {"error": self.kind, "index": self.index, "message": str(self)}


class RaysNotPrimitive(FanError):
    kind = "RaysNotPrimitive"


class ConeNotUnimodular(FanError):
    kind = "ConeNotUnimodular"


class FacetUnpaired(FanError):
    kind = "FacetUnpaired"


class PointNotCovered(FanError):
    kind = "PointNotCovered"


class NotSmoothComplete(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(int(i) for i in c) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.dim < 1:
            raise ValueError("dim must be positive")
        for k, r in enumerate(rays):
            if len(r) != self.dim:
                raise ValueError(f"ray {k} has length {len(r)}, expected {self.dim}")
            if not any(r):
                raise ValueError(f"ray {k} is zero")
        for k, c in enumerate(cones):
            if len(c) != self.dim or len(set(c)) != self.dim:
                raise ValueError(f"max cone {k} must list {self.dim} distinct rays")
            if any(not 0 <= i < len(rays) for i in c):
                raise ValueError(f"max cone {k} refers to a missing ray")

    # -- basic data --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.dim

    @property
    def nrays(self) -> int:
        return len(self.rays)

    @property
    def r(self) -> int:
        """Picard rank, ``#rays - n``."""
        return len(self.rays) - self.dim

    @cached_property
    def ray_matrix(self) -> list[list[int]]:
        """The ``n x (n+r)`` matrix whose columns are the rays."""
        return exact.transpose(self.rays)

    @cached_property
    def cone_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(c) for c in self.max_cones)

    @cached_property
    def cone_dets(self) -> tuple[int, ...]:
        return tuple(exact.det(exact.transpose([self.rays[i] for i in c])) for c in self.max_cones)

    @cached_property
    def dual_bases(self) -> tuple[list[list[int]], ...]:
        """Per cone, the rows ``rho_i^dual`` dual to the cone's rays, in cone order."""
        self.require_smooth()
        return tuple(
            exact.unimodular_inverse(exact.transpose([self.rays[i] for i in c]))
            for c in self.max_cones
        )

    def cone_coords(self, k: int, v: Sequence) -> list:
        """Coordinates of ``v`` in the basis of rays of cone ``k`` (cone order)."""
        return exact.matvec(self.dual_bases[k], v)

    # -- checks ------------------------------------------------------------

    @cached_property
    def report(self) -> "ValidationReport":
        return validate(self)

    def require_smooth(self) -> None:
        bad = [k for k, d in enumerate(self.cone_dets) if d not in (1, -1)]
        if bad or any(not exact.is_primitive(r) for r in self.rays):
            raise NotSmoothComplete("fan is not smooth")

    def require_smooth_complete(self) -> None:
        rep = self.report
        if not (rep.smooth and rep.complete):
            raise NotSmoothComplete(
                "operation needs a smooth complete fan: "
                + "; ".join(str(p) for p in rep.problems)
            )

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict, name: str = "") -> "Fan":
        for key in ("dim", "rays", "max_cones"):
            if key not in d:
                raise ValueError(f"fan JSON is missing field '{key}'")
        return cls(int(d["dim"]), d["rays"], d["max_cones"], name=name)

    @classmethod
    def from_json(cls, s: str, name: str = "") -> "Fan":
        return cls.from_dict(json.loads(s), name=name)

    def fan_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def transform(self, U: Sequence[Sequence[int]]) -> "Fan":
        """Apply a lattice automorphism ``U`` (``det = ±1``) to every ray."""
        if exact.det(U) not in (1, -1):
            raise ValueError("transform must be unimodular")
        return Fan(self.dim, [exact.matvec(U, r) for r in self.rays], self.max_cones, name=self.name)


@dataclass
class ValidationReport:
    smooth: bool
    complete: bool
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete

    def to_dict(self) -> dict:
        return {
            "smooth": self.smooth,
            "complete": self.complete,
            "problems": [p.to_dict() for p in self.problems],
        }


def _random_rational_vector(rng: random.Random, n: int) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(n)]
        if any(v):
            return v


def validate(fan: Fan, samples: int = 100, seed: int = 0, strict: bool = False) -> ValidationReport:
    """Check smoothness and completeness.

    Completeness is facet pairing together with ``samples`` seeded random
    rational points, each of which must land in some maximal cone.  With
    ``strict=True`` the first problem is raised instead of reported.
    """
    problems: list[FanError] = []
    for k, r in enumerate(fan.rays):
        if not exact.is_primitive(r):
            problems.append(RaysNotPrimitive(k, f"ray {k} {list(r)} is not primitive"))
    nonsingular = []
    for k, d in enumerate(fan.cone_dets):
        if d not in (1, -1):
            problems.append(ConeNotUnimodular(k, f"max cone {k} has determinant {d}"))
        if d != 0:
            nonsingular.append(k)
    smooth = not problems

    walls: dict[frozenset, list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for face in combinations(sorted(c), fan.dim - 1):
            walls.setdefault(frozenset(face), []).append(k)
    paired = True
    for face, owners in sorted(walls.items(), key=lambda kv: sorted(kv[0])):
        if len(owners) != 2:
            paired = False
            problems.append(
                FacetUnpaired(
                    sorted(face),
                    f"wall {sorted(face)} lies in {len(owners)} max cone(s), expected 2",
                )
            )

    covered = True
    rng = random.Random(seed)
    mats = {
        k: exact.transpose([fan.rays[i] for i in fan.max_cones[k]]) for k in nonsingular
    }
    for s in range(samples):
        v = _random_rational_vector(rng, fan.dim)
        if not any(min(exact.solve(mats[k], v)) >= 0 for k in nonsingular):
            covered = False
            problems.append(PointNotCovered(s, f"sample point {s} {[str(x) for x in v]} is in no max cone"))
            break
    rep = ValidationReport(smooth=smooth, complete=paired and covered, problems=problems)
    if strict and problems:
        raise problems[0]
    return rep


def locate_cone(fan: Fan, v: Sequence) -> tuple[int, list]:
    """First maximal cone containing ``v`` and the coordinates of ``v`` in it.

    Coordinates follow the order of ``fan.max_cones[k]``.  They are ints for
    lattice points and Fractions otherwise.
    """
    for k in range(len(fan.max_cones)):
        coords = fan.cone_coords(k, v)
        if all(x >= 0 for x in coords):
            return k, coords
    raise NotSmoothComplete(f"vector {list(v)} lies in no maximal cone")


@dataclass(frozen=True)
class Wall:
    rays: tuple[int, ...]
    cones: tuple[int, int]
    completing: tuple[int, int]
    relation: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "rays": list(self.rays),
            "cones": list(self.cones),
            "completing": list(self.completing),
            "relation": list(self.relation),
        }


def walls(fan: Fan) -> list[Wall]:
    """Codimension-one cones with their wall relations ``u + u' + sum b_i v_i = 0``."""
    fan.require_smooth_complete()
    owners: dict[tuple, list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for face in combinations(sorted(c), fan.dim - 1):
            owners.setdefault(face, []).append(k)
    out = []
    for face in sorted(owners):
        k1, k2 = owners[face]
        (u,) = fan.cone_sets[k1] - set(face)
        (u2,) = fan.cone_sets[k2] - set(face)
        coords = fan.cone_coords(k1, fan.rays[u2])
        rel = [0] * fan.nrays
        for i, x in zip(fan.max_cones[k1], coords):
            rel[i] = -x
        rel[u2] = 1
        assert rel[u] == 1
        out.append(Wall(face, (k1, k2), (u, u2), tuple(rel)))
    return out


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> list[list[int]]:
    """A random element of GL_n(Z) built from elementary moves."""
    U = exact.identity(n)
    for _ in range(steps):
        move = rng.randrange(3) if n > 1 else 2
        if move == 0:
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif move == 1:
            i, j = rng.sample(range(n), 2)
            U[i], U[j] = U[j], U[i]
        else:
            i = rng.randrange(n)
            U[i] = [-a for a in U[i]]
    return U
