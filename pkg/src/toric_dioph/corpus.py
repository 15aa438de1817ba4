"""The bundled test fans."""

from __future__ import annotations

from itertools import combinations

from .fan import Fan
from .kleinschmidt import build


def projective_space(n: int) -> Fan:
    """``P^n`` with ray 0 equal to ``-(e_1 + ... + e_n)`` and ray ``i`` equal to ``e_i``."""
    rays = [[-1] * n] + [[int(k == i) for k in range(n)] for i in range(n)]
    cones = [list(c) for c in combinations(range(n + 1), n)]
    return Fan(n, rays, cones, name=f"P{n}")


def s7() -> Fan:
    """``P^2`` blown up in the three coordinate points."""
    return Fan(
        2,
        [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]],
        [[0, 4], [4, 1], [1, 2], [2, 3], [3, 0]],
        name="S7",
    )


def s6() -> Fan:
    """The hexagon: ``P^2`` blown up in three points in general position."""
    return Fan(
        2,
        [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, -1]],
        [[0, 4], [4, 1], [1, 2], [2, 5], [5, 3], [3, 0]],
        name="S6",
    )


def hirzebruch(a: int) -> Fan:
    f = build(1, 1, [a]).fan
    return Fan(f.dim, f.rays, f.max_cones, name=f"F{a}")


def corpus() -> dict[str, Fan]:
    k1 = build(2, 1, [2]).fan
    k2 = build(1, 2, [0, 1]).fan
    return {
        "P2": projective_space(2),
        "P3": projective_space(3),
        "S7": s7(),
        "S6": s6(),
        "F0": hirzebruch(0),
        "F1": hirzebruch(1),
        "F2": hirzebruch(2),
        "K(2,1,[2])": k1,
        "K(1,2,[0,1])": k2,
    }


KLEINSCHMIDT_PARAMS = {
    "F0": (1, 1, [0]),
    "F1": (1, 1, [1]),
    "F2": (1, 1, [2]),
    "K(2,1,[2])": (2, 1, [2]),
    "K(1,2,[0,1])": (1, 2, [0, 1]),
}
