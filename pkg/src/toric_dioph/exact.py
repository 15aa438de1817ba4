"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding Python ints (or ``Fraction`` where
noted).  Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import flint

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[int]]) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return vector_gcd(v) == 1


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form with its unimodular transform.

    Returns ``(H, U)`` with ``U @ M == H``, ``det U == ±1`` and ``H`` in
    echelon form: pivot columns strictly increase down the rows, pivots are
    positive, entries above a pivot lie in ``[0, pivot)`` and zero rows sit at
    the bottom.  The form is unique for the row lattice of ``M``.
    """
    H = [list(map(int, row)) for row in M]
    m = len(H)
    ncols = len(H[0]) if m else 0
    U = identity(m)
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        # gcd-combine every lower entry of this column into the pivot row
        for i in range(row + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[row][col], H[i][col]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            H[row], H[i] = (
                [x * s + y * t for s, t in zip(H[row], H[i])],
                [-q * s + p * t for s, t in zip(H[row], H[i])],
            )
            U[row], U[i] = (
                [x * s + y * t for s, t in zip(U[row], U[i])],
                [-q * s + p * t for s, t in zip(U[row], U[i])],
            )
        pivot = H[row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            H[row] = [-s for s in H[row]]
            U[row] = [-s for s in U[row]]
            pivot = -pivot
        for i in range(row):
            q = H[i][col] // pivot
            if q:
                H[i] = [s - q * t for s, t in zip(H[i], H[row])]
                U[i] = [s - q * t for s, t in zip(U[i], U[row])]
        row += 1
    return H, U


def is_hnf(H: Sequence[Sequence[int]]) -> bool:
    last = -1
    seen_zero = False
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        j = nz[0]
        if j <= last or row[j] <= 0:
            return False
        if any(not 0 <= H[k][j] < row[j] for k in range(i)):
            return False
        last = j
    return True


def kernel_lattice(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Saturated integer basis of ``{v : M v = 0}``, returned as rows in HNF.

    ``ncols`` is only needed when ``M`` has no rows.
    """
    if not M:
        return identity(ncols or 0)
    k = len(M[0])
    H, U = hermite_normal_form(transpose(M))
    basis = [U[i] for i in range(k) if not any(H[i])]
    if not basis:
        return []
    canon, _ = hermite_normal_form(basis)
    return [row for row in canon if any(row)]


def rank(M: Sequence[Sequence]) -> int:
    """Exact rank of an integer or rational matrix."""
    if not M or not M[0]:
        return 0
    rows = [list(r) for r in M]
    if any(isinstance(x, Fraction) for r in rows for x in r):
        den = 1
        for r in rows:
            for x in r:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        rows = [[int(Fraction(x) * den) for x in r] for r in rows]
    return int(flint.fmpz_mat(rows).rank())


def det(M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 1
    return int(flint.fmpz_mat([list(map(int, r)) for r in M]).det())


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square nonsingular system ``A x = b`` over the rationals."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def unimodular_inverse(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer inverse of a matrix with determinant ±1."""
    n = len(A)
    d = det(A)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={d})")
    cols = [solve(A, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[int(cols[j][i]) for j in range(n)] for i in range(n)]


# --------------------------------------------------------------------------
# exact simplex


class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status: str, x: list[Fraction] | None, value: Fraction | None):
        self.status = status  # "optimal", "infeasible", "unbounded"
        self.x = x
        self.value = value

    def __repr__(self) -> str:
        return f"LPResult(status={self.status!r}, value={self.value!r})"


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    p = T[r][c]
    T[r] = [x / p for x in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [x - f * y for x, y in zip(row, T[r])]
    basis[r] = c


def _bland(T: list[list[Fraction]], basis: list[int], allowed: int) -> str:
    """Minimise the objective in the last row of ``T`` with Bland's rule.

    Columns ``>= allowed`` (besides the rhs) never enter the basis.
    """
    m = len(T) - 1
    while True:
        obj = T[-1]
        entering = next((j for j in range(allowed) if obj[j] < 0), None)
        if entering is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Minimise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Two-phase tableau simplex over ``Fraction`` with Bland's anti-cycling
    rule, so it always terminates and never rounds.
    """
    nvar = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(x) for x in a], Fraction(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(x) for x in a], Fraction(b), False))
    m = len(rows)
    nslack = sum(1 for _, _, ub in rows if ub)
    ncols = nvar + nslack + m  # structural, slack, artificial
    T: list[list[Fraction]] = []
    s = 0
    for i, (a, b, ub) in enumerate(rows):
        row = a + [Fraction(0)] * (nslack + m) + [b]
        if ub:
            row[nvar + s] = Fraction(1)
            s += 1
        if b < 0:
            row = [-x for x in row]
        row[nvar + nslack + i] = Fraction(1)
        T.append(row)
    basis = [nvar + nslack + i for i in range(m)]
    # phase 1: minimise the sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for row in T:
        obj = [o - x for o, x in zip(obj, row)]
    for i in range(m):
        obj[nvar + nslack + i] = Fraction(0)
    T.append(obj)
    _bland(T, basis, nvar + nslack)
    if T[-1][-1] != 0:
        return LPResult("infeasible", None, None)
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nvar + nslack:
            j = next((j for j in range(nvar + nslack) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)
    T.pop()
    # phase 2
    obj = [Fraction(x) for x in c] + [Fraction(0)] * (nslack + m + 1)
    for i, bv in enumerate(basis):
        if obj[bv] != 0:
            f = obj[bv]
            obj = [o - f * x for o, x in zip(obj, T[i])]
    T.append(obj)
    status = _bland(T, basis, nvar + nslack)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = [Fraction(0)] * ncols
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    x = x[:nvar]
    return LPResult("optimal", x, dot(c, x))


def lp_strict_feasible(
    A: Sequence[Sequence[int]], b: Sequence
) -> tuple[bool, list[Fraction] | None]:
    """Decide whether ``A x > b`` (componentwise) has a rational solution.

    Maximises a uniform slack ``t <= 1`` with ``A x - t >= b`` over free
    ``x``; the system is strictly feasible iff the optimum is positive.  The
    witness ``x`` is returned when it is.
    """
    n = len(A[0]) if A else 0
    # variables: x+ (n), x- (n), t
    A_ub = []
    b_ub = []
    for row, bi in zip(A, b):
        A_ub.append([-a for a in row] + list(row) + [1])
        b_ub.append(-Fraction(bi))
    A_ub.append([0] * (2 * n) + [1])
    b_ub.append(Fraction(1))
    res = linprog_exact([0] * (2 * n) + [-1], A_ub, b_ub)
    if res.status != "optimal" or -res.value <= 0:
        return False, None
    x = [res.x[i] - res.x[n + i] for i in range(n)]
    return True, x


def in_cone(generators: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether ``v`` is a nonnegative rational combination of ``generators``."""
    if not generators:
        return not any(v)
    A_eq = transpose(generators)
    res = linprog_exact([0] * len(generators), A_eq=A_eq, b_eq=list(v))
    return res.status == "optimal"
