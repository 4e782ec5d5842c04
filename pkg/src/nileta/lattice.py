"""Even positive definite lattices over Z and their discriminant groups.

All arithmetic here is exact: integer matrices, Fraction vectors, and
values in Q/Z. The discriminant group of a rescaled lattice is enumerated
through a Smith normal form of the Gram matrix, which yields a dual basis
u_j with d*d_j*u_j running through a basis of the original lattice; the
representative box {sum k_j u_j : 1 <= k_j <= |d*d_j|} then covers every
class exactly once.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import (
    NotEvenDiagonal,
    NotInDual,
    NotPositiveDefinite,
    NotSymmetric,
    OrderOverflow,
    Singular,
)
from .qmodz import QmodZ

IntMatrix = tuple[tuple[int, ...], ...]

DEFAULT_ENUM_CAP = 10**7


def _enum_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("NILETA_ENUM_CAP", DEFAULT_ENUM_CAP))


def _as_int_matrix(gram: Sequence[Sequence[int]]) -> IntMatrix:
    rows = tuple(tuple(int(x) for x in row) for row in gram)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ValueError("expected a nonempty square integer matrix")
    return rows


def _int_det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass(frozen=True)
class EvenLattice:
    """An even positive definite lattice, presented by its Gram matrix."""

    gram: IntMatrix
    det: int

    @property
    def rank(self) -> int:
        return len(self.gram)

    def bilinear(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        g = self.gram
        return sum((x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    def quadratic(self, x: Sequence[Fraction]) -> Fraction:
        return self.bilinear(x, x) / 2


@dataclass(frozen=True)
class RescaledLattice:
    """The same underlying module with the bilinear form scaled by a twist d."""

    base: EvenLattice
    twist: int
    gram_d: IntMatrix = field(init=False)

    def __post_init__(self):
        if self.twist == 0:
            raise ValueError("twist must be nonzero")
        scaled = tuple(tuple(self.twist * x for x in row) for row in self.base.gram)
        object.__setattr__(self, "gram_d", scaled)


@dataclass(frozen=True)
class SmithDecomposition:
    """Unimodular S, T with S * M * T = diag(d_1, ..., d_r), d_1 | d_2 | ..."""

    s: IntMatrix
    t: IntMatrix
    diag: tuple[int, ...]


@dataclass(frozen=True)
class DiscriminantGroup:
    """dual(L_d)/L_d with one representative vector per class.

    Representatives are coordinate vectors with respect to the basis of the
    base lattice; class j of the box has coordinates sum_j k_j/(d*d_j) * t_j
    for the Smith basis columns t_j.
    """

    order: int
    invariant_factors: tuple[int, ...]
    representatives: tuple[tuple[Fraction, ...], ...]
    lattice: EvenLattice
    twist: int


def validate_even_lattice(gram: Sequence[Sequence[int]]) -> EvenLattice:
    """Certify a Gram matrix as even positive definite, or raise a diagnostic.

    Raises NotSymmetric, NotEvenDiagonal, or NotPositiveDefinite naming the
    offending index or minor.
    """
    rows = _as_int_matrix(gram)
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(i, j, rows[i][j], rows[j][i])
    for i in range(n):
        if rows[i][i] % 2:
            raise NotEvenDiagonal(i, rows[i][i])
    minor = 1
    for k in range(1, n + 1):
        minor = _int_det([row[:k] for row in rows[:k]])
        if minor <= 0:
            raise NotPositiveDefinite(k, minor)
    return EvenLattice(gram=rows, det=minor)


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Diagonalize a nonsingular integer matrix by unimodular row/column operations.

    Pivoting always selects a minimal nonzero |entry| of the remaining block,
    so quotients shrink quickly; entries of the working matrix stay exact ints.
    The diagonal is normalized positive.
    """
    a = [list(row) for row in _as_int_matrix(m)]
    n = len(a)
    if _int_det(a) == 0:
        raise Singular("matrix has determinant zero")
    s = [[int(i == j) for j in range(n)] for i in range(n)]
    t = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_sub(i: int, k: int, q: int):
        for j in range(n):
            a[i][j] -= q * a[k][j]
            s[i][j] -= q * s[k][j]

    def col_sub(j: int, k: int, q: int):
        for i in range(n):
            a[i][j] -= q * a[i][k]
            t[i][j] -= q * t[i][k]

    def move_pivot(k: int):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        _, bi, bj = best
        if bi != k:
            a[bi], a[k] = a[k], a[bi]
            s[bi], s[k] = s[k], s[bi]
        if bj != k:
            for row in a:
                row[bj], row[k] = row[k], row[bj]
            for row in t:
                row[bj], row[k] = row[k], row[bj]

    for k in range(n):
        while True:
            move_pivot(k)
            for i in range(k + 1, n):
                q = a[i][k] // a[k][k]
                if q:
                    row_sub(i, k, q)
            if any(a[i][k] for i in range(k + 1, n)):
                continue
            for j in range(k + 1, n):
                q = a[k][j] // a[k][k]
                if q:
                    col_sub(j, k, q)
            if any(a[k][j] for j in range(k + 1, n)):
                continue
            p = a[k][k]
            offender = next(
                ((i, j) for i in range(k + 1, n) for j in range(k + 1, n) if a[i][j] % p),
                None,
            )
            if offender is None:
                break
            # pull the non-divisible row up so the next pivot shrinks
            oi = offender[0]
            for j in range(n):
                a[k][j] += a[oi][j]
                s[k][j] += s[oi][j]

    for k in range(n):
        if a[k][k] < 0:
            for j in range(n):
                a[k][j] = -a[k][j]
                s[k][j] = -s[k][j]

    diag = tuple(a[k][k] for k in range(n))
    for k in range(n - 1):
        if diag[k + 1] % diag[k]:
            raise AssertionError(f"divisor chain broken: {diag}")
    if abs(_int_det(s)) != 1 or abs(_int_det(t)) != 1:
        raise AssertionError("transformation matrices are not unimodular")
    return SmithDecomposition(
        s=tuple(tuple(row) for row in s),
        t=tuple(tuple(row) for row in t),
        diag=diag,
    )


def dual_gram_inverse(lattice: EvenLattice) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of the Gram matrix; its columns are the dual basis."""
    n = lattice.rank
    a = [[Fraction(x) for x in row] for row in lattice.gram]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        inv[k], inv[piv] = inv[piv], inv[k]
        scale = a[k][k]
        a[k] = [x / scale for x in a[k]]
        inv[k] = [x / scale for x in inv[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                factor = a[i][k]
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
                inv[i] = [x - factor * y for x, y in zip(inv[i], inv[k])]
    return tuple(tuple(row) for row in inv)


def _box_sides(lattice: EvenLattice, d: int) -> tuple[SmithDecomposition, list[int]]:
    snf = smith_normal_form(lattice.gram)
    return snf, [abs(d) * dj for dj in snf.diag]


def discriminant_group(
    lattice: EvenLattice, d: int, cap: int | None = None
) -> DiscriminantGroup:
    """Enumerate dual(L_d)/L_d for the form scaled by the nonzero twist d.

    The group order is |d|^r * det(gram); enumeration beyond the cap
    (default 10^7, overridable via NILETA_ENUM_CAP) raises OrderOverflow.
    """
    if d == 0:
        raise ValueError("twist must be nonzero")
    r = lattice.rank
    order = abs(d) ** r * lattice.det
    limit = _enum_cap(cap)
    if order > limit:
        raise OrderOverflow(order, limit)
    snf, sides = _box_sides(lattice, d)
    cols = [[snf.t[i][j] for i in range(r)] for j in range(r)]
    reps = []
    for ks in product(*(range(1, side + 1) for side in sides)):
        vec = tuple(
            sum(Fraction(ks[j], d * snf.diag[j]) * cols[j][i] for j in range(r))
            for i in range(r)
        )
        reps.append(vec)
    factors = tuple(side for side in sides if side > 1)
    return DiscriminantGroup(
        order=order,
        invariant_factors=factors,
        representatives=tuple(reps),
        lattice=lattice,
        twist=d,
    )


def qbar(lattice: EvenLattice, d: int, rho: Sequence[Fraction]) -> QmodZ:
    """Discriminant quadratic form value d*Q(rho) mod Z for rho in dual(L_d).

    Membership in the dual is checked exactly: d*B*rho must be integral.
    """
    if d == 0:
        raise ValueError("twist must be nonzero")
    vec = [Fraction(x) for x in rho]
    if len(vec) != lattice.rank:
        raise ValueError("vector length does not match lattice rank")
    for i in range(lattice.rank):
        pairing = d * sum(Fraction(lattice.gram[i][j]) * vec[j] for j in range(lattice.rank))
        if pairing.denominator != 1:
            raise NotInDual(i)
    return QmodZ.of(d * lattice.quadratic(vec))


def discriminant_sum_fraction(lattice: EvenLattice, d: int, cap: int | None = None) -> tuple[Fraction, int]:
    """Sum of canonical lifts of qbar over the representative box, plus the order.

    Enumerates the same box as discriminant_group but keeps the arithmetic in
    scaled integers: with t_j the Smith basis columns and L = lcm(d_j), each
    class value is (k^T Ghat k) / (2 d L^2) where Ghat is an integer matrix.
    """
    if d == 0:
        raise ValueError("twist must be nonzero")
    r = lattice.rank
    order = abs(d) ** r * lattice.det
    limit = _enum_cap(cap)
    if order > limit:
        raise OrderOverflow(order, limit)
    snf, sides = _box_sides(lattice, d)
    lcm = math.lcm(*snf.diag)
    g = lattice.gram
    # G[i][j] = t_i . B . t_j, scaled so the class value has denominator 2*d*lcm^2
    ghat = [
        [
            (lcm // snf.diag[p]) * (lcm // snf.diag[q])
            * sum(snf.t[i][p] * g[i][j] * snf.t[j][q] for i in range(r) for j in range(r))
            for q in range(r)
        ]
        for p in range(r)
    ]
    mm = 2 * abs(d) * lcm * lcm
    negate = d < 0
    total = 0
    ks = [1] * r
    # odometer enumeration with an incremental quadratic form in the last slot
    last = r - 1
    gl = ghat[last][last]
    while True:
        lin = sum(ghat[last][i] * ks[i] for i in range(last))
        base = sum(
            ghat[i][j] * ks[i] * ks[j] for i in range(last) for j in range(last)
        )
        val = base + 2 * lin + gl  # k_last = 1
        for klast in range(1, sides[last] + 1):
            n = -val if negate else val
            total += n % mm
            val += gl * (2 * klast + 1) + 2 * lin
        # advance the outer odometer
        pos = last - 1
        while pos >= 0 and ks[pos] == sides[pos]:
            ks[pos] = 1
            pos -= 1
        if pos < 0:
            break
        ks[pos] += 1
    return Fraction(total, mm), order
