"""Basis reduction and integer normal forms.

lll_reduce runs the LLL algorithm entirely in exact arithmetic, over Z or over
the norm-Euclidean rings Z[i] and Z[zeta_3] (size reduction by ring-integer
rounding of the Gram-Schmidt coefficients, Lovasz condition on algebraic
norms). hnf/snf are exact integer normal forms carrying their unimodular
transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .lattice_core import BasisMatrix, RankError, Rat
from .rings import (
    INTEGERS,
    RingDescriptor,
    RingElement,
    hdot,
    hnorm_sq,
    ring_by_kind,
)

DEFAULT_DELTA = Fraction(99, 100)  # matches the delta used for both Z and Z[i]


class ParameterError(ValueError):
    """Reduction parameter outside its admissible range."""


@dataclass(frozen=True)
class OKMatrix:
    """Matrix with entries in a norm-Euclidean ring (or its fraction field)."""

    rows: tuple
    ring: RingDescriptor

    def __post_init__(self):
        rows = tuple(tuple(e for e in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for row in rows:
            for e in row:
                if e.kind != self.ring.kind:
                    raise ValueError("entry ring does not match matrix ring")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def underlying_z_rows(self) -> list:
        """Z-generators of the module as rational row vectors.

        Each ring row b contributes b and omega*b, written in the per-coordinate
        (1, omega) basis, so a rank-r module yields 2r rows of length 2*ncols.
        """
        omega = RingElement(0, 1, self.ring.kind)
        out = []
        for row in self.rows:
            for mult in (None, omega):
                r = row if mult is None else tuple(mult * e for e in row)
                flat = []
                for e in r:
                    flat.extend([e.a, e.b])
                out.append(tuple(flat))
        return out

    def to_json(self) -> dict:
        return {
            "ring": self.ring.kind,
            "rows": [[e.to_json() for e in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OKMatrix":
        ring = ring_by_kind(obj["ring"])
        rows = tuple(
            tuple(RingElement.from_json(e) for e in row) for row in obj["rows"]
        )
        return cls(rows, ring)


def _ring_rows_from_basis(basis: BasisMatrix, ring: RingDescriptor) -> list:
    return [
        [RingElement(x, 0, ring.kind) for x in row] for row in basis.rows
    ]


def _gs_row(b: list, ortho: list, i: int):
    """Gram-Schmidt data for row i against the already-orthogonalized prefix."""
    v = list(b[i])
    mu_row = []
    for j in range(i):
        denom = hnorm_sq(ortho[j])
        c = hdot(b[i], ortho[j])
        c = RingElement(c.a / denom, c.b / denom, c.kind)
        mu_row.append(c)
        v = [x - c * y for x, y in zip(v, ortho[j])]
    return v, mu_row


def _lll_rows(rows: list, delta: Fraction, ring: RingDescriptor):
    """Exact LLL on a list of ring-element row vectors; returns (rows, transform)."""
    mk = ring.euclidean_minimum
    if not (mk < delta < 1):
        raise ParameterError(
            f"delta must lie in ({mk}, 1) for ring {ring.kind}, got {delta}"
        )
    n = len(rows)
    b = [list(r) for r in rows]
    one = RingElement(1, 0, ring.kind)
    zero = RingElement(0, 0, ring.kind)
    u = [[one if i == j else zero for j in range(n)] for i in range(n)]

    ortho: List[list] = [None] * n
    mu: List[list] = [None] * n

    def refresh(i):
        ortho[i], mu[i] = _gs_row(b, ortho, i)
        if hnorm_sq(ortho[i]) == 0:
            raise RankError("rows are dependent over the ring's fraction field")

    for i in range(n):
        refresh(i)

    k = 1
    while k < n:
        # size-reduce row k against rows k-1 .. 0
        for j in range(k - 1, -1, -1):
            q = mu[k][j].round()
            if not q.is_zero():
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                refresh(k)
        lhs = hnorm_sq(ortho[k]) + mu[k][k - 1].norm() * hnorm_sq(ortho[k - 1])
        if lhs >= delta * hnorm_sq(ortho[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            for i in range(k - 1, n):
                refresh(i)
            k = max(k - 1, 1)
    return b, u


def lll_reduce(basis, delta=DEFAULT_DELTA, ring: RingDescriptor = INTEGERS):
    """LLL-reduce a basis over the given ring.

    Accepts a BasisMatrix (ring must be the integers) or an OKMatrix; returns
    (reduced, transform) of the same flavour. transform @ input == reduced, and
    the transform is unimodular over the ring (determinant a ring unit).
    """
    delta = delta if isinstance(delta, Fraction) else Fraction(delta).limit_denominator(10**6)
    if isinstance(basis, BasisMatrix):
        if ring.kind != INTEGERS.kind:
            raise ValueError("BasisMatrix input implies the integer ring")
        rows = _ring_rows_from_basis(basis, ring)
        red, u = _lll_rows(rows, delta, ring)
        red_mat = BasisMatrix([[e.a for e in row] for row in red])
        u_mat = BasisMatrix([[e.a for e in row] for row in u])
        return red_mat, u_mat
    if isinstance(basis, OKMatrix):
        red, u = _lll_rows([list(r) for r in basis.rows], delta, basis.ring)
        return (
            OKMatrix(tuple(tuple(r) for r in red), basis.ring),
            OKMatrix(tuple(tuple(r) for r in u), basis.ring),
        )
    raise TypeError("basis must be a BasisMatrix or an OKMatrix")


def lll_reduce_rows(rows: Sequence[Sequence[RingElement]], delta, ring: RingDescriptor):
    """LLL on raw ring-element rows (not necessarily square); same contract."""
    delta = delta if isinstance(delta, Fraction) else Fraction(delta).limit_denominator(10**6)
    red, u = _lll_rows([list(r) for r in rows], delta, ring)
    return [tuple(r) for r in red], [tuple(r) for r in u]


def is_reduced(rows, delta, ring: RingDescriptor) -> bool:
    """Exact check of the two reduction conditions (size reduction + Lovasz)."""
    delta = delta if isinstance(delta, Fraction) else Fraction(delta).limit_denominator(10**6)
    b = [list(r) for r in rows]
    ortho, mu = [], []
    for i in range(len(b)):
        v, mu_row = _gs_row(b, ortho, i)
        ortho.append(v)
        mu.append(mu_row)
    mk = ring.euclidean_minimum
    for i in range(len(b)):
        for j in range(i):
            if mu[i][j].norm() > mk:
                return False
    for k in range(1, len(b)):
        lhs = hnorm_sq(ortho[k]) + mu[k][k - 1].norm() * hnorm_sq(ortho[k - 1])
        if lhs < delta * hnorm_sq(ortho[k - 1]):
            return False
    return True


def check_reduced_bound(basis, delta, ring: RingDescriptor = INTEGERS) -> bool:
    """Norm bound ||b_j|| <= (1/(delta - m_K))^(j-1) (det L)^(1/m) for all j.

    Evaluated exactly by comparing 2m-th powers, with det L the product of the
    Gram-Schmidt norms over the ring.
    """
    delta = delta if isinstance(delta, Fraction) else Fraction(delta).limit_denominator(10**6)
    if isinstance(basis, BasisMatrix):
        rows = _ring_rows_from_basis(basis, ring)
    elif isinstance(basis, OKMatrix):
        rows, ring = [list(r) for r in basis.rows], basis.ring
    else:
        rows = [list(r) for r in basis]
    m = len(rows)
    ortho = []
    for i in range(m):
        v, _ = _gs_row(rows, ortho, i)
        ortho.append(v)
    det_sq = Fraction(1)
    for v in ortho:
        det_sq *= hnorm_sq(v)
    c_sq = 1 / (delta - ring.euclidean_minimum) ** 2
    for j in range(m):
        # ||b_j||^(2m) <= c^(2m*j) * det_sq, all exact rationals
        if hnorm_sq(rows[j]) ** m > c_sq ** (m * j) * det_sq:
            return False
    return True


# ---------------------------------------------------------------------------
# Integer normal forms
# ---------------------------------------------------------------------------


def hnf(a: Sequence[Sequence[int]]) -> Tuple[list, list]:
    """Row-style Hermite normal form with transform.

    Returns (H, U) where H is the canonical upper-triangular HNF restricted to
    its nonzero rows and U is a full unimodular matrix with U @ A equal to H
    padded with zero rows. Pivots are positive and entries above each pivot are
    reduced into [0, pivot).
    """
    rows = [list(map(int, r)) for r in a]
    n = len(rows)
    ncols = len(rows[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    r = 0
    for c in range(ncols):
        if r == n:
            break
        # clear column c below row r by Euclidean row operations
        while True:
            nz = [i for i in range(r, n) if rows[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(rows[i][c]), i))
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, n):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if rows[r][c] != 0:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    return [rows[i] for i in range(r)], u


def hnf_rational(rows: Sequence[Sequence[Fraction]]) -> tuple:
    """Canonical HNF of a rational generating set, for lattice-equality tests.

    Clears denominators, takes the integer HNF and rescales back, so two
    generating sets span the same lattice iff their results are equal.
    """
    rows = [[Rat(x) for x in row] for row in rows]
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        return ()
    lcm = 1
    for row in rows:
        for x in row:
            d = x.denominator
            lcm = lcm * d // math.gcd(lcm, d)
    ints = [[int(x * lcm) for x in row] for row in rows]
    h, _ = hnf(ints)
    return tuple(tuple(Fraction(x, lcm) for x in row) for row in h)


def snf(a: Sequence[Sequence[int]]) -> Tuple[list, list, list]:
    """Smith normal form with transforms: U @ A @ V = S, d1 | d2 | ...

    U and V are unimodular; S is diagonal (rectangular-safe) with nonnegative
    invariant factors satisfying the divisibility chain.
    """
    s = [list(map(int, r)) for r in a]
    n = len(s)
    m = len(s[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        s[dst] = [x - q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in s:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(n, m):
        # find a nonzero pivot at or after (t, t)
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if s[i][j] != 0:
                    if piv is None or abs(s[i][j]) < abs(s[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear row and column t
            for i in range(t + 1, n):
                if s[i][t] != 0:
                    addmul_row(i, t, s[i][t] // s[t][t])
            for j in range(t + 1, m):
                if s[t][j] != 0:
                    addmul_col(j, t, s[t][j] // s[t][t])
            nz = [i for i in range(t + 1, n) if s[i][t] != 0]
            nzc = [j for j in range(t + 1, m) if s[t][j] != 0]
            if nz:
                i = min(nz, key=lambda i: abs(s[i][t]))
                swap_rows(t, i)
                continue
            if nzc:
                j = min(nzc, key=lambda j: abs(s[t][j]))
                swap_cols(t, j)
                continue
            # divisibility: s[t][t] must divide every later entry
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if s[i][j] % s[t][t] != 0:
                        bad = (i, j)
                        break
                if bad:
                    break
            if bad is None:
                break
            addmul_row(t, bad[0], -1)  # add offending row into row t, re-eliminate
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v
