"""Exact lattice point enumeration (Fincke-Pohst over rationals).

Used for ground-truth shortest vectors and for the truncated Gaussian support
of the simulated dual lattice sampler. Desk-scale only: dimensions <= 8.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Tuple

from .lattice_core import BasisMatrix, gram_schmidt, norm_sq, sqrt_upper
from .reduction import lll_reduce


def coords_in_ball(basis: BasisMatrix, radius_sq: Fraction) -> Iterator[tuple]:
    """Yield every integer coordinate vector x with ||x @ B||^2 <= radius_sq.

    Includes the zero vector. Exact: the search tree is pruned with rational
    upper bounds only, so no lattice point in the ball is missed.
    """
    radius_sq = Fraction(radius_sq)
    if radius_sq < 0:
        return
    m = basis.m
    gs = gram_schmidt(basis)
    norms = gs.norms_sq()
    mu = gs.mu

    coords = [0] * m

    def descend(i: int, remaining: Fraction) -> Iterator[tuple]:
        if i < 0:
            yield tuple(coords)
            return
        # center of the admissible interval for x_i given choices above
        center = -sum(
            (Fraction(coords[j]) * mu[j][i] for j in range(i + 1, m)), Fraction(0)
        )
        half = sqrt_upper(remaining / norms[i]) if norms[i] != 0 else Fraction(0)
        lo = math.ceil(center - half)
        hi = math.floor(center + half)
        for x in range(lo, hi + 1):
            coords[i] = x
            used = (Fraction(x) - center) ** 2 * norms[i]
            if used <= remaining:
                yield from descend(i - 1, remaining - used)
        coords[i] = 0

    yield from descend(m - 1, radius_sq)


def lattice_points_in_ball(basis: BasisMatrix, radius_sq: Fraction) -> list:
    """All (coords, point) pairs with ||point||^2 <= radius_sq, zero included."""
    out = []
    for x in coords_in_ball(basis, radius_sq):
        p = basis.row_combination(x)
        if norm_sq(p) <= radius_sq:
            out.append((x, p))
    return out


def shortest_vector_sq(basis: BasisMatrix) -> Fraction:
    """Exact squared first minimum lambda_1^2 of the lattice."""
    reduced, _ = lll_reduce(basis)
    bound = min(norm_sq(row) for row in reduced.rows)
    best = bound
    for x in coords_in_ball(reduced, bound):
        if any(x):
            n = norm_sq(reduced.row_combination(x))
            if n < best:
                best = n
    return best
