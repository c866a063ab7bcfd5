import itertools
import random
from fractions import Fraction

from unitlat.enumeration import coords_in_ball, lattice_points_in_ball, shortest_vector_sq
from unitlat.lattice_core import BasisMatrix, RankError, norm_sq

F = Fraction


def rand_basis(rng, dim, lo=-5, hi=5):
    while True:
        rows = [[F(rng.randint(lo, hi)) for _ in range(dim)] for _ in range(dim)]
        try:
            return BasisMatrix(rows)
        except RankError:
            continue


def brute_force_points(basis, radius_sq, box=12):
    out = set()
    m = basis.m
    for x in itertools.product(range(-box, box + 1), repeat=m):
        p = basis.row_combination(x)
        if norm_sq(p) <= radius_sq:
            out.add(x)
    return out


class TestEnumeration:
    def test_unit_ball_z2(self):
        pts = {x for x in coords_in_ball(BasisMatrix.identity(2), F(1))}
        assert pts == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_matches_brute_force(self):
        rng = random.Random(1)
        for _ in range(10):
            b = rand_basis(rng, 2)
            r_sq = F(rng.randint(1, 40))
            got = set(coords_in_ball(b, r_sq))
            assert got == brute_force_points(b, r_sq)

    def test_points_carry_correct_vectors(self):
        b = BasisMatrix([[F(2), F(1)], [F(0), F(3)]])
        for coords, point in lattice_points_in_ball(b, F(30)):
            assert tuple(b.row_combination(coords)) == tuple(point)
            assert norm_sq(point) <= 30

    def test_dim3(self):
        rng = random.Random(2)
        b = rand_basis(rng, 3)
        r_sq = F(16)
        got = set(coords_in_ball(b, r_sq))
        assert got == brute_force_points(b, r_sq, box=8)


class TestShortestVector:
    def test_identity(self):
        assert shortest_vector_sq(BasisMatrix.identity(4)) == 1

    def test_scaled(self):
        assert shortest_vector_sq(BasisMatrix.diagonal([F(5)])) == 25

    def test_matches_brute_force(self):
        rng = random.Random(3)
        for _ in range(10):
            b = rand_basis(rng, 2, -4, 4)
            lam = shortest_vector_sq(b)
            best = min(
                norm_sq(b.row_combination(x))
                for x in itertools.product(range(-10, 11), repeat=2)
                if any(x)
            )
            assert lam == best

    def test_invariant_under_unimodular(self):
        b = BasisMatrix([[F(3), F(1)], [F(1), F(2)]])
        sheared = BasisMatrix(
            [
                [b.rows[0][0] + 4 * b.rows[1][0], b.rows[0][1] + 4 * b.rows[1][1]],
                list(b.rows[1]),
            ]
        )
        assert shortest_vector_sq(b) == shortest_vector_sq(sheared)
