from fractions import Fraction
import unittest

from torofan.linalg import (
    CochainComplex,
    Subspace,
    determinant,
    fraction_free_rank,
    mat_vec,
    nullspace,
    primitive,
    rank,
    solve,
    wedge_basis,
    wedge_multiplication_matrix,
    wedge_power,
)
from torofan.util import VerificationError

from .fixtures import make_rng


class TestLinalg(unittest.TestCase):
    def test_primitive(self):
        self.assertEqual(primitive((2, 4)), (1, 2))
        self.assertEqual(primitive((-2, 0)), (-1, 0))
        self.assertEqual(primitive((Fraction(1, 2), Fraction(1, 3))), (3, 2))
        self.assertEqual(primitive((0, 0)), (0, 0))

    def test_rank_and_determinant(self):
        self.assertEqual(rank([(1, 2), (2, 4)]), 1)
        self.assertEqual(rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]), 2)
        self.assertEqual(determinant([(1, 2), (3, 4)]), -2)
        self.assertEqual(determinant([(1, 2), (2, 4)]), 0)
        self.assertEqual(fraction_free_rank([(1, 2), (2, 4)]), 1)
        self.assertEqual(fraction_free_rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]), 2)
        self.assertEqual(fraction_free_rank([(0, 0), (0, 3)]), 1)

    def test_nullspace(self):
        self.assertEqual(nullspace([(1, 1)], 2), [(-1, 1)])
        self.assertEqual(len(nullspace([(1, 0, 0)], 3)), 2)

    def test_solve(self):
        self.assertEqual(solve([(1, 1), (1, -1)], [2, 0], 2), (1, 1))
        self.assertIsNone(solve([(1, 1), (1, 1)], [1, 2], 2))

    def test_subspace_canonical(self):
        self.assertEqual(Subspace([(1, 1)], 2), Subspace([(2, 2)], 2))
        self.assertNotEqual(Subspace([(1, 1)], 2), Subspace([(1, 0)], 2))
        self.assertEqual(Subspace.full(3).dim, 3)
        self.assertTrue(Subspace.zero(3).is_zero())

    def test_subspace_intersect(self):
        first = Subspace([(1, 0, 0), (0, 1, 0)], 3)
        second = Subspace([(0, 1, 0), (0, 0, 1)], 3)
        meet = first.intersect(second)
        self.assertEqual(meet, Subspace([(0, 1, 0)], 3))
        self.assertTrue(meet.is_subspace_of(first))
        self.assertIn((0, 5, 0), meet)
        self.assertNotIn((1, 0, 0), meet)

    def test_annihilator(self):
        line = Subspace([(1, 1)], 2)
        self.assertEqual(line.annihilator(), Subspace([(1, -1)], 2))

    def test_wedge_power(self):
        self.assertEqual(len(wedge_basis(4, 2)), 6)
        self.assertEqual(wedge_power(Subspace.full(3), 2).dim, 3)
        self.assertEqual(wedge_power(Subspace([(1, 0, 0), (0, 1, 0)], 3), 2).dim, 1)
        self.assertEqual(wedge_power(Subspace([(1, 0, 0)], 3), 2).dim, 0)
        self.assertEqual(wedge_power(Subspace.zero(3), 0).dim, 1)

    def test_wedge_multiplication(self):
        self.assertEqual(wedge_multiplication_matrix((1, 0), 0), [(1,), (0,)])
        self.assertEqual(wedge_multiplication_matrix((1, 0), 1), [(0, 1)])

        covector = (1, 2, 3)
        first = wedge_multiplication_matrix(covector, 1)
        second = wedge_multiplication_matrix(covector, 2)
        for column in range(3):
            image = mat_vec(first, [1 if i == column else 0 for i in range(3)])
            self.assertEqual(mat_vec(second, image), (0,))

    def test_cochain_complex(self):
        complex_ = CochainComplex([Subspace.full(1), Subspace.full(2)], [[(1,), (0,)]])
        self.assertEqual(complex_.images(0), [(1, 0)])
        complex_.check()
        self.assertEqual(complex_.ranks(), [1])
        self.assertEqual(complex_.cohomology_dims(), [0, 1])
        self.assertEqual(complex_.euler_characteristic(), -1)

    def test_cochain_complex_check(self):
        complex_ = CochainComplex(
            [Subspace.full(1), Subspace([(0, 1)], 2)], [[(1,), (0,)]]
        )
        with self.assertRaises(VerificationError):
            complex_.check()

        with self.assertRaises(ValueError):
            CochainComplex([Subspace.full(1), Subspace.full(1)], [])


class TestRandomLinalg(unittest.TestCase):
    def setUp(self):
        self.rng = make_rng(1)

    def random_rows(self, count, ncols):
        rows = []
        for _ in range(count):
            rows.append(
                tuple(Fraction(self.rng.randint(-4, 4), self.rng.randint(1, 3)) for _ in range(ncols))
            )
        return rows

    def test_ranks_agree(self):
        for _ in range(60):
            ncols = self.rng.randint(1, 5)
            rows = self.random_rows(self.rng.randint(1, 4), ncols)
            # Force a dependency now and then
            if len(rows) > 1 and self.rng.random() < 0.5:
                rows.append(tuple(a + 2 * b for a, b in zip(rows[0], rows[1])))
            self.assertEqual(fraction_free_rank(rows), rank(rows, ncols))

    def test_subspace_canonical_under_change_of_basis(self):
        for _ in range(60):
            ncols = self.rng.randint(1, 5)
            vectors = self.random_rows(self.rng.randint(1, 4), ncols)
            original = Subspace(vectors, ncols)

            # Triangular change of basis, then shuffle and pad
            mixed = []
            for index, vector in enumerate(vectors):
                factor = Fraction(self.rng.choice((-3, -2, -1, 1, 2, 3)), self.rng.randint(1, 3))
                row = [factor * value for value in vector]
                for earlier in vectors[:index]:
                    weight = self.rng.randint(-2, 2)
                    row = [a + weight * b for a, b in zip(row, earlier)]
                mixed.append(tuple(row))
            self.rng.shuffle(mixed)
            mixed.append(tuple(a - b for a, b in zip(mixed[0], mixed[-1])))

            other = Subspace(mixed, ncols)
            self.assertEqual(other, original)
            self.assertEqual(hash(other), hash(original))
            self.assertEqual(other.basis, original.basis)
