from fractions import Fraction
import unittest

from torofan.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram


class TestLinearProgram(unittest.TestCase):
    def test_optimal(self):
        program = LinearProgram(2)
        program.add_inequality([1, 0], ">=", 1)
        program.add_inequality([0, 1], ">=", 2)
        result = program.solve([1, 1])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.value, 3)
        self.assertEqual(result.solution, (1, 2))

    def test_equalities(self):
        program = LinearProgram(2)
        program.add_equality({0: 1, 1: 1}, 4)
        program.add_inequality({0: 1}, ">=", 0)
        program.add_inequality({1: 1}, ">=", 0)
        result = program.solve([1, 0])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.solution, (0, 4))

    def test_rational_optimum(self):
        program = LinearProgram(1)
        program.add_inequality([3], ">=", 1)
        result = program.solve([1])
        self.assertEqual(result.solution, (Fraction(1, 3),))

    def test_infeasible(self):
        program = LinearProgram(1)
        program.add_inequality([1], ">=", 1)
        program.add_inequality([1], "<=", 0)
        self.assertEqual(program.solve([1]).status, INFEASIBLE)
        self.assertFalse(program.feasible())

    def test_inconsistent_equalities(self):
        program = LinearProgram(2)
        program.add_equality([1, 1], 1)
        program.add_equality([1, 1], 2)
        self.assertEqual(program.solve().status, INFEASIBLE)

    def test_unbounded(self):
        program = LinearProgram(1)
        program.add_inequality([1], "<=", 5)
        self.assertEqual(program.solve([1]).status, UNBOUNDED)

    def test_lexmin(self):
        program = LinearProgram(2)
        program.add_inequality([1, 1], ">=", 2)
        program.add_inequality([1, 0], ">=", 0)
        program.add_inequality([0, 1], ">=", 0)
        self.assertEqual(program.lexmin([0, 1]), (0, 2))
        self.assertEqual(program.lexmin([1, 0]), (2, 0))

    def test_copy_is_independent(self):
        program = LinearProgram(1)
        program.add_inequality([1], ">=", 0)
        other = program.copy()
        other.add_inequality([1], "<=", -1)
        self.assertTrue(program.feasible())
        self.assertFalse(other.feasible())

    def test_bad_sense(self):
        program = LinearProgram(1)
        with self.assertRaises(ValueError):
            program.add_inequality([1], ">", 0)
