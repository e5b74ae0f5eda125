import unittest

from torofan.fan import (
    Fan,
    FanQuadruple,
    FanTriple,
    Order,
    fan_validate,
    is_log_simplicial,
    orbit_closure,
    restrict,
    subdivision_map,
    unimodular_completion,
    xi_face,
)
from torofan.linalg import determinant, mat_vec
from torofan.util import FanError, PreconditionError

from .fixtures import projective_line, quadrant, square_cone


class TestFan(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.quadrant = quadrant()
        cls.square = square_cone()
        cls.line = projective_line()

    def test_bad_rays(self):
        with self.assertRaises(FanError):
            Fan([(2, 0)], [[0]])
        with self.assertRaises(FanError):
            Fan([(1, 0), (1, 0)], [[0]])
        with self.assertRaises(FanError):
            Fan([(1, 0)], [[0, 1]])
        with self.assertRaises(FanError):
            Fan([(0, 0)], [[0]])

    def test_validate(self):
        self.assertTrue(fan_validate(self.quadrant.fan).valid)
        self.assertTrue(fan_validate(self.square.fan).valid)
        self.assertTrue(fan_validate(self.line.fan).valid)

        overlapping = Fan([(1, 0), (0, 1), (1, 1)], [[0, 1], [1, 2]])
        report = fan_validate(overlapping)
        self.assertFalse(report.valid)
        self.assertTrue(report.violations)

        redundant = Fan([(1, 0), (0, 1), (1, 1)], [[0, 1, 2]])
        report = fan_validate(redundant)
        self.assertFalse(report.valid)
        self.assertIn("not extreme", report.violations[0])

    def test_cones(self):
        cones = self.quadrant.fan.cones()
        self.assertEqual(len(cones), 4)
        self.assertEqual(cones[0], frozenset())
        self.assertIn({0, 1}, self.quadrant.fan)
        self.assertEqual(len(self.square.fan.cones()), 10)
        self.assertNotIn({0, 2}, self.square.fan)

    def test_completeness(self):
        self.assertTrue(self.line.fan.is_complete())
        self.assertFalse(self.quadrant.fan.is_complete())
        self.assertTrue(self.quadrant.fan.is_simplicial())
        self.assertFalse(self.square.fan.is_simplicial())

    def test_minimal_cone(self):
        fan = self.square.fan
        self.assertEqual(fan.minimal_cone_containing((1, 0, 2)), frozenset((0, 1)))
        self.assertEqual(fan.minimal_cone_containing((1, 1, 2)), frozenset((0, 1, 2, 3)))
        self.assertIsNone(fan.minimal_cone_containing((0, 0, -1)))

    def test_canonical_json(self):
        first = Fan([(0, 1), (1, 0)], [[0, 1]])
        second = Fan([(1, 0), (0, 1)], [[0, 1]])
        self.assertEqual(first.to_json(), second.to_json())
        self.assertTrue(first.same_fan(second))

    def test_decorations(self):
        fan = self.quadrant.fan
        with self.assertRaises(FanError):
            FanTriple(fan, [0], [0])
        with self.assertRaises(FanError):
            FanTriple(fan, [5], [])
        with self.assertRaises(FanError):
            FanQuadruple(fan, [], [], [0], {0: 1})

        quadruple = FanQuadruple(fan, [], [], [0], {0: "1/2"})
        self.assertEqual(quadruple.A, frozenset((1,)))
        self.assertEqual(self.square.A, frozenset((2, 3)))
        self.assertFalse(self.square.is_plenary())

    def test_log_simplicial(self):
        self.assertTrue(is_log_simplicial(self.quadrant))
        self.assertFalse(is_log_simplicial(self.square))
        self.assertTrue(is_log_simplicial(square_cone((), ())))

    def test_restrict(self):
        local = restrict(self.square, {0, 1})
        self.assertIsInstance(local, FanTriple)
        self.assertEqual(local.fan.maximal_cones, (frozenset((0, 1)),))
        self.assertEqual(local.B, frozenset((0,)))
        self.assertEqual(local.C, frozenset((1,)))

        with self.assertRaises(FanError):
            restrict(self.square, {0, 2})

    def test_subdivision_map(self):
        coarse = self.quadrant.fan
        fine = Fan([(1, 0), (0, 1), (1, 1)], [[0, 2], [1, 2]])
        mapping = subdivision_map(fine, coarse)
        self.assertEqual(mapping({0, 2}), frozenset((0, 1)))
        self.assertEqual(mapping({2}), frozenset((0, 1)))
        self.assertEqual(mapping({0}), frozenset((0,)))
        self.assertFalse(mapping.is_efficient)
        self.assertEqual(xi_face(fine, {0}, coarse, frozenset((0, 2))), frozenset((0,)))

        with self.assertRaises(FanError):
            subdivision_map(Fan([(1, 0), (1, 1)], [[0, 1]]), coarse)

    def test_order(self):
        order = Order([1, 0, 2])
        self.assertTrue(order.precedes({1}, {0, 2}))
        self.assertFalse(order.precedes({0}, {1}))
        self.assertEqual(order.reverse(), (2, 0, 1))
        self.assertEqual(order.restrict({0, 2}), Order([0, 2]))
        self.assertEqual(order.carrier, frozenset((0, 1, 2)))
        with self.assertRaises(PreconditionError):
            Order([0, 0])

    def test_unimodular_completion(self):
        for vector in ((2, 3), (0, 0, 1), (1, 1, 2), (-3, 5, 7)):
            matrix = unimodular_completion(vector)
            image = mat_vec(matrix, vector)
            self.assertEqual(image[0], 1)
            self.assertTrue(all(value == 0 for value in image[1:]))
            self.assertIn(determinant(matrix), (1, -1))

        with self.assertRaises(FanError):
            unimodular_completion((2, 4))

    def test_orbit_closure(self):
        closure = orbit_closure(self.square, 0)
        self.assertEqual(closure.fan.ambient_rank, 2)
        self.assertEqual(len(closure.fan.rays), 2)
        self.assertEqual(closure.ray_origin, {0: 1, 1: 3})
        self.assertEqual(closure.quadruple.B, frozenset())
        self.assertEqual(closure.quadruple.C, frozenset((0,)))
        self.assertIsInstance(closure.quadruple, FanTriple)

        with self.assertRaises(PreconditionError):
            orbit_closure(self.line, 0)
