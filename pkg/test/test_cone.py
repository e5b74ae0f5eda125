import unittest

from torofan.cache import LruCache
from torofan.cone import Cone, double_description, dual_cone, intersect_cones, lattice_points_window

from .fixtures import make_rng, random_generators


class TestCone(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.quadrant = Cone([(1, 0), (0, 1)], 2)
        cls.square = Cone([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], 3)

    def test_redundant_generators(self):
        cone = Cone([(1, 0), (0, 1), (1, 1)], 2)
        self.assertEqual(cone, self.quadrant)
        self.assertEqual(cone.rays, ((0, 1), (1, 0)))

    def test_properties(self):
        self.assertEqual(self.quadrant.dim, 2)
        self.assertTrue(self.quadrant.is_pointed())
        self.assertTrue(self.quadrant.is_simplicial())
        self.assertEqual(self.square.dim, 3)
        self.assertFalse(self.square.is_simplicial())
        self.assertEqual(len(self.square.facets), 4)

    def test_contains(self):
        self.assertTrue(self.quadrant.contains((2, 3)))
        self.assertFalse(self.quadrant.contains((-1, 0)))
        self.assertTrue(self.quadrant.in_relative_interior((1, 1)))
        self.assertFalse(self.quadrant.in_relative_interior((1, 0)))
        self.assertTrue(Cone.full(2).contains((-5, 3)))
        self.assertFalse(Cone.zero(2).contains((0, 1)))

    def test_dual(self):
        dual = self.quadrant.dual()
        self.assertTrue(dual.contains((1, 2)))
        self.assertFalse(dual.contains((1, -1)))

        dual = self.square.dual()
        self.assertEqual(len(dual.rays), 4)
        for ray in self.square.rays:
            for normal in dual.rays:
                self.assertGreaterEqual(sum(a * b for a, b in zip(ray, normal)), 0)

    def test_faces(self):
        faces = self.square.faces()
        self.assertEqual(len(faces), 10)
        self.assertEqual(len(faces.of_dim(2)), 4)
        self.assertEqual(len(faces.of_dim(1)), 4)
        self.assertEqual(self.quadrant.face_rays((3, 0)), frozenset((1,)))

    def test_intersection(self):
        first = Cone([(1, 0), (1, 1)], 2)
        second = Cone([(1, 1), (0, 1)], 2)
        meet = intersect_cones(first, second)
        self.assertEqual(meet.dim, 1)
        self.assertEqual(meet, Cone([(1, 1)], 2))

    def test_lattice_points(self):
        points = lattice_points_window(self.quadrant, 1)
        self.assertEqual(sorted(points), [(0, 0), (0, 1), (1, 0), (1, 1)])
        with self.assertRaises(ValueError):
            lattice_points_window(self.quadrant, -1)


class TestRandomCones(unittest.TestCase):
    def setUp(self):
        self.rng = make_rng(2)

    def random_cone(self, rank):
        generators = random_generators(self.rng, rank, self.rng.randint(1, 5))
        # Some cones get a lineality space
        lineality = []
        if self.rng.random() < 0.3:
            lineality = [tuple(self.rng.randint(-1, 1) for _ in range(rank))]
        return Cone(generators, rank, lineality)

    def test_double_description(self):
        lineality, rays = double_description([(1, 0, 0), (0, 1, 0)], 3)
        self.assertEqual(rays, ((0, 1, 0), (1, 0, 0)))
        self.assertEqual(lineality.dim, 1)
        self.assertIn((0, 0, 1), lineality)

        lineality, rays = double_description([(0, 0)], 2)
        self.assertEqual(lineality.dim, 2)
        self.assertEqual(rays, ())

    def test_dual_of_dual(self):
        for _ in range(80):
            rank = self.rng.randint(1, 4)
            cone = self.random_cone(rank)
            self.assertEqual(cone.dual().dual(), cone)
            self.assertEqual(dual_cone(dual_cone(cone)), cone)
            for ray in cone.rays:
                for normal in cone.facets:
                    self.assertGreaterEqual(sum(a * b for a, b in zip(ray, normal)), 0)

    def test_intersection_associative(self):
        for _ in range(60):
            rank = self.rng.randint(2, 3)
            first, second, third = (self.random_cone(rank) for _ in range(3))
            left = intersect_cones(intersect_cones(first, second), third)
            right = intersect_cones(first, intersect_cones(second, third))
            self.assertEqual(left, right)
            self.assertEqual(intersect_cones(first, second), intersect_cones(second, first))
            self.assertTrue(first.contains_cone(left))


class TestLruCache(unittest.TestCase):
    def test_eviction(self):
        cache = LruCache(2)
        cache["a"] = 1
        cache["b"] = 2
        self.assertEqual(cache["a"], 1)
        cache["c"] = 3
        self.assertIn("a", cache)
        self.assertNotIn("b", cache)
        self.assertEqual(len(cache), 2)

    def test_get_or_compute(self):
        cache = LruCache(4)
        calls = []

        def compute():
            calls.append(1)
            return 42

        self.assertEqual(cache.get_or_compute("key", compute), 42)
        self.assertEqual(cache.get_or_compute("key", compute), 42)
        self.assertEqual(len(calls), 1)
        self.assertEqual(cache.stats(), {"size": 1, "hits": 1, "misses": 1})
