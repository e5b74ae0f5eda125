import copy
import json
import os
import tempfile
import unittest
from fractions import Fraction

from torofan.fan import Order
from torofan.fanio import dump_json, fan_file_json, load_fan_file, parse_fan_file
from torofan.util import FanError, parse_rat

from .fixtures import FIXTURE_DIR, load

QUADRANT = {
    "lattice_rank": 2,
    "rays": [[1, 0], [0, 1]],
    "maximal_cones": [[0, 1]],
    "B": [0],
    "C": [1],
}


class TestFanFiles(unittest.TestCase):
    def broken(self, **changes):
        obj = copy.deepcopy(QUADRANT)
        for key, value in changes.items():
            if value is None:
                del obj[key]
            else:
                obj[key] = value
        with self.assertRaises(FanError):
            parse_fan_file(obj)

    def test_parse(self):
        loaded = parse_fan_file(QUADRANT)
        self.assertEqual(loaded.quadruple.B, frozenset((0,)))
        self.assertEqual(loaded.quadruple.C, frozenset((1,)))
        self.assertEqual(loaded.fan.rays, ((1, 0), (0, 1)))
        self.assertEqual(len(loaded.digest), 128)

    def test_rejects(self):
        self.broken(rays=None)
        self.broken(lattice_rank=0)
        self.broken(lattice_rank=True)
        self.broken(rays=[[1, 0], [0, 1.5]])
        self.broken(rays=[[1, 0], [0, 2]])
        self.broken(rays=[[1, 0], [1, 0]])
        self.broken(maximal_cones=[[0, 2]])
        self.broken(B=[0], C=[0])
        self.broken(h={"1": "1/2"})
        self.broken(H=[1], C=[], h={"1": "3/2"})
        self.broken(divisors={"short": [1]})
        self.broken(divisors={"bad": ["x", 0]})
        self.broken(divisors={"flag": [True, 0]})
        self.broken(C=[], H=[1], h={"1": False})
        self.broken(orders={"far": [0, 5]})

        with self.assertRaises(FanError):
            parse_fan_file([QUADRANT])

    def test_digest(self):
        first = parse_fan_file(QUADRANT).digest
        reordered = dict(reversed(list(QUADRANT.items())))
        self.assertEqual(parse_fan_file(reordered).digest, first)

        changed = dict(QUADRANT, C=[])
        self.assertNotEqual(parse_fan_file(changed).digest, first)

    def test_quadruple(self):
        obj = dict(QUADRANT, C=[], H=[1], h={"1": "1/3"})
        loaded = parse_fan_file(obj)
        self.assertEqual(loaded.quadruple.h, {1: Fraction(1, 3)})
        with self.assertRaises(FanError):
            loaded.triple()

    def test_named(self):
        loaded = load("fix-qc.json")
        self.assertEqual(loaded.order("cb"), Order([1, 0]))
        with self.assertRaises(FanError):
            loaded.order("missing")
        with self.assertRaises(FanError):
            loaded.divisor("missing")

        divisor = load("fix-q.json").divisor("character")
        self.assertEqual(divisor[0], 2)
        self.assertEqual(divisor[1], -1)

    def test_rewrite(self):
        loaded = load("fix-q.json")
        obj = fan_file_json(loaded.quadruple, loaded.divisors, loaded.orders)
        self.assertEqual(obj["divisors"]["character"], ["2", "-1"])
        self.assertEqual(parse_fan_file(obj).fan.canonical_key(), loaded.fan.canonical_key())

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "fan.json")
            dump_json(obj, path)
            again = load_fan_file(path)
            self.assertEqual(again.quadruple, loaded.quadruple)

            with open(path, "w", encoding="utf-8") as fh:
                fh.write("{ not json")
            with self.assertRaises(FanError):
                load_fan_file(path)

    def test_fixtures(self):
        for name in sorted(os.listdir(FIXTURE_DIR)):
            with open(os.path.join(FIXTURE_DIR, name), encoding="utf-8") as fh:
                obj = json.load(fh)
            self.assertEqual(load(name).digest, parse_fan_file(obj).digest, name)


class TestRationals(unittest.TestCase):
    def test_parse_rat(self):
        self.assertEqual(parse_rat("-3/6"), Fraction(-1, 2))
        self.assertEqual(parse_rat(4), 4)
        self.assertEqual(parse_rat(Fraction(2, 3)), Fraction(2, 3))
        for value in (True, False, 0.5, None, [1]):
            with self.assertRaises(FanError):
                parse_rat(value)
