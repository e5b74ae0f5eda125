import unittest
from fractions import Fraction

from torofan.divisor import (
    TorusDivisor,
    character_divisor,
    check_witness,
    compatibility_witness,
    induced_quadruple,
    q_linear_equivalent,
)
from torofan.fan import Fan, FanQuadruple, FanTriple
from torofan.forms import (
    FormSpec,
    chart_of,
    de_rham_complex,
    graded_piece,
    hilbert_table,
    phi,
    pushforward_hypotheses,
    twisted_graded_piece,
    verify_phi_ses_identities,
    verify_pushforward,
    verify_reflexive_intersection,
)
from torofan.resolution import resolve_log_simplicial
from torofan.subdivision import star_subdivision
from torofan.util import FanError, PreconditionError

from .fixtures import load, make_rng, quadrant, square_cone


class TestForms(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.loaded = load("fix-q.json")
        cls.triple = cls.loaded.triple()
        cls.qc = load("fix-qc.json")

    def dim(self, triple, p, m):
        return graded_piece(FormSpec(triple, p), m).value.dim

    def test_graded_pieces(self):
        self.assertEqual(self.dim(self.triple, 0, (1, 0)), 1)
        self.assertEqual(self.dim(self.triple, 0, (0, 1)), 0)
        self.assertEqual(self.dim(self.triple, 0, (-1, 2)), 0)
        self.assertEqual([self.dim(self.triple, p, (1, 1)) for p in range(3)], [1, 2, 1])
        self.assertEqual(self.dim(quadrant((), ()), 1, (1, 0)), 1)

    def test_hilbert_table(self):
        table = hilbert_table(FormSpec(self.triple, 0), 1, threads=1)
        self.assertEqual(table.total(), 2)
        self.assertEqual(table.dims[(1, 0)], 1)
        self.assertEqual(table.dims[(1, 1)], 1)

        obj = table.to_json()
        self.assertEqual(obj["bound"], 1)
        self.assertEqual(len(obj["rows"]), 9)

    def test_twist(self):
        twist = self.loaded.divisor("character")
        spec = FormSpec(self.triple, 1, twist)
        self.assertEqual(spec.differential_shift(), (2, -1))

        plain = FormSpec(self.triple, 1)
        for m in ((0, 0), (-1, 2), (-2, 1), (1, 1), (-1, 1)):
            shifted = (m[0] + 2, m[1] - 1)
            self.assertEqual(
                twisted_graded_piece(spec, m).value, graded_piece(plain, shifted).value
            )

    def test_spec_errors(self):
        with self.assertRaises(PreconditionError):
            FormSpec(self.triple, 3)
        with self.assertRaises(PreconditionError):
            FormSpec(FanQuadruple(self.triple.fan, (0,), (), (1,), {1: Fraction(1, 2)}))
        with self.assertRaises(PreconditionError):
            FormSpec(self.triple, 0, TorusDivisor({0: Fraction(1, 2)}))
        with self.assertRaises(PreconditionError):
            FormSpec(self.triple, 0, shift=(1, 2, 3))

    def test_charts(self):
        fan = self.triple.fan
        self.assertEqual(chart_of(fan, {0}), frozenset((0, 1)))
        with self.assertRaises(FanError):
            chart_of(fan, {2})

        self.assertEqual(phi(self.triple, {0}).dim, 0)
        self.assertEqual(phi(self.triple, {1}).dim, 2)
        self.assertEqual(phi(quadrant((), ()), {1}).dim, 1)
        with self.assertRaises(FanError):
            phi(self.triple, {0, 2})
        with self.assertRaises(FanError):
            phi(self.triple, {0}, chart=frozenset((1,)))

    def test_de_rham(self):
        bare = FormSpec(quadrant((), ()))
        self.assertEqual(de_rham_complex(bare, (1, 1)).cohomology_dims(), [0, 0, 0])
        self.assertEqual(de_rham_complex(bare, (0, 0)).cohomology_dims(), [1, 0, 0])

        poles = FormSpec(quadrant((), (0, 1)))
        self.assertEqual(de_rham_complex(poles, (0, 0)).cohomology_dims(), [1, 2, 1])

    def test_reflexive(self):
        for triple in (self.triple, quadrant((), ()), self.qc.triple()):
            for p in range(triple.fan.ambient_rank + 1):
                report = verify_reflexive_intersection(FormSpec(triple, p), 1)
                self.assertTrue(report.holds, report.mismatches)
                self.assertGreater(report.checked, 0)

    def test_pushforward(self):
        triple = self.qc.triple()
        chain = resolve_log_simplicial(triple, self.qc.order("cb"), certify=False)
        model = chain.final_quadruple()
        self.assertEqual(pushforward_hypotheses(triple, model), [])

        for p in range(4):
            report = verify_pushforward(triple, model, p, 3)
            self.assertTrue(report.holds, report.mismatches)
            self.assertEqual(report.checked, 343 + len(triple.fan.cones()))

    def test_pushforward_six_rays(self):
        triple = load("fix-r65.json").triple()
        model = triple.with_fan(star_subdivision(triple.fan, triple.fan.rays[0]))
        self.assertEqual(pushforward_hypotheses(triple, model), [])

        for p in range(5):
            report = verify_pushforward(triple, model, p, 2)
            self.assertTrue(report.holds, report.mismatches)
            self.assertEqual(report.checked, 625 + len(triple.fan.cones()))

    def test_pushforward_hypotheses(self):
        triple = quadrant((), (1,))
        model = FanTriple(star_subdivision(triple.fan, (1, 1)), (), (1,))
        failures = pushforward_hypotheses(triple, model)
        self.assertEqual(failures, ["Ray 2 maps into C away from B but is not in C'"])

        report = verify_pushforward(triple, model, 0, 1)
        self.assertFalse(report.holds)
        self.assertEqual(report.checked, 0)

    def test_ses(self):
        triple = quadrant((), (1,))
        for mode in ("addB", "addC"):
            report = verify_phi_ses_identities(triple, 0, mode)
            self.assertTrue(report.holds, report.mismatches)
            self.assertEqual(report.name, f"ses-{mode}")
        self.assertEqual(verify_phi_ses_identities(triple, 0, "addB").checked, 2)

        report = verify_phi_ses_identities(triple, 1, "addB")
        self.assertFalse(report.holds)
        self.assertEqual(report.hypotheses, ["Ray 1 is not an A-ray"])

    def test_ses_square(self):
        report = verify_phi_ses_identities(square_cone(), 2, "addB")
        self.assertTrue(report.holds, report.mismatches)
        self.assertEqual(report.checked, 3)
        self.assertTrue(any(line.startswith("Marked ray 0") for line in report.hypotheses))


class TestDivisor(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.loaded = load("fix-q.json")
        cls.triple = cls.loaded.triple()

    def test_algebra(self):
        first = TorusDivisor.from_list([1, 0])
        second = TorusDivisor.prime(1, 2)
        self.assertEqual((first + second).support(), {0, 1})
        self.assertEqual((first - first), TorusDivisor())
        self.assertTrue((first - first).is_zero())
        self.assertEqual(first.scale(Fraction(1, 2))[0], Fraction(1, 2))
        self.assertFalse(first.scale(Fraction(1, 2)).is_integral())
        self.assertEqual((-second)[1], -2)

    def test_character(self):
        fan = self.triple.fan
        divisor = character_divisor(fan, (3, -2))
        self.assertEqual(divisor.to_json(2), ["3", "-2"])
        self.assertTrue(q_linear_equivalent(fan, divisor, TorusDivisor()))

    def test_witness(self):
        twist = self.loaded.divisor("character")
        witness = compatibility_witness(twist, self.triple)
        self.assertEqual(witness.b, {0: 0})
        self.assertEqual(witness.c, {1: 0})
        self.assertEqual(witness.m, (2, -1))
        self.assertTrue(check_witness(twist, self.triple, witness))
        self.assertFalse(check_witness(TorusDivisor(), self.triple, witness))

        quadruple = induced_quadruple(self.triple, twist, witness)
        self.assertEqual(quadruple.B, frozenset((0,)))
        self.assertEqual(quadruple.C, frozenset((1,)))
        self.assertEqual(quadruple.H, frozenset())

    def test_incompatible(self):
        # Four undecorated rays in rank three pin m down
        bare = square_cone((), ())
        self.assertIsNone(compatibility_witness(TorusDivisor({0: Fraction(1, 2)}), bare))

    def test_random_characters(self):
        rng = make_rng(4)
        plane = Fan([(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
        for _ in range(50):
            divisor = TorusDivisor.from_list(
                [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
            )
            m = (Fraction(rng.randint(-5, 5), rng.randint(1, 3)), rng.randint(-5, 5))
            shifted = divisor + character_divisor(plane, m)
            self.assertTrue(q_linear_equivalent(plane, shifted, divisor))
            self.assertTrue(q_linear_equivalent(plane, divisor, shifted))
            self.assertFalse(q_linear_equivalent(plane, shifted + TorusDivisor.prime(0), divisor))
