import unittest

from torofan.cech import (
    CechSetup,
    cech_complex_at_degree,
    chamber_decomposition,
    complete_cohomology_dims,
    e1_degeneration_check,
    higher_direct_image_check,
    hypersurface_report,
    total_complex_at_degree,
)
from torofan.forms import FormSpec
from torofan.resolution import resolve_log_simplicial
from torofan.subdivision import star_subdivision
from torofan.util import PreconditionError

from .fixtures import load, projective_line, quadrant, square_cone


def cohomology(triple, twist=None):
    return complete_cohomology_dims(CechSetup(FormSpec(triple, 0, twist)), threads=1)


class TestCech(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.p1 = load("p1.json")
        cls.qc = load("fix-qc.json")
        cls.r65 = load("fix-r65.json")

    def test_projective_line(self):
        table = cohomology(projective_line())
        self.assertEqual(table[(0, 0)], 1)
        self.assertEqual(table[(1, 1)], 1)
        self.assertEqual(table[(0, 1)], 0)
        self.assertEqual(table.total(), 2)
        self.assertEqual([table.hodge_sum(k) for k in range(3)], [1, 0, 1])

        rows = table.to_json()["rows"]
        self.assertEqual(rows, [{"p": 0, "q": 0, "dim": 1}, {"p": 1, "q": 1, "dim": 1}])

    def test_decorated_lines(self):
        table = cohomology(load("p1-b0.json").triple())
        self.assertEqual(table.dims, {(1, 1): 1})

        table = cohomology(load("p1-b0-cinf.json").triple())
        self.assertEqual(table.total(), 0)

    def test_twisted_line(self):
        table = cohomology(self.p1.triple(), self.p1.divisor("point"))
        self.assertEqual(table.dims, {(0, 0): 2})
        self.assertEqual(table.chambers.lattice_points(), [(-1,), (0,)])

    def test_chambers(self):
        decomposition = chamber_decomposition(CechSetup(FormSpec(projective_line())))
        self.assertEqual(len(decomposition.chambers), 3)
        self.assertEqual(len(decomposition.bounded()), 1)
        self.assertEqual(decomposition.lattice_points(), [(0,)])

    def test_e1(self):
        report = e1_degeneration_check(CechSetup(FormSpec(projective_line())), threads=1)
        self.assertTrue(report.holds)
        self.assertEqual(report.shift, 1)
        self.assertEqual(report.hypercohomology, [1, 0, 1])
        self.assertEqual(report.hodge_sums, [1, 0, 1])

        complex_ = total_complex_at_degree(CechSetup(FormSpec(projective_line())), (0,))
        self.assertEqual(complex_.cohomology_dims(), [1, 0, 1])

    def test_e1_decorated_line(self):
        setup = CechSetup(FormSpec(load("p1-b0-cinf.json").triple()))
        report = e1_degeneration_check(setup, threads=1)
        self.assertTrue(report.holds)
        self.assertEqual(report.hypercohomology, [0, 0, 0])
        self.assertEqual(report.hodge_sums, [0, 0, 0])

    def test_e1_exceptional_divisor(self):
        exceptional = hypersurface_report(square_cone(), threads=1).exceptional
        self.assertTrue(exceptional.fan.is_complete())

        report = e1_degeneration_check(CechSetup(FormSpec(exceptional)), threads=1)
        self.assertTrue(report.holds, report.hypercohomology)
        self.assertEqual(report.shift, 2)
        self.assertEqual(report.hypercohomology, [0, 0, 1, 0, 0, 0])
        self.assertEqual(report.hodge_sums, [0, 0, 1, 0, 0, 0])

    def test_affine_chart(self):
        setup = CechSetup(FormSpec(quadrant()))
        self.assertEqual(cech_complex_at_degree(setup, (1, 0)).cohomology_dims(), [1])
        self.assertEqual(cech_complex_at_degree(setup, (0, 1)).cohomology_dims(), [0])
        self.assertEqual(cech_complex_at_degree(setup, (1, 1), 2).cohomology_dims(), [1])

    def test_higher_direct_images(self):
        triple = self.qc.triple()
        chain = resolve_log_simplicial(triple, self.qc.order("cb"), certify=False)
        setup = CechSetup(FormSpec(chain.final_quadruple()), base=triple)
        report = higher_direct_image_check(setup, range(4), 3, threads=1)
        self.assertTrue(report.holds, report.mismatches)
        self.assertEqual(report.checked, 343 * 4)

    def test_higher_direct_images_six_rays(self):
        triple = self.r65.triple()
        fan = star_subdivision(triple.fan, triple.fan.rays[0])
        self.assertTrue(fan.is_simplicial())

        setup = CechSetup(FormSpec(triple.with_fan(fan)), base=triple)
        report = higher_direct_image_check(setup, range(5), 1, threads=1)
        self.assertTrue(report.holds, report.mismatches)
        self.assertEqual(report.checked, 81 * 5)

    def test_hypersurface(self):
        report = hypersurface_report(square_cone(), threads=1)
        self.assertEqual(tuple(report.separating.ray), (1, 1, 2))
        self.assertEqual(report.table[(1, 1)], 1)
        self.assertEqual(report.total, 1)

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            CechSetup(FormSpec(projective_line()), base=projective_line())
        with self.assertRaises(PreconditionError):
            complete_cohomology_dims(CechSetup(FormSpec(quadrant())))
        with self.assertRaises(PreconditionError):
            higher_direct_image_check(CechSetup(FormSpec(quadrant())), [0], 1)
