import json
import unittest

from torofan.fan import Order, fan_validate, is_log_simplicial
from torofan.kinds import StepKind
from torofan.resolution import (
    ResolutionChain,
    ResolutionStep,
    canonicity_check,
    is_sequentially_convex,
    resolve_log_simplicial,
    sequential_star,
    verify_chain,
)
from torofan.util import FanError, PreconditionError

from .fixtures import load


class TestResolution(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.qc = load("fix-qc.json")
        cls.r65 = load("fix-r65.json")
        cls.chain = resolve_log_simplicial(cls.qc.triple(), cls.qc.order("cb"), threads=1)

    def test_single_star(self):
        chain = self.chain
        self.assertEqual(len(chain), 1)

        step = chain.steps[0]
        self.assertEqual(step.kind, StepKind.STAR)
        self.assertEqual(step.ray, 0)
        self.assertEqual(step.base, frozenset((0, 1, 2, 3)))
        self.assertEqual(
            sorted(sorted(cone) for cone in chain.final_fan.maximal_cones),
            [[0, 1, 2], [0, 2, 3]],
        )
        self.assertTrue(is_log_simplicial(chain.final_quadruple()))
        self.assertEqual(chain.witnesses, {})

    def test_verify(self):
        self.assertEqual(verify_chain(self.chain), [])
        self.assertEqual(canonicity_check(self.chain), [])

    def test_verify_rejects(self):
        chain = self.chain
        missing = ResolutionChain(
            chain.quadruple,
            chain.order,
            chain.steps,
            chain.final_fan,
            {base: None for base in chain.composite},
        )
        self.assertEqual(
            verify_chain(missing), ["No composite good function over [0, 1, 2, 3]"]
        )

        step = chain.steps[0]
        bare = ResolutionStep(step.kind, step.ray, step.base, step.fan_before, step.fan_after)
        unsigned = ResolutionChain(
            chain.quadruple, chain.order, [bare], chain.final_fan, chain.composite
        )
        self.assertEqual(verify_chain(unsigned), ["Step 0 carries no certificate"])

    def test_json(self):
        obj = json.loads(json.dumps(self.chain.to_json()))
        again = ResolutionChain.from_json(obj)
        self.assertEqual(again.structure_key(), self.chain.structure_key())
        self.assertEqual(again.order, self.chain.order)
        self.assertEqual(verify_chain(again), [])

        del obj["steps"]
        with self.assertRaises(FanError):
            ResolutionChain.from_json(obj)

    def test_bad_order(self):
        with self.assertRaises(PreconditionError):
            resolve_log_simplicial(self.qc.triple(), self.qc.order("bc"))
        with self.assertRaises(PreconditionError):
            resolve_log_simplicial(self.qc.triple(), Order([1]))

    def test_sequential(self):
        triple = self.qc.triple()
        chain = sequential_star(triple, {0, 1}, Order([1, 0]))
        self.assertEqual([step.ray for step in chain.steps], [0, 1])
        self.assertTrue(all(step.kind == StepKind.STAR for step in chain.steps))

        convex, certificates = is_sequentially_convex(chain)
        self.assertTrue(convex)
        self.assertEqual(len(certificates), 2)
        self.assertTrue(all(pl is not None for found in certificates for pl in found.values()))

        with self.assertRaises(PreconditionError):
            sequential_star(triple, {0, 2}, Order([2, 0]))
        with self.assertRaises(PreconditionError):
            sequential_star(triple, {0, 1}, Order([1]))

    def test_six_rays(self):
        chain = resolve_log_simplicial(
            self.r65.triple(), self.r65.order("cb"), certify=False
        )
        self.assertTrue(chain.final_fan.is_simplicial())
        self.assertTrue(fan_validate(chain.final_fan).valid)
        self.assertTrue(chain.subdivision_map().is_efficient)
        self.assertEqual(chain.composite, {})

    def test_six_rays_certified(self):
        chain = resolve_log_simplicial(self.r65.triple(), self.r65.order("cb"), threads=1)
        self.assertTrue(chain.final_fan.is_simplicial())
        self.assertEqual(verify_chain(chain), [])
        self.assertEqual(canonicity_check(chain), [])

        self.assertTrue(chain.steps)
        for step in chain.steps:
            self.assertTrue(all(pl is not None for pl in step.certificates.values()))
        self.assertEqual(set(chain.composite), set(chain.fan.maximal_cones))
        self.assertTrue(all(pl is not None for pl in chain.composite.values()))
        for pl, epsilon in chain.witnesses.values():
            self.assertIsNotNone(pl)
            self.assertTrue(0 < epsilon <= 1)

        again = ResolutionChain.from_json(json.loads(json.dumps(chain.to_json())))
        self.assertEqual(again.structure_key(), chain.structure_key())
        self.assertEqual(
            {base: epsilon for base, (_, epsilon) in again.witnesses.items()},
            {base: epsilon for base, (_, epsilon) in chain.witnesses.items()},
        )
        self.assertEqual(verify_chain(again), [])

    def test_witness_rejected(self):
        tau = frozenset((0, 1, 2, 3))
        pl = self.chain.composite[tau]
        chain = ResolutionChain(
            self.chain.quadruple,
            self.chain.order,
            self.chain.steps,
            self.chain.final_fan,
            self.chain.composite,
            {tau: (pl, 0)},
        )
        self.assertEqual(
            verify_chain(chain), ["Composition witness over [0, 1, 2, 3] has no positive eps"]
        )

        chain.witnesses = {tau: (None, None)}
        self.assertEqual(verify_chain(chain), ["No composition witness over [0, 1, 2, 3]"])

    def test_split_decorations(self):
        split = load("qc-split.json")
        chain = resolve_log_simplicial(split.triple(), split.order("cb"), certify=False)
        self.assertTrue(is_log_simplicial(chain.final_quadruple()))
        self.assertTrue(chain.subdivision_map().is_efficient)
        self.assertEqual(canonicity_check(chain), [])
