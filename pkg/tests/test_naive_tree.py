from unittest import TestCase

from reachsched.basic.exceptions import ContractViolationError
from reachsched.scheduling.error_model import SafetyEnvelope, example_model
from reachsched.scheduling.naive_tree import NAIVE, naive_tree_schedule


class TestNaiveTree(TestCase):
    def setUp(self):
        self.model = example_model()

    def test_single_step(self):
        schedule, nodes = naive_tree_schedule(self.model, SafetyEnvelope([10.0, 10.0], 5.0, 4.0), None)
        self.assertEqual([1], schedule.bits)
        self.assertEqual(NAIVE, schedule.provenance)
        self.assertEqual(3, nodes)

    def test_silent_schedule_allowed(self):
        schedule, _ = naive_tree_schedule(self.model, SafetyEnvelope([10.0] * 3, 1.0, 4.0), None)
        self.assertEqual([0, 0], schedule.bits)
        self.assertEqual(0, schedule.cost)

    def test_node_count_bound(self):
        for L in range(1, 9):
            _, nodes = naive_tree_schedule(self.model, SafetyEnvelope([100.0] * (L + 1), 1.0, 100.0), None)
            self.assertEqual(2 ** (L + 1) - 1, nodes)

    def test_pruning(self):
        # the silent branch leaves v_max right away
        _, nodes = naive_tree_schedule(self.model, SafetyEnvelope([10.0, 4.0, 4.0], 3.5, 4.0), None)
        self.assertEqual(5, nodes)

    def test_no_leaf(self):
        schedule, nodes = naive_tree_schedule(self.model, SafetyEnvelope([10.0] * 3, 5.0, 0.05), None)
        self.assertIsNone(schedule)
        self.assertEqual(7, nodes)

    def test_input_bound(self):
        model = example_model(u_max=4.0)
        schedule, _ = naive_tree_schedule(model, SafetyEnvelope([10.0] * 3, 5.0, 4.0), None)
        # the input bound forbids communicating at v = 5 and at 6.1
        self.assertIsNone(schedule)

    def test_horizon_cap(self):
        with self.assertRaises(ContractViolationError):
            naive_tree_schedule(self.model, SafetyEnvelope([10.0] * 22, 1.0, 4.0), None)
        with self.assertRaises(ContractViolationError):
            naive_tree_schedule(self.model, SafetyEnvelope([10.0] * 6, 1.0, 4.0), None, L_cap=4)
