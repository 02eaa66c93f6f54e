import itertools
import math
from unittest import TestCase

import numpy as np

from reachsched.basic.exceptions import ConstructionError, ContractViolationError, InfeasibilityError
from reachsched.scheduling.error_model import SafetyEnvelope, check_C1_C4, example_model
from reachsched.scheduling.naive_tree import naive_tree_schedule
from reachsched.scheduling.symbolic import CommSchedule, Partition, build_partition, build_symbolic_system, \
    build_timed_system, min_comm_schedule, optcom


def example_system(M=6, nu_bar=5.0):
    return build_symbolic_system(example_model(), Partition(M, nu_bar))


def envelope(L, v_init, v_final, v_max=5.0):
    return SafetyEnvelope([v_max] * (L + 1), v_init, v_final)


class TestPartition(TestCase):
    def test_levels(self):
        part = Partition(6, 5.0)
        np.testing.assert_array_equal([1.0, 2.0, 3.0, 4.0, 5.0, math.inf], part.levels)
        self.assertEqual(6, len(part))

    def test_symbol_of(self):
        part = Partition(6, 5.0)
        self.assertEqual(0, part.symbol_of(0.0))
        self.assertEqual(0, part.symbol_of(1.0))
        self.assertEqual(1, part.symbol_of(1.0001))
        self.assertEqual(4, part.symbol_of(5.0))
        self.assertEqual(5, part.symbol_of(5.01))

    def test_two_symbols(self):
        np.testing.assert_array_equal([3.0, math.inf], Partition(2, 3.0).levels)

    def test_invalid(self):
        with self.assertRaises(ContractViolationError):
            Partition(1, 5.0)
        with self.assertRaises(ContractViolationError):
            Partition(5, 0.0)

    def test_from_envelope(self):
        env = SafetyEnvelope([1.0, 4.0, 2.0], 0.5, 0.5)
        self.assertEqual(4.0, build_partition(env, 10).nu_bar)
        self.assertEqual(7.0, build_partition(env, 10, nu_bar=7.0).nu_bar)

    def test_nested_levels(self):
        coarse = Partition(10, 5.0).levels
        fine = Partition(28, 5.0).levels
        self.assertTrue(set(coarse).issubset(set(fine)))


class TestSymbolicSystem(TestCase):
    def setUp(self):
        self.T = example_system()

    def test_successors(self):
        np.testing.assert_array_equal([0, 1, 1, 2, 3, 5], self.T.successors[:, 1])
        np.testing.assert_array_equal([1, 2, 3, 4, 5, 5], self.T.successors[:, 0])
        self.assertEqual(12, len(self.T.edges()))

    def test_listed_transitions(self):
        # symbols are 0-based here: s_5 is index 4
        self.assertIn((4, 1, 3), self.T.edges())
        self.assertIn((4, 0, 5), self.T.edges())
        self.assertIn((1, 1, 1), self.T.edges())

    def test_inf_symbol_absorbs(self):
        self.assertEqual(5, self.T.successor(5, 0))
        self.assertEqual(5, self.T.successor(5, 1))


class TestTimedSystem(TestCase):
    def setUp(self):
        self.T = example_system()
        self.model = example_model()

    def test_iterations(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            M = int(rng.integers(2, 30))
            L = int(rng.integers(1, 15))
            T = build_symbolic_system(self.model, Partition(M, 5.0))
            TA = build_timed_system(T, envelope(L, 2.5, 3.0), None, self.model)
            self.assertEqual(2 * M * L, TA.iterations)

    def test_edge_constraints(self):
        v_max = [3.0, 2.0, 5.0]
        TA = build_timed_system(self.T, SafetyEnvelope(v_max, 2.5, 3.0), None, self.model)
        for (i, k), c, (j, k_next) in TA.edges():
            self.assertEqual(k + 1, k_next)
            self.assertLessEqual(self.T.level(i), v_max[k])
            self.assertLessEqual(self.T.level(j), v_max[k + 1])
        self.assertFalse(TA.allowed[0, 2, 0])
        self.assertTrue(TA.allowed[0, 2, 1])

    def test_input_bound_removes_communication(self):
        model = example_model(u_max=2.5)
        TA = build_timed_system(self.T, envelope(3, 2.5, 3.0), None, model)
        self.assertTrue(TA.allowed[0, 1, 1])
        self.assertFalse(TA.allowed[0, 2, 1])
        self.assertTrue(TA.allowed[0, 2, 0])

    def test_initial_and_final(self):
        TA = build_timed_system(self.T, envelope(3, 2.5, 2.0), None, self.model)
        self.assertEqual(2, TA.s_init)
        np.testing.assert_array_equal([True, True, False, False, False, False], TA.final)

    def test_v_init_above_nu_bar(self):
        with self.assertRaises(ConstructionError):
            build_timed_system(self.T, envelope(3, 7.0, 2.0), None, self.model)


class TestSchedules(TestCase):
    def setUp(self):
        self.T = example_system()
        self.model = example_model()

    def solve(self, L, v_init, v_final):
        return min_comm_schedule(build_timed_system(self.T, envelope(L, v_init, v_final), None, self.model))

    def test_unique_optimum(self):
        schedule, run = self.solve(3, 2.5, 2.0)
        self.assertEqual([1, 0, 1], schedule.bits)
        self.assertEqual([2, 1, 2, 1], run)
        self.assertEqual(2, schedule.cost)

    def test_ties_prefer_late_communication(self):
        schedule, run = self.solve(4, 2.5, 3.0)
        self.assertEqual([1, 0, 0, 1], schedule.bits)
        self.assertEqual([2, 1, 2, 3, 2], run)

    def test_infeasible(self):
        with self.assertRaises(InfeasibilityError) as ctx:
            self.solve(3, 2.5, 0.5)
        self.assertEqual(3, ctx.exception.layer)

    def test_empty_horizon(self):
        schedule, run = self.solve(0, 2.5, 3.0)
        self.assertEqual([], schedule.bits)
        self.assertEqual([2], run)
        with self.assertRaises(InfeasibilityError):
            self.solve(0, 2.5, 2.0)

    def test_optcom_mid_horizon(self):
        TA = build_timed_system(self.T, envelope(4, 2.5, 3.0), None, self.model)
        bits, run = optcom(TA, 4, 2)
        self.assertEqual([1, 1], bits)
        self.assertEqual([4, 3, 2], run)
        bits, run = optcom(TA, 0, 3)
        self.assertEqual([1], bits)
        self.assertEqual(0.0, TA.cost_to_go(0, 3))
        with self.assertRaises(ContractViolationError):
            optcom(TA, 0, 4)

    def test_optcom_last_layer_infeasible(self):
        TA = build_timed_system(self.T, envelope(4, 2.5, 1.0), None, self.model)
        with self.assertRaises(InfeasibilityError) as ctx:
            optcom(TA, 4, 3)
        self.assertEqual(4, ctx.exception.layer)

    def test_comm_schedule(self):
        schedule = CommSchedule([1, 0, 1])
        self.assertEqual({"bits": [1, 0, 1], "provenance": "offline", "cost": 2}, schedule.to_dict())
        self.assertEqual([1, 0, 1], list(CommSchedule.from_dict(schedule.to_dict())))
        with self.assertRaises(AssertionError):
            CommSchedule([0, 1])


class TestRandomizedSoundness(TestCase):
    """ Accepted schedules satisfy the bound conditions and never beat the exhaustive search. """

    def random_envelope(self, rng, L):
        return SafetyEnvelope(rng.uniform(2.0, 5.0, size=L + 1), rng.uniform(0.5, 3.0), rng.uniform(1.5, 4.0))

    def test_accepted_schedules(self):
        rng = np.random.default_rng(7)
        model = example_model()
        accepted = 0
        for _ in range(200):
            L = int(rng.integers(1, 13))
            env = self.random_envelope(rng, L)
            T = build_symbolic_system(model, Partition(int(rng.integers(4, 13)), 5.0))
            naive, _ = naive_tree_schedule(model, env, None)
            try:
                schedule, _ = min_comm_schedule(build_timed_system(T, env, None, model))
            except InfeasibilityError:
                continue
            accepted += 1
            self.assertTrue(check_C1_C4(model, env, None, schedule.bits).ok)
            self.assertIsNotNone(naive)
            self.assertLessEqual(naive.cost, schedule.cost)
        self.assertGreater(accepted, 0)

    def test_nested_partitions_never_cost_more(self):
        rng = np.random.default_rng(11)
        model = example_model()
        systems = [build_symbolic_system(model, Partition(M, 5.0)) for M in (10, 28, 82, 244)]
        for _ in range(20):
            env = self.random_envelope(rng, int(rng.integers(1, 13)))
            costs = []
            for T in systems:
                try:
                    costs.append(min_comm_schedule(build_timed_system(T, env, None, model))[0].cost)
                except InfeasibilityError:
                    costs.append(math.inf)
            self.assertEqual(sorted(costs, reverse=True), costs)


def accepted_costs(TA):
    """ Costs of every bit string starting with a communication that T_A accepts from s_init. """
    succ = TA.T.successors
    costs = []
    for tail in itertools.product((0, 1), repeat=TA.L - 1):
        bits = (1,) + tail
        s = TA.s_init
        for k, c in enumerate(bits):
            if not TA.allowed[k, s, c]:
                break
            s = succ[s, c]
        else:
            if TA.final[s]:
                costs.append(sum(bits))
    return costs


class TestExhaustiveOracle(TestCase):
    def test_optimum_matches_enumeration(self):
        rng = np.random.default_rng(23)
        model = example_model()
        compared = 0
        for _ in range(40):
            L = int(rng.integers(1, 13))
            env = SafetyEnvelope(rng.uniform(2.0, 5.0, size=L + 1), rng.uniform(0.5, 3.0), rng.uniform(1.5, 4.0))
            T = build_symbolic_system(model, Partition(int(rng.integers(4, 13)), 5.0))
            TA = build_timed_system(T, env, None, model)
            costs = accepted_costs(TA)
            if not costs:
                with self.assertRaises(InfeasibilityError):
                    min_comm_schedule(TA)
                continue
            compared += 1
            schedule, run = min_comm_schedule(TA)
            self.assertEqual(min(costs), schedule.cost)
            self.assertEqual(L + 1, len(run))
            self.assertTrue(TA.final[run[-1]])
        self.assertGreater(compared, 0)
