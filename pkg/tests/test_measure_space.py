from fractions import Fraction
from unittest import TestCase

from hypothesis import given
from hypothesis import strategies as st

from integrals.exceptions import InvalidMeasureError, InvalidSetError, SpaceMismatchError
from integrals.measure_space import (
    UNIT_INTERVAL,
    DiscreteSpace,
    DiscreteSubset,
    IntervalMeasure,
    IntervalSet,
    discrete_domain,
    is_subset,
    measure_of,
    pairwise_disjoint,
    set_complement,
    set_intersection,
    set_union,
)

from .helpers import interval_set

GRID = 8
IntervalSets = st.lists(
    st.tuples(st.integers(0, GRID), st.integers(0, GRID)), max_size=5
).map(
    lambda pairs: IntervalSet(
        tuple((Fraction(min(a, b), GRID), Fraction(max(a, b), GRID)) for a, b in pairs)
    )
)
DiscreteSubsets = st.lists(st.integers(0, 5), max_size=6).map(lambda i: DiscreteSubset(6, tuple(i)))
GRID_POINTS = [Fraction(2 * k + 1, 4 * GRID) for k in range(2 * GRID)]
STEP_MEASURE = IntervalMeasure(("0", "1/2", "1"), ("2", "0"))


class TestMeasurableSets(TestCase):
    def test_union(self):
        self.assertEqual(set_union(interval_set((0, "1/2")), interval_set(("1/2", 1))), interval_set((0, 1)))
        a = interval_set(("1/4", "3/4"))
        self.assertEqual(set_union(a, IntervalSet()), a)
        self.assertEqual(
            set_union(interval_set((0, "1/4")), interval_set(("1/8", "1/2"))),
            interval_set((0, "1/2")),
        )

    def test_intersection_and_complement(self):
        self.assertTrue(set_complement(interval_set((0, 1))).is_empty())
        self.assertEqual(
            set_intersection(interval_set((0, "1/2")), interval_set(("1/4", 1))),
            interval_set(("1/4", "1/2")),
        )
        a = interval_set(("1/3", "2/3"))
        self.assertTrue(set_intersection(a, ~a).is_empty())
        self.assertEqual(str(~a), "[0,1/3) u [2/3,1)")

    def test_discrete_sets(self):
        a = DiscreteSubset(4, (2, 0, 2))
        self.assertEqual(a.indices, (0, 2))
        self.assertEqual(~a, DiscreteSubset(4, (1, 3)))
        self.assertTrue(a.contains(2))
        self.assertFalse(a.contains(True))
        with self.assertRaises(InvalidSetError):
            DiscreteSubset(4, (4,))

    def test_invalid_intervals(self):
        for pair in ((0, 2), ("1/2", "1/4"), ("-1/2", "1/2")):
            with self.assertRaises(InvalidSetError):
                IntervalSet((pair,))
        with self.assertRaises(TypeError):
            IntervalSet(((0.0, 0.5),))

    def test_space_mismatch(self):
        with self.assertRaises(SpaceMismatchError):
            set_union(interval_set((0, 1)), DiscreteSubset(2, (0,)))
        with self.assertRaises(SpaceMismatchError):
            set_union(DiscreteSubset(3, (0,)), DiscreteSubset(2, (0,)))

    def test_contains(self):
        a = interval_set((0, "1/4"), ("1/2", "3/4"))
        self.assertTrue(a.contains(Fraction(0)))
        self.assertFalse(a.contains(Fraction(1, 4)))
        self.assertTrue(a.contains(Fraction(1, 2)))
        self.assertFalse(a.contains(1))
        self.assertFalse(UNIT_INTERVAL.contains(0.5))

    def test_pairwise_disjoint(self):
        self.assertTrue(pairwise_disjoint([interval_set((0, "1/2")), interval_set(("1/2", 1))]))
        self.assertFalse(pairwise_disjoint([interval_set((0, "1/2")), interval_set(("1/4", 1))]))
        self.assertTrue(pairwise_disjoint([]))

    @given(IntervalSets, IntervalSets)
    def test_set_algebra_matches_membership(self, a, b):
        for point in GRID_POINTS:
            self.assertEqual((a | b).contains(point), a.contains(point) or b.contains(point))
            self.assertEqual((a & b).contains(point), a.contains(point) and b.contains(point))
            self.assertEqual((~a).contains(point), not a.contains(point))
            self.assertEqual((a ^ b).contains(point), a.contains(point) != b.contains(point))

    @given(IntervalSets, IntervalSets)
    def test_de_morgan(self, a, b):
        self.assertEqual(~(a | b), ~a & ~b)
        self.assertEqual(~(a & b), ~a | ~b)
        self.assertEqual(a | b, b | a)
        self.assertEqual(a | a, a)

    @given(DiscreteSubsets, DiscreteSubsets)
    def test_discrete_de_morgan(self, a, b):
        self.assertEqual(~(a | b), ~a & ~b)
        self.assertTrue(is_subset(a & b, a))
        self.assertEqual(a - b, a & ~b)


class TestMeasures(TestCase):
    def test_measure_of(self):
        self.assertEqual(measure_of(IntervalMeasure.lebesgue(), interval_set((0, "1/2"))), Fraction(1, 2))
        weights = DiscreteSpace(("1/4", "1/4", "1/4", "1/4"))
        self.assertEqual(measure_of(weights, DiscreteSubset(4, (0, 2))), Fraction(1, 2))
        self.assertEqual(measure_of(STEP_MEASURE, interval_set(("1/4", "3/4"))), Fraction(1, 2))

    def test_total_mass(self):
        self.assertEqual(STEP_MEASURE.total_mass, 1)
        self.assertEqual(DiscreteSpace.counting(5).total_mass, 5)
        self.assertEqual(DiscreteSpace.uniform(3).total_mass, 1)
        self.assertEqual(STEP_MEASURE.measure_of(UNIT_INTERVAL.full_set()), STEP_MEASURE.total_mass)

    def test_invalid_measures(self):
        with self.assertRaises(InvalidMeasureError):
            DiscreteSpace(("1/2", "-1/2"))
        with self.assertRaises(InvalidMeasureError):
            IntervalMeasure(("0", "1/2"), ("1",))
        with self.assertRaises(InvalidMeasureError):
            IntervalMeasure(("0", "1/2", "1/2", "1"), ("1", "1", "1"))
        with self.assertRaises(InvalidMeasureError):
            IntervalMeasure(("0", "1"), ("1", "2"))

    def test_measure_space_mismatch(self):
        with self.assertRaises(SpaceMismatchError):
            measure_of(DiscreteSpace.counting(3), DiscreteSubset(4, (0,)))
        with self.assertRaises(SpaceMismatchError):
            measure_of(IntervalMeasure.lebesgue(), DiscreteSubset(1, (0,)))

    def test_discrete_domain(self):
        self.assertEqual(str(discrete_domain(4)), "{0,...,3}")
        self.assertEqual(DiscreteSpace.counting(4).domain, discrete_domain(4))

    @given(IntervalSets, IntervalSets)
    def test_additivity_and_monotonicity(self, a, b):
        m = STEP_MEASURE
        self.assertEqual(m.measure_of(a | b) + m.measure_of(a & b), m.measure_of(a) + m.measure_of(b))
        self.assertEqual(m.measure_of(a - b) + m.measure_of(a & b), m.measure_of(a))
        self.assertLessEqual(m.measure_of(a & b), m.measure_of(a))
        self.assertGreaterEqual(m.measure_of(a), 0)
