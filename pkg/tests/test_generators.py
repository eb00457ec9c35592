import json
from unittest import TestCase

from integrals.bochner_integrator import absolute_sum_check
from integrals.exceptions import SpecValidationError
from integrals.generators import (
    FAMILIES,
    PIECEWISE_LINEAR_BOUND,
    VALUE_BOUND,
    GeneratorConfig,
    generate,
)
from integrals.helpers import dyadic_exponent
from integrals.measure_space import DISCRETE, INTERVAL, pairwise_disjoint
from integrals.spec_file import dump_function, dump_series, dump_space


def dump_case(case):
    document = {"space": dump_space(case.measure)}
    if case.function is not None:
        document["function"] = dump_function(case.function)
    if case.series is not None:
        document["series"] = dump_series(case.series)
    return json.dumps(document, sort_keys=True)


class TestGeneratorConfig(TestCase):
    def test_bounds(self):
        for kwargs, field in (
            ({"seed": -1}, "seed"),
            ({"seed": 2**64}, "seed"),
            ({"seed": "7"}, "seed"),
            ({"seed": 1, "family": "polynomial"}, "family"),
            ({"seed": 1, "max_terms": 17}, "max_terms"),
            ({"seed": 1, "max_terms": 0}, "max_terms"),
            ({"seed": 1, "max_denominator_exponent": 13}, "max_denominator_exponent"),
            ({"seed": 1, "max_dimension": 5}, "max_dimension"),
            ({"seed": 1, "max_discrete_size": 17}, "max_discrete_size"),
            ({"seed": 1, "space": "sphere"}, "space"),
            ({"seed": 1, "family": "piecewise_linear", "space": DISCRETE}, "space"),
        ):
            with self.assertRaises(SpecValidationError) as context:
                GeneratorConfig(**kwargs)
            self.assertEqual(context.exception.field, field)

    def test_largest_seed(self):
        self.assertIsNotNone(generate(GeneratorConfig(2**64 - 1)).function)


class TestGenerate(TestCase):
    def test_deterministic(self):
        for family in FAMILIES:
            for seed in (0, 1, 12345, 2**63):
                config = GeneratorConfig(seed, family)
                self.assertEqual(dump_case(generate(config)), dump_case(generate(config)))

    def test_distinct_seeds(self):
        for family in FAMILIES:
            seen = set()
            collisions = 0
            for seed in range(1000):
                dumped = dump_case(generate(GeneratorConfig(seed, family)))
                if dumped in seen:
                    collisions += 1
                seen.add(dumped)
            self.assertLessEqual(collisions, 1, family)

    def test_simple_invariants(self):
        for seed in range(300):
            config = GeneratorConfig(seed, "simple", max_terms=5, max_denominator_exponent=6)
            case = generate(config)
            f = case.function
            self.assertLessEqual(len(f.terms), 5)
            self.assertTrue(pairwise_disjoint([s for _, s in f.terms]))
            for value in f.values():
                self.assertLessEqual(abs(value), VALUE_BOUND)
                self.assertLessEqual(dyadic_exponent(value), 6)
            self.assertGreaterEqual(case.measure.total_mass, 0)

    def test_forced_space(self):
        for seed in range(50):
            self.assertEqual(generate(GeneratorConfig(seed, space=DISCRETE)).measure.domain.kind, DISCRETE)
            self.assertEqual(generate(GeneratorConfig(seed, space=INTERVAL)).measure.domain.kind, INTERVAL)

    def test_piecewise_linear_bound(self):
        for seed in range(200):
            f = generate(GeneratorConfig(seed, "piecewise_linear")).function
            self.assertLessEqual(f.sup(), PIECEWISE_LINEAR_BOUND)
            self.assertGreaterEqual(f.inf(), -PIECEWISE_LINEAR_BOUND)

    def test_vector_dimension(self):
        for seed in range(100):
            f = generate(GeneratorConfig(seed, "vector_simple", max_dimension=3)).function
            self.assertIn(f.dimension, (1, 2, 3))

    def test_series_certificate(self):
        for seed in range(100):
            series = generate(GeneratorConfig(seed, "series")).series
            certificate = absolute_sum_check(series, series.length)
            self.assertTrue(certificate.holds)
            self.assertEqual(certificate.tail_bound, 0)
            self.assertEqual(absolute_sum_check(series, 0).tail_bound, certificate.partial)
