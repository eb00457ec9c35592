import json
from fractions import Fraction
from unittest import TestCase

from integrals.exceptions import SpecValidationError
from integrals.measure_space import DiscreteSpace, IntervalMeasure
from integrals.mi_integrator import PiecewiseLinearFunction
from integrals.simple_function import NormKind, SimpleFunction
from integrals.spec_file import (
    apply_overrides,
    dump_function,
    dump_space,
    load_document,
    load_task,
    parse_function,
    parse_space,
    parse_task,
)

from .helpers import fixture_path

LEBESGUE_NODE = {"type": "interval", "breakpoints": ["0", "1"], "densities": ["1"]}
DISCRETE_NODE = {"type": "discrete", "weights": ["1", "1/2", "1/4"]}
IDENTITY_NODE = {"type": "piecewise_linear", "breakpoints": ["0", "1"], "pieces": [{"a": "1", "b": "0"}]}


def indicator_node(value, pair):
    return {"type": "simple", "terms": [{"value": value, "set": {"intervals": [pair]}}]}


class TestParsing(TestCase):
    def assertInvalid(self, field, callable, *args, **kwargs):
        with self.assertRaises(SpecValidationError) as context:
            callable(*args, **kwargs)
        self.assertEqual(context.exception.field, field)
        return context.exception

    def test_parse_space(self):
        self.assertEqual(parse_space(DISCRETE_NODE).total_mass, Fraction(7, 4))
        self.assertIsInstance(parse_space(LEBESGUE_NODE), IntervalMeasure)
        self.assertInvalid("space.type", parse_space, {"type": "sphere"})
        self.assertInvalid("space.weights[1]", parse_space, {"type": "discrete", "weights": ["1", 0.5]})
        self.assertInvalid("space.weights", parse_space, {"type": "discrete", "weights": ["1", "-1"]})
        self.assertInvalid("space", parse_space, {"type": "interval", "breakpoints": ["0", "1/2"], "densities": ["1"]})
        self.assertInvalid("space.densities", parse_space, {"type": "interval", "breakpoints": ["0", "1"]})

    def test_parse_function(self):
        domain = parse_space(LEBESGUE_NODE).domain
        f = parse_function(indicator_node("3/2", ["0", "1/2"]), domain)
        self.assertIsInstance(f, SimpleFunction)
        self.assertEqual(f.evaluate(Fraction(1, 4)), Fraction(3, 2))
        g = parse_function(IDENTITY_NODE, domain)
        self.assertEqual(g, PiecewiseLinearFunction.identity())

    def test_function_errors(self):
        interval = parse_space(LEBESGUE_NODE).domain
        discrete = parse_space(DISCRETE_NODE).domain
        self.assertInvalid("function.terms[0].value", parse_function, indicator_node(0.5, ["0", "1"]), interval)
        self.assertInvalid("function.terms[0].set.intervals[0][1]", parse_function, indicator_node("1", ["0", "2/0"]), interval)
        self.assertInvalid("function.terms[0].set", parse_function, indicator_node("1", ["0", "2"]), interval)
        self.assertInvalid("function.terms[0].set", parse_function, indicator_node("1", ["0", "1"]), discrete)
        self.assertInvalid("function.type", parse_function, IDENTITY_NODE, discrete)
        overlapping = {
            "type": "simple",
            "terms": [
                {"value": "1", "set": {"intervals": [["0", "1/2"]]}},
                {"value": "2", "set": {"intervals": [["1/4", "1"]]}},
            ],
        }
        self.assertInvalid("function", parse_function, overlapping, interval)
        mixed = {
            "type": "simple",
            "terms": [
                {"value": ["1", "2"], "set": {"intervals": [["0", "1/2"]]}},
                {"value": "2", "set": {"intervals": [["1/2", "1"]]}},
            ],
        }
        self.assertInvalid("function.terms[1].value", parse_function, mixed, interval)

    def test_parse_task_defaults(self):
        spec = parse_task({"space": LEBESGUE_NODE, "function": IDENTITY_NODE})
        self.assertEqual(spec.task, "integrate_mi")
        self.assertEqual((spec.depth, spec.eta, spec.truncation, spec.max_level), (20, 0, 16, 10))
        self.assertIsNone(spec.seed)

    def test_parse_task_parameters(self):
        document = {
            "task": "compare",
            "space": LEBESGUE_NODE,
            "function": IDENTITY_NODE,
            "parameters": {"depth": 12, "eta": "1/8", "seed": 4},
        }
        spec = parse_task(document)
        self.assertEqual((spec.depth, spec.eta, spec.seed), (12, Fraction(1, 8), 4))
        document["parameters"] = {"depth": 31}
        self.assertInvalid("parameters.depth", parse_task, document)
        document["parameters"] = {"depth": 0}
        self.assertInvalid("parameters.depth", parse_task, document)
        document["parameters"] = {"eta": "-1/8"}
        self.assertInvalid("parameters.eta", parse_task, document)
        document["parameters"] = {"depth": True}
        self.assertInvalid("parameters.depth", parse_task, document)

    def test_task_requirements(self):
        self.assertInvalid("task", parse_task, {"task": "differentiate", "space": LEBESGUE_NODE})
        self.assertInvalid("spec.space", parse_task, {"function": IDENTITY_NODE})
        self.assertInvalid("series", parse_task, {"task": "integrate_bochner", "space": LEBESGUE_NODE})
        self.assertInvalid("function", parse_task, {"task": "compare", "space": LEBESGUE_NODE})
        vector = {"type": "simple", "terms": [{"value": ["1", "2"], "set": {"intervals": [["0", "1"]]}}]}
        self.assertInvalid("parameters.norm", parse_task, {"space": LEBESGUE_NODE, "function": vector})
        self.assertInvalid("function", parse_task, {"task": "compare", "space": LEBESGUE_NODE, "function": vector})
        spec = parse_task({"space": LEBESGUE_NODE, "function": vector, "parameters": {"norm": "LInf"}})
        self.assertEqual(spec.norm, NormKind.LINF)
        self.assertInvalid(
            "parameters.norm", parse_task, {"space": LEBESGUE_NODE, "function": vector, "parameters": {"norm": "L2"}}
        )

    def test_series(self):
        document = {
            "task": "integrate_bochner",
            "space": LEBESGUE_NODE,
            "series": {"type": "series_rule", "rule": "geometric_indicator", "ratio": "3/2"},
        }
        self.assertInvalid("series.ratio", parse_task, document)
        document["series"]["rule"] = "harmonic"
        self.assertInvalid("series.rule", parse_task, document)
        document["series"] = {"type": "series", "terms": [indicator_node("1", ["0", "1"]), IDENTITY_NODE]}
        spec = parse_task(document)
        self.assertEqual(spec.series.length, 2)


class TestFiles(TestCase):
    def test_fixture_errors(self):
        with self.assertRaises(SpecValidationError) as context:
            load_task(fixture_path("mismatched_set.json"))
        self.assertEqual(context.exception.field, "function.terms[1].set")
        with self.assertRaises(SpecValidationError) as context:
            load_task(fixture_path("float_value.json"))
        self.assertEqual(context.exception.field, "function.terms[0].value")
        with self.assertRaises(SpecValidationError) as context:
            load_task(fixture_path("negative_table.json"))
        self.assertEqual(context.exception.field, "function")

    def test_malformed_json(self):
        with self.assertRaises(SpecValidationError) as context:
            load_document(fixture_path("malformed.json"))
        self.assertTrue(context.exception.field.startswith("spec (line "))

    def test_missing_file(self):
        with self.assertRaises(SpecValidationError) as context:
            load_document(fixture_path("no_such_spec.json"))
        self.assertEqual(context.exception.field, "spec")

    def test_undecodable_file(self):
        with self.assertRaises(SpecValidationError) as context:
            load_document(fixture_path("invalid_utf8.json"))
        self.assertEqual(context.exception.field, "spec")

    def test_task_must_be_a_name(self):
        with self.assertRaises(SpecValidationError) as context:
            load_task(fixture_path("task_list.json"))
        self.assertEqual(context.exception.field, "task")

    def test_load_task(self):
        spec = load_task(fixture_path("identity_compare.json"))
        self.assertEqual((spec.task, spec.depth, spec.eta), ("compare", 20, Fraction(1, 1024)))
        spec = load_task(fixture_path("identity_compare.json"), parameters={"depth": 8, "eta": None})
        self.assertEqual((spec.depth, spec.eta), (8, Fraction(1, 1024)))
        spec = load_task(fixture_path("lebesgue_simple.json"), task="approx_table", parameters={"max_level": 3})
        self.assertEqual((spec.task, spec.max_level), ("approx_table", 3))

    def test_apply_overrides_copies(self):
        document = {"space": LEBESGUE_NODE, "parameters": {"depth": 4}}
        updated = apply_overrides(document, "compare", {"depth": 9})
        self.assertEqual(document, {"space": LEBESGUE_NODE, "parameters": {"depth": 4}})
        self.assertEqual(updated["parameters"], {"depth": 9})
        self.assertEqual(updated["task"], "compare")

    def test_dump_parses_back(self):
        measure = DiscreteSpace(("1/2", "3"))
        self.assertEqual(parse_space(json.loads(json.dumps(dump_space(measure)))).weights, measure.weights)
        f = PiecewiseLinearFunction.tent("1/2")
        self.assertEqual(parse_function(dump_function(f), f.domain), f)
