import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bochner_integrator import FiniteSeries, GeometricIndicatorSeries
from .exceptions import ComputationError, SpecValidationError
from .helpers import format_rational, parse_rational
from .measure_space import (
    DISCRETE,
    DiscreteSpace,
    DiscreteSubset,
    IntervalMeasure,
    IntervalSet,
)
from .mi_integrator import PiecewiseLinearFunction
from .simple_function import NormKind, SimpleFunction, VectorValue

TASKS = ("integrate_mi", "integrate_bochner", "compare", "approx_table")
RULES = ("geometric_indicator",)


@dataclass(frozen=True)
class TaskSpec:
    """A parsed and validated spec file."""

    task: str
    measure: object
    function: object = None
    series: object = None
    over: object = None
    norm: Optional[NormKind] = None
    depth: int = 20
    eta: Fraction = Fraction(0)
    truncation: int = 16
    max_level: int = 10
    seed: Optional[int] = None


def _expect(node, kind, field):
    if not isinstance(node, kind):
        names = {dict: "an object", list: "a list", str: "a string", int: "an integer"}
        raise SpecValidationError(field, f"expected {names.get(kind, kind.__name__)}")
    return node


def _get(node, key, field, kind=None):
    if key not in node:
        raise SpecValidationError(f"{field}.{key}", "missing field")
    if kind is None:
        return node[key]
    return _expect(node[key], kind, f"{field}.{key}")


def _rational(node, field):
    try:
        return parse_rational(node)
    except ValueError as e:
        raise SpecValidationError(field, str(e))


def _integer(node, field, minimum=0):
    if isinstance(node, bool) or not isinstance(node, int):
        raise SpecValidationError(field, "expected an integer")
    if node < minimum:
        raise SpecValidationError(field, f"must be at least {minimum}")
    return node


def _build(field, constructor, *args):
    """Runs a constructor, turning invariant violations into validation errors."""
    try:
        return constructor(*args)
    except (ValueError, TypeError, ComputationError) as e:
        raise SpecValidationError(field, str(e))


def parse_space(node, field="space"):
    """Parses a measure space declaration.

    Args:
        node (dict): `{"type": "discrete", "weights": [...]}` or
            `{"type": "interval", "breakpoints": [...], "densities": [...]}`

    Returns:
        DiscreteSpace or IntervalMeasure
    """
    _expect(node, dict, field)
    kind = _get(node, "type", field, str)
    if kind == "discrete":
        weights = _get(node, "weights", field, list)
        values = [_rational(w, f"{field}.weights[{i}]") for i, w in enumerate(weights)]
        return _build(f"{field}.weights", DiscreteSpace, tuple(values))
    if kind == "interval":
        breakpoints = _get(node, "breakpoints", field, list)
        densities = _get(node, "densities", field, list)
        return _build(
            field,
            IntervalMeasure,
            tuple(_rational(t, f"{field}.breakpoints[{i}]") for i, t in enumerate(breakpoints)),
            tuple(_rational(d, f"{field}.densities[{i}]") for i, d in enumerate(densities)),
        )
    raise SpecValidationError(f"{field}.type", f"unknown space type {kind!r}")


def parse_set(node, domain, field):
    _expect(node, dict, field)
    if domain.kind == DISCRETE:
        if "indices" not in node:
            raise SpecValidationError(field, "a set of a discrete space needs `indices`")
        indices = _get(node, "indices", field, list)
        values = [_integer(i, f"{field}.indices[{n}]") for n, i in enumerate(indices)]
        return _build(field, DiscreteSubset, domain.size, tuple(values))
    if "intervals" not in node:
        raise SpecValidationError(field, "a set of the interval space needs `intervals`")
    pairs = []
    for i, pair in enumerate(_get(node, "intervals", field, list)):
        location = f"{field}.intervals[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SpecValidationError(location, "expected a pair [a, b]")
        pairs.append((_rational(pair[0], f"{location}[0]"), _rational(pair[1], f"{location}[1]")))
    return _build(field, IntervalSet, tuple(pairs))


def _value(node, field):
    if isinstance(node, list):
        if not node:
            raise SpecValidationError(field, "a vector value needs components")
        return VectorValue(tuple(_rational(c, f"{field}[{i}]") for i, c in enumerate(node)))
    return _rational(node, field)


def parse_function(node, domain, field="function"):
    """Parses a simple or piecewise-linear function declaration on `domain`."""
    _expect(node, dict, field)
    kind = _get(node, "type", field, str)
    if kind == "simple":
        terms = []
        dimension = None
        for i, term in enumerate(_get(node, "terms", field, list)):
            location = f"{field}.terms[{i}]"
            _expect(term, dict, location)
            value = _value(_get(term, "value", location), f"{location}.value")
            term_dimension = value.dimension if isinstance(value, VectorValue) else None
            if i == 0:
                dimension = term_dimension
            elif term_dimension != dimension:
                raise SpecValidationError(f"{location}.value", "all values need the same dimension")
            terms.append((value, parse_set(_get(term, "set", location), domain, f"{location}.set")))
        return _build(field, SimpleFunction, domain, tuple(terms), dimension)
    if kind == "piecewise_linear":
        if domain.kind == DISCRETE:
            raise SpecValidationError(f"{field}.type", "piecewise-linear functions live on [0,1)")
        breakpoints = _get(node, "breakpoints", field, list)
        pieces = []
        for i, piece in enumerate(_get(node, "pieces", field, list)):
            location = f"{field}.pieces[{i}]"
            _expect(piece, dict, location)
            pieces.append(
                (
                    _rational(_get(piece, "a", location), f"{location}.a"),
                    _rational(_get(piece, "b", location), f"{location}.b"),
                )
            )
        return _build(
            field,
            PiecewiseLinearFunction,
            tuple(_rational(s, f"{field}.breakpoints[{i}]") for i, s in enumerate(breakpoints)),
            tuple(pieces),
        )
    raise SpecValidationError(f"{field}.type", f"unknown function type {kind!r}")


def parse_series(node, measure, field="series"):
    """Parses a finite series of functions or a rule-based series."""
    _expect(node, dict, field)
    kind = _get(node, "type", field, str)
    if kind == "series":
        terms = [
            parse_function(t, measure.domain, f"{field}.terms[{i}]")
            for i, t in enumerate(_get(node, "terms", field, list))
        ]
        dimensions = {getattr(t, "dimension", None) for t in terms}
        if len(dimensions) > 1:
            raise SpecValidationError(f"{field}.terms", "all terms need the same dimension")
        dimension = dimensions.pop() if dimensions else None
        return _build(field, FiniteSeries, measure, terms, dimension)
    if kind == "series_rule":
        rule = _get(node, "rule", field, str)
        if rule not in RULES:
            raise SpecValidationError(f"{field}.rule", f"unknown rule {rule!r}")
        ratio = _rational(_get(node, "ratio", field), f"{field}.ratio")
        return _build(f"{field}.ratio", GeometricIndicatorSeries, measure, ratio)
    raise SpecValidationError(f"{field}.type", f"unknown series type {kind!r}")


def parse_task(document, max_level=30):
    """Validates a whole spec document and returns the TaskSpec it declares.

    Args:
        document (dict): decoded JSON spec
        max_level (int, optional): largest dyadic level accepted

    Returns:
        TaskSpec
    """
    _expect(document, dict, "spec")
    task = document.get("task", "integrate_mi")
    if task not in TASKS:
        raise SpecValidationError("task", f"unknown task {task!r}, expected one of {', '.join(TASKS)}")
    measure = parse_space(_get(document, "space", "spec"))
    function = series = over = None
    if "function" in document:
        function = parse_function(document["function"], measure.domain)
    if "series" in document:
        series = parse_series(document["series"], measure)
    if "over" in document:
        over = parse_set(document["over"], measure.domain, "over")
    parameters = _expect(document.get("parameters", {}), dict, "parameters")
    values = {}
    for key, minimum in (("depth", 1), ("truncation", 0), ("max_level", 1)):
        if key in parameters:
            values[key] = _integer(parameters[key], f"parameters.{key}", minimum)
    if "seed" in parameters:
        values["seed"] = _integer(parameters["seed"], "parameters.seed")
    if "eta" in parameters:
        values["eta"] = _rational(parameters["eta"], "parameters.eta")
        if values["eta"] < 0:
            raise SpecValidationError("parameters.eta", "must be nonnegative")
    if "norm" in parameters:
        try:
            values["norm"] = NormKind(parameters["norm"])
        except ValueError:
            raise SpecValidationError("parameters.norm", "expected 'L1' or 'LInf'")
    spec = TaskSpec(task, measure, function, series, over, **values)
    validate_task(spec, max_level)
    return spec


def validate_task(spec, max_level=30):
    """Cross-field checks: each task gets the declarations it needs."""
    if spec.task == "integrate_bochner":
        if spec.series is None:
            raise SpecValidationError("series", "integrate_bochner needs a series")
        return
    if spec.function is None:
        raise SpecValidationError("function", f"{spec.task} needs a function")
    is_vector = getattr(spec.function, "dimension", None) is not None
    if spec.task == "integrate_mi":
        if is_vector and spec.norm is None:
            raise SpecValidationError("parameters.norm", "vector functions need a norm kind")
        if is_vector and spec.over is not None:
            raise SpecValidationError("over", "integration over a set needs a scalar function")
    elif is_vector:
        raise SpecValidationError("function", f"{spec.task} needs a scalar function")
    if spec.task == "compare" and spec.depth > max_level:
        raise SpecValidationError("parameters.depth", f"must be at most {max_level}")
    if spec.task == "approx_table":
        if spec.max_level > max_level:
            raise SpecValidationError("parameters.max_level", f"must be at most {max_level}")
        if spec.function.inf() < 0:
            raise SpecValidationError("function", "approx_table needs a nonnegative function")


def load_document(path):
    """Reads a JSON spec file without validating its content."""
    try:
        with open(path, encoding="utf-8") as spec_file:
            return json.load(spec_file)
    except OSError as e:
        raise SpecValidationError("spec", f"cannot read {path}: {e.strerror}")
    except UnicodeDecodeError as e:
        raise SpecValidationError("spec", f"{path} is not UTF-8 text: {e.reason} at byte {e.start}")
    except json.JSONDecodeError as e:
        raise SpecValidationError(f"spec (line {e.lineno}, column {e.colno})", e.msg)


def apply_overrides(document, task=None, parameters=None):
    """Returns a copy of the document with the task and parameters replaced.

    Command-line flags (`--depth`, `--eta`, `--max-level`) reach the spec file this
    way, so they go through the same validation as the file itself.
    """
    _expect(document, dict, "spec")
    document = dict(document)
    if task is not None:
        document["task"] = task
    if parameters:
        merged = dict(_expect(document.get("parameters", {}), dict, "parameters"))
        merged.update({k: v for k, v in parameters.items() if v is not None})
        document["parameters"] = merged
    return document


def load_task(path, max_level=30, task=None, parameters=None):
    """Reads and validates a JSON spec file, with optional overrides."""
    document = apply_overrides(load_document(path), task, parameters)
    return parse_task(document, max_level)


def dump_space(measure):
    if isinstance(measure, DiscreteSpace):
        return {"type": "discrete", "weights": [format_rational(w) for w in measure.weights]}
    return {
        "type": "interval",
        "breakpoints": [format_rational(t) for t in measure.breakpoints],
        "densities": [format_rational(d) for d in measure.densities],
    }


def dump_set(measurable_set):
    if isinstance(measurable_set, DiscreteSubset):
        return {"indices": list(measurable_set.indices)}
    return {
        "intervals": [[format_rational(a), format_rational(b)] for a, b in measurable_set.intervals]
    }


def _dump_value(value):
    if isinstance(value, VectorValue):
        return [format_rational(c) for c in value.components]
    return format_rational(value)


def dump_function(f):
    if isinstance(f, PiecewiseLinearFunction):
        return {
            "type": "piecewise_linear",
            "breakpoints": [format_rational(s) for s in f.breakpoints],
            "pieces": [{"a": format_rational(a), "b": format_rational(b)} for a, b in f.pieces],
        }
    return {
        "type": "simple",
        "terms": [{"value": _dump_value(v), "set": dump_set(s)} for v, s in f.terms],
    }


def dump_series(series):
    if isinstance(series, GeometricIndicatorSeries):
        return {"type": "series_rule", "rule": "geometric_indicator", "ratio": format_rational(series.ratio)}
    return {"type": "series", "terms": [dump_function(t) for t in series.terms]}
