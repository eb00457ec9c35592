"""Seeded random cases for the property suites and the `gen` command.

The algorithm is fixed: every draw comes from one `random.Random(seed)`
instance, in the order the helpers below consume it, and only integer draws
(`randint`, `choice`) are used. Python's Mersenne Twister and its integer
sampling are stable across platforms, so one seed always produces the same
case.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from more_itertools import pairwise

from .bochner_integrator import FiniteSeries
from .exceptions import SpecValidationError
from .measure_space import DISCRETE, INTERVAL, DiscreteSpace, DiscreteSubset, IntervalMeasure, IntervalSet
from .mi_integrator import PiecewiseLinearFunction
from .simple_function import SimpleFunction, VectorValue

FAMILIES = ("simple", "piecewise_linear", "vector_simple", "series")
MAX_TERMS = 16
MAX_DENOMINATOR_EXPONENT = 12
MAX_DIMENSION = 4
MAX_DISCRETE_SIZE = 16
MAX_SEED = 2**64

VALUE_BOUND = 8
PIECEWISE_LINEAR_BOUND = 4
DENSITY_BOUND = 2
MAX_MEASURE_PIECES = 4
MAX_LINEAR_PIECES = 6
MAX_SERIES_TERMS = 6


@dataclass(frozen=True)
class GeneratorConfig:
    """Which family to draw from, the seed and the size bounds.

    Args:
        seed (int): 0 <= seed < 2**64
        family (str): simple, piecewise_linear, vector_simple or series
        max_terms (int, optional): terms per simple function, at most 16
        max_denominator_exponent (int, optional): denominators divide 2**e, e at most 12
        max_dimension (int, optional): vector dimension, at most 4
        max_discrete_size (int, optional): points of a discrete space, at most 16
        space (str, optional): force "interval" or "discrete" spaces
    """

    seed: int
    family: str = "simple"
    max_terms: int = MAX_TERMS
    max_denominator_exponent: int = MAX_DENOMINATOR_EXPONENT
    max_dimension: int = MAX_DIMENSION
    max_discrete_size: int = MAX_DISCRETE_SIZE
    space: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < MAX_SEED:
            raise SpecValidationError("seed", f"must be an integer in [0, 2**64), got {self.seed!r}")
        if self.family not in FAMILIES:
            raise SpecValidationError("family", f"unknown family {self.family!r}, expected one of {', '.join(FAMILIES)}")
        for field, low, high in (
            ("max_terms", 1, MAX_TERMS),
            ("max_denominator_exponent", 0, MAX_DENOMINATOR_EXPONENT),
            ("max_dimension", 1, MAX_DIMENSION),
            ("max_discrete_size", 1, MAX_DISCRETE_SIZE),
        ):
            value = getattr(self, field)
            if isinstance(value, bool) or not isinstance(value, int) or not low <= value <= high:
                raise SpecValidationError(field, f"must be between {low} and {high}, got {value!r}")
        if self.space not in (None, INTERVAL, DISCRETE):
            raise SpecValidationError("space", f"expected 'interval' or 'discrete', got {self.space!r}")
        if self.family == "piecewise_linear" and self.space == DISCRETE:
            raise SpecValidationError("space", "piecewise-linear functions live on [0,1)")


class GeneratedCase(NamedTuple):
    measure: object
    function: object = None
    series: object = None


def random_dyadic(rng, bound, max_exponent, nonnegative=False):
    """Uniform draw of k/2**e with e <= max_exponent and |k/2**e| <= bound."""
    scale = 2 ** rng.randint(0, max_exponent)
    low = 0 if nonnegative else -bound * scale
    return Fraction(rng.randint(low, bound * scale), scale)


def random_cuts(rng, count, max_exponent):
    """Up to `count` distinct dyadic points strictly inside (0, 1), sorted."""
    if max_exponent == 0:
        return []
    cuts = set()
    for _ in range(count):
        scale = 2 ** rng.randint(1, max_exponent)
        cuts.add(Fraction(rng.randint(1, scale - 1), scale))
    return sorted(cuts)


def random_measure(rng, config, kind=None):
    """Discrete space with dyadic weights, or [0, 1) with a step density."""
    kind = kind or config.space or rng.choice((INTERVAL, DISCRETE))
    exponent = config.max_denominator_exponent
    if kind == DISCRETE:
        size = rng.randint(1, config.max_discrete_size)
        return DiscreteSpace(tuple(random_dyadic(rng, DENSITY_BOUND, exponent, True) for _ in range(size)))
    cuts = random_cuts(rng, rng.randint(0, MAX_MEASURE_PIECES - 1), exponent)
    breakpoints = [Fraction(0)] + cuts + [Fraction(1)]
    densities = tuple(
        random_dyadic(rng, DENSITY_BOUND, exponent, True) for _ in range(len(breakpoints) - 1)
    )
    return IntervalMeasure(tuple(breakpoints), densities)


def random_partition(rng, domain, parts, max_exponent):
    """`parts` pairwise-disjoint sets (some possibly empty) of the domain.

    Cells (points, or intervals between random dyadic cuts) are dealt to the
    parts or left out, so the union need not cover the domain.
    """
    if domain.kind == DISCRETE:
        buckets = [[] for _ in range(parts)]
        for index in range(domain.size):
            owner = rng.randint(-1, parts - 1)
            if owner >= 0:
                buckets[owner].append(index)
        return [DiscreteSubset(domain.size, tuple(bucket)) for bucket in buckets]
    cuts = random_cuts(rng, rng.randint(parts - 1, 2 * parts), max_exponent)
    edges = [Fraction(0)] + cuts + [Fraction(1)]
    buckets = [[] for _ in range(parts)]
    for left, right in pairwise(edges):
        owner = rng.randint(-1, parts - 1)
        if owner >= 0:
            buckets[owner].append((left, right))
    return [IntervalSet(tuple(bucket)) for bucket in buckets]


def random_simple_function(rng, config, measure, dimension=None):
    terms = rng.randint(1, config.max_terms)
    exponent = config.max_denominator_exponent
    sets = random_partition(rng, measure.domain, terms, exponent)
    pairs = []
    for measurable_set in sets:
        if dimension is None:
            value = random_dyadic(rng, VALUE_BOUND, exponent)
        else:
            value = VectorValue(tuple(random_dyadic(rng, VALUE_BOUND, exponent) for _ in range(dimension)))
        pairs.append((value, measurable_set))
    return SimpleFunction(measure.domain, tuple(pairs), dimension)


def random_piecewise_linear(rng, config):
    """Piecewise-linear f on [0, 1) with |f| <= 4, possibly discontinuous at breakpoints."""
    exponent = config.max_denominator_exponent
    cuts = random_cuts(rng, rng.randint(0, min(config.max_terms, MAX_LINEAR_PIECES) - 1), exponent)
    breakpoints = [Fraction(0)] + cuts + [Fraction(1)]
    pieces = []
    for left, right in pairwise(breakpoints):
        start = random_dyadic(rng, PIECEWISE_LINEAR_BOUND, exponent)
        end = random_dyadic(rng, PIECEWISE_LINEAR_BOUND, exponent)
        slope = (end - start) / (right - left)
        pieces.append((slope, start - slope * left))
    return PiecewiseLinearFunction(tuple(breakpoints), tuple(pieces))


def generate(config):
    """Draws one case of the configured family.

    Args:
        config (GeneratorConfig): seed, family and bounds

    Returns:
        GeneratedCase: measure plus function (or series for the series family)
    """
    rng = random.Random(config.seed)
    if config.family == "piecewise_linear":
        measure = random_measure(rng, config, INTERVAL)
        return GeneratedCase(measure, random_piecewise_linear(rng, config))
    measure = random_measure(rng, config)
    if config.family == "simple":
        return GeneratedCase(measure, random_simple_function(rng, config, measure))
    if config.family == "vector_simple":
        dimension = rng.randint(1, config.max_dimension)
        return GeneratedCase(measure, random_simple_function(rng, config, measure, dimension))
    count = rng.randint(1, min(config.max_terms, MAX_SERIES_TERMS))
    terms = [random_simple_function(rng, config, measure) for _ in range(count)]
    return GeneratedCase(measure, series=FiniteSeries(measure, terms))
