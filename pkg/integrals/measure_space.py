from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from more_itertools import pairwise

from .exceptions import InvalidMeasureError, InvalidSetError, SpaceMismatchError
from .helpers import as_fraction, format_rational

INTERVAL = "interval"
DISCRETE = "discrete"


@dataclass(frozen=True)
class Domain:
    """The sample space Omega of a measure space.

    Either the unit interval [0, 1) or the finite set {0, ..., size - 1}.
    """

    kind: str
    size: Optional[int] = None

    def __post_init__(self):
        if self.kind == DISCRETE:
            if not isinstance(self.size, int) or self.size < 1:
                raise InvalidSetError(f"discrete space needs a positive size, got {self.size!r}")
        elif self.kind == INTERVAL:
            if self.size is not None:
                raise InvalidSetError("the interval space has no size")
        else:
            raise InvalidSetError(f"unknown space kind {self.kind!r}")

    def __str__(self):
        if self.kind == INTERVAL:
            return "[0,1)"
        return f"{{0,...,{self.size - 1}}}"

    def full_set(self):
        if self.kind == INTERVAL:
            return IntervalSet(((0, 1),))
        return DiscreteSubset(self.size, range(self.size))

    def empty_set(self):
        if self.kind == INTERVAL:
            return IntervalSet(())
        return DiscreteSubset(self.size, ())

    def contains(self, point):
        if self.kind == DISCRETE:
            return isinstance(point, int) and not isinstance(point, bool) and 0 <= point < self.size
        if isinstance(point, (bool, float)) or not isinstance(point, (int, Fraction)):
            return False
        return 0 <= point < 1

    def sample_points(self, count):
        """Deterministic grid of points of Omega used for pointwise spot checks."""
        if self.kind == DISCRETE:
            return list(range(self.size))
        return [Fraction(k, count) for k in range(count)]


UNIT_INTERVAL = Domain(INTERVAL)


def discrete_domain(size):
    return Domain(DISCRETE, size)


class SetOperators(object):
    """Python operators for the set algebra functions defined below."""

    def __or__(self, other):
        return set_union(self, other)

    def __and__(self, other):
        return set_intersection(self, other)

    def __sub__(self, other):
        return set_difference(self, other)

    def __xor__(self, other):
        return set_symmetric_difference(self, other)

    def __invert__(self):
        return set_complement(self)


def _normalize_intervals(pairs):
    """Sort, validate and merge [a, b) pairs so equal sets compare equal."""
    cleaned = []
    for pair in pairs:
        left, right = (as_fraction(p) for p in pair)
        if left < 0 or right > 1 or left > right:
            raise InvalidSetError(
                f"interval [{format_rational(left)},{format_rational(right)}) is not inside [0,1)"
            )
        if left < right:
            cleaned.append((left, right))
    cleaned.sort()
    merged = []
    for left, right in cleaned:
        if merged and left <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], right))
        else:
            merged.append((left, right))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet(SetOperators):
    """Finite union of half-open intervals [a, b) inside [0, 1).

    The intervals are stored sorted and maximally merged, so two IntervalSets
    are equal exactly when they are the same set.
    """

    intervals: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize_intervals(self.intervals))

    @property
    def domain(self):
        return UNIT_INTERVAL

    def __str__(self):
        if not self.intervals:
            return "{}"
        return " u ".join(f"[{format_rational(a)},{format_rational(b)})" for a, b in self.intervals)

    def is_empty(self):
        return not self.intervals

    def contains(self, point):
        if not UNIT_INTERVAL.contains(point):
            return False
        index = bisect_right([left for left, _ in self.intervals], point) - 1
        return index >= 0 and point < self.intervals[index][1]

    def endpoints(self):
        return sorted({p for pair in self.intervals for p in pair})

    def length(self):
        return sum((right - left for left, right in self.intervals), Fraction(0))

    def _union(self, other):
        return IntervalSet(self.intervals + other.intervals)

    def _intersection(self, other):
        result = []
        i = j = 0
        while i < len(self.intervals) and j < len(other.intervals):
            left = max(self.intervals[i][0], other.intervals[j][0])
            right = min(self.intervals[i][1], other.intervals[j][1])
            if left < right:
                result.append((left, right))
            if self.intervals[i][1] < other.intervals[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(result))

    def _complement(self):
        gaps = []
        cursor = Fraction(0)
        for left, right in self.intervals:
            if cursor < left:
                gaps.append((cursor, left))
            cursor = right
        if cursor < 1:
            gaps.append((cursor, Fraction(1)))
        return IntervalSet(tuple(gaps))


@dataclass(frozen=True)
class DiscreteSubset(SetOperators):
    """Subset of {0, ..., size - 1}, stored as a strictly increasing index tuple."""

    size: int
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        domain = discrete_domain(self.size)
        indices = tuple(sorted(set(self.indices)))
        for index in indices:
            if not domain.contains(index):
                raise InvalidSetError(f"index {index!r} is outside {domain}")
        object.__setattr__(self, "indices", indices)

    @property
    def domain(self):
        return discrete_domain(self.size)

    def __str__(self):
        return "{" + ",".join(str(i) for i in self.indices) + "}"

    def is_empty(self):
        return not self.indices

    def contains(self, point):
        return self.domain.contains(point) and point in self.indices

    def _union(self, other):
        return DiscreteSubset(self.size, self.indices + other.indices)

    def _intersection(self, other):
        return DiscreteSubset(self.size, set(self.indices) & set(other.indices))

    def _complement(self):
        return DiscreteSubset(self.size, set(range(self.size)) - set(self.indices))


MeasurableSet = Union[IntervalSet, DiscreteSubset]


def check_same_domain(*things):
    """Raise SpaceMismatchError unless every argument lives on the same Omega."""
    domains = {thing.domain for thing in things}
    if len(domains) > 1:
        names = ", ".join(sorted(str(d) for d in domains))
        raise SpaceMismatchError(f"objects live on different spaces: {names}")


def set_union(a, b):
    check_same_domain(a, b)
    return a._union(b)


def set_intersection(a, b):
    check_same_domain(a, b)
    return a._intersection(b)


def set_complement(a):
    return a._complement()


def set_difference(a, b):
    check_same_domain(a, b)
    return a._intersection(b._complement())


def set_symmetric_difference(a, b):
    return set_union(set_difference(a, b), set_difference(b, a))


def is_subset(a, b):
    return set_difference(a, b).is_empty()


@dataclass(frozen=True)
class DiscreteSpace:
    """Finite measure space {0, ..., N - 1} with a nonnegative weight per point."""

    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        if not weights:
            raise InvalidMeasureError("a discrete space needs at least one point")
        if any(w < 0 for w in weights):
            raise InvalidMeasureError("weights must be nonnegative")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def counting(cls, size):
        return cls(tuple(Fraction(1) for _ in range(size)))

    @classmethod
    def uniform(cls, size):
        return cls(tuple(Fraction(1, size) for _ in range(size)))

    @property
    def size(self):
        return len(self.weights)

    @property
    def domain(self):
        return discrete_domain(self.size)

    @property
    def total_mass(self):
        return sum(self.weights, Fraction(0))

    def measure_of(self, measurable_set):
        check_same_domain(self, measurable_set)
        return sum((self.weights[i] for i in measurable_set.indices), Fraction(0))


@dataclass(frozen=True)
class IntervalMeasure:
    """Measure on [0, 1) with a step density against length.

    Args:
        breakpoints: 0 = t_0 < ... < t_K = 1
        densities: K nonnegative densities, one per [t_{k-1}, t_k)
    """

    breakpoints: Tuple[Fraction, ...]
    densities: Tuple[Fraction, ...]

    def __post_init__(self):
        breakpoints = tuple(as_fraction(t) for t in self.breakpoints)
        densities = tuple(as_fraction(d) for d in self.densities)
        if len(breakpoints) < 2 or breakpoints[0] != 0 or breakpoints[-1] != 1:
            raise InvalidMeasureError("breakpoints must start at 0 and end at 1")
        if any(left >= right for left, right in pairwise(breakpoints)):
            raise InvalidMeasureError("breakpoints must be strictly increasing")
        if len(densities) != len(breakpoints) - 1:
            raise InvalidMeasureError(
                f"{len(breakpoints) - 1} pieces need as many densities, got {len(densities)}"
            )
        if any(d < 0 for d in densities):
            raise InvalidMeasureError("densities must be nonnegative")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "densities", densities)

    @classmethod
    def lebesgue(cls):
        return cls((0, 1), (1,))

    @property
    def domain(self):
        return UNIT_INTERVAL

    def pieces(self):
        """Yields (left, right, density) for each piece of the density."""
        for (left, right), density in zip(pairwise(self.breakpoints), self.densities):
            yield left, right, density

    @property
    def total_mass(self):
        return sum(((right - left) * d for left, right, d in self.pieces()), Fraction(0))

    def measure_of(self, measurable_set):
        check_same_domain(self, measurable_set)
        total = Fraction(0)
        for a, b in measurable_set.intervals:
            for left, right, density in self.pieces():
                overlap = min(b, right) - max(a, left)
                if overlap > 0:
                    total += density * overlap
        return total


Measure = Union[DiscreteSpace, IntervalMeasure]


def measure_of(measure, measurable_set):
    """Measure m(A) of a set, exact.

    Args:
        measure (DiscreteSpace or IntervalMeasure): finite measure
        measurable_set (DiscreteSubset or IntervalSet): set on the same space

    Returns:
        Fraction: nonnegative mass
    """
    return measure.measure_of(measurable_set)


def union_all(domain, sets):
    """Union of many sets of one domain in a single normalization pass."""
    sets = list(sets)
    check_same_domain(domain.empty_set(), *sets)
    if domain.kind == INTERVAL:
        return IntervalSet(tuple(pair for s in sets for pair in s.intervals))
    return DiscreteSubset(domain.size, tuple(i for s in sets for i in s.indices))


def pairwise_disjoint(sets):
    """True when no point of Omega lies in two of the given sets."""
    sets = list(sets)
    if not sets:
        return True
    check_same_domain(*sets)
    if sets[0].domain.kind == DISCRETE:
        indices = [i for s in sets for i in s.indices]
        return len(indices) == len(set(indices))
    pairs = sorted(pair for s in sets for pair in s.intervals)
    return all(left[1] <= right[0] for left, right in pairwise(pairs))
