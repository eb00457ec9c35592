from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from .exceptions import (
    OverlappingSetsError,
    PointOutsideDomainError,
    SpaceMismatchError,
    VectorOrderError,
)
from .helpers import as_fraction, format_rational
from .measure_space import (
    Domain,
    MeasurableSet,
    check_same_domain,
    pairwise_disjoint,
    set_difference,
    set_intersection,
    union_all,
)


class NormKind(Enum):
    L1 = "L1"
    LINF = "LInf"


@dataclass(frozen=True)
class VectorValue:
    """A point of E = R^d with exact rational components."""

    components: Tuple[Fraction, ...]

    def __post_init__(self):
        components = tuple(as_fraction(c) for c in self.components)
        if not components:
            raise ValueError("a vector value needs at least one component")
        object.__setattr__(self, "components", components)

    @classmethod
    def zero(cls, dimension):
        return cls(tuple(Fraction(0) for _ in range(dimension)))

    @property
    def dimension(self):
        return len(self.components)

    def __str__(self):
        return "(" + ",".join(format_rational(c) for c in self.components) + ")"

    def _check(self, other):
        if not isinstance(other, VectorValue) or other.dimension != self.dimension:
            raise SpaceMismatchError(f"cannot combine {self} with {other}")

    def __add__(self, other):
        self._check(other)
        return VectorValue(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        self._check(other)
        return VectorValue(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorValue(tuple(-a for a in self.components))

    def __mul__(self, factor):
        if isinstance(factor, VectorValue):
            return NotImplemented
        factor = as_fraction(factor)
        return VectorValue(tuple(a * factor for a in self.components))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.components)

    def norm(self, kind):
        if kind == NormKind.L1:
            return sum((abs(c) for c in self.components), Fraction(0))
        return max(abs(c) for c in self.components)


Value = Union[Fraction, VectorValue]


class PointwiseOp(Enum):
    ADD = "add"
    SUBTRACT = "subtract"
    SCALE = "scale"
    MAX = "max"
    MIN = "min"
    ABS = "abs"


def zero_value(dimension=None):
    return Fraction(0) if dimension is None else VectorValue.zero(dimension)


def is_zero_value(value):
    if isinstance(value, VectorValue):
        return value.is_zero()
    return value == 0


def norm_of(value, kind=NormKind.L1):
    """Norm of a value; the absolute value for scalars."""
    if isinstance(value, VectorValue):
        return value.norm(kind)
    return abs(value)


def _sort_key(value):
    if isinstance(value, VectorValue):
        return value.components
    return (value,)


def _coerce_value(value, dimension):
    if dimension is None:
        if isinstance(value, (VectorValue, list, tuple)):
            raise SpaceMismatchError(f"scalar function got vector value {value!r}")
        return as_fraction(value)
    if not isinstance(value, VectorValue):
        value = VectorValue(tuple(value))
    if value.dimension != dimension:
        raise SpaceMismatchError(f"expected a {dimension}-vector, got {value}")
    return value


@dataclass(frozen=True)
class SimpleFunction:
    """Elementary function sum_j value_j * 1_{set_j} with pairwise-disjoint sets.

    Scalar functions have `dimension` None; vector functions take values in
    R^dimension. Outside the listed sets the function is zero.

    Args:
        domain (Domain): the space Omega
        terms (tuple): (value, set) pairs, sets pairwise disjoint
        dimension (int, optional): vector dimension, None for scalars
    """

    domain: Domain
    terms: Tuple[Tuple[Value, MeasurableSet], ...] = ()
    dimension: Optional[int] = None

    def __post_init__(self):
        terms = tuple(
            (_coerce_value(value, self.dimension), measurable_set)
            for value, measurable_set in self.terms
        )
        sets = [measurable_set for _, measurable_set in terms]
        check_same_domain(self.domain.empty_set(), *sets)
        if not pairwise_disjoint(sets):
            raise OverlappingSetsError(
                "sets of a simple function must be pairwise disjoint; "
                "use SimpleFunction.from_linear_combination for overlapping sets"
            )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def zero(cls, domain, dimension=None):
        return cls(domain, (), dimension)

    @classmethod
    def indicator(cls, measurable_set, value=1, dimension=None):
        return cls(measurable_set.domain, ((value, measurable_set),), dimension)

    @classmethod
    def constant(cls, domain, value, dimension=None):
        return cls(domain, ((value, domain.full_set()),), dimension)

    @classmethod
    def from_linear_combination(cls, domain, terms, dimension=None):
        """Builds sum_i value_i * 1_{A_i} when the A_i may overlap.

        Each new term is refined against the pieces already built, so the
        result has pairwise-disjoint sets and the same pointwise values.
        """
        pieces = []
        for value, measurable_set in terms:
            value = _coerce_value(value, dimension)
            check_same_domain(domain.empty_set(), measurable_set)
            refined = []
            remaining = measurable_set
            for old_value, old_set in pieces:
                overlap = set_intersection(old_set, measurable_set)
                if not overlap.is_empty():
                    refined.append((old_value + value, overlap))
                rest = set_difference(old_set, measurable_set)
                if not rest.is_empty():
                    refined.append((old_value, rest))
                remaining = set_difference(remaining, old_set)
            if not remaining.is_empty():
                refined.append((value, remaining))
            pieces = refined
        return cls(domain, tuple(pieces), dimension)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*1_{s}" for v, s in self.terms)

    @property
    def zero_value(self):
        return zero_value(self.dimension)

    @property
    def is_vector(self):
        return self.dimension is not None

    def values(self):
        return [value for value, _ in self.terms]

    def canonicalize(self):
        """Canonical representation: distinct values, nonempty sets covering Omega.

        The complement of the listed sets is padded with a zero-value term.
        Terms are sorted by value, so equal functions have equal canonical forms.
        """
        groups = {}
        for value, measurable_set in self.terms:
            groups.setdefault(value, []).append(measurable_set)
        covered = union_all(self.domain, (s for _, s in self.terms))
        groups.setdefault(self.zero_value, []).append(~covered)
        terms = []
        for value in sorted(groups, key=_sort_key):
            merged = union_all(self.domain, groups[value])
            if not merged.is_empty():
                terms.append((value, merged))
        return SimpleFunction(self.domain, tuple(terms), self.dimension)

    def evaluate(self, point):
        if not self.domain.contains(point):
            raise PointOutsideDomainError(f"{point!r} is not a point of {self.domain}")
        for value, measurable_set in self.terms:
            if measurable_set.contains(point):
                return value
        return self.zero_value

    def map_values(self, function, dimension=None):
        """Applies `function` to every value; sets are unchanged."""
        return SimpleFunction(
            self.domain,
            tuple((function(value), s) for value, s in self.terms),
            dimension,
        )

    def common_refinement(self, other):
        """Yields (self value, other value, set) over a partition of Omega."""
        check_same_domain(self, other)
        other_terms = other.canonicalize().terms
        for value, measurable_set in self.canonicalize().terms:
            for other_value, other_set in other_terms:
                overlap = set_intersection(measurable_set, other_set)
                if not overlap.is_empty():
                    yield value, other_value, overlap

    def refine(self, cut):
        """Same function, with every set split along `cut` and its complement."""
        terms = []
        for value, measurable_set in self.terms:
            for piece in (set_intersection(measurable_set, cut), set_difference(measurable_set, cut)):
                if not piece.is_empty():
                    terms.append((value, piece))
        return SimpleFunction(self.domain, tuple(terms), self.dimension)

    def restrict(self, measurable_set):
        """The function 1_A * f: f on A and zero elsewhere."""
        terms = []
        for value, s in self.terms:
            piece = set_intersection(s, measurable_set)
            if not piece.is_empty():
                terms.append((value, piece))
        return SimpleFunction(self.domain, tuple(terms), self.dimension)

    def component(self, index):
        if not self.is_vector:
            raise SpaceMismatchError("a scalar function has no components")
        return self.map_values(lambda v: v.components[index])

    def support(self):
        return union_all(
            self.domain, (s for v, s in self.terms if not is_zero_value(v))
        )

    def supports_disjoint(self, other):
        """True when f * g = 0 pointwise, checked through the supports."""
        return set_intersection(self.support(), other.support()).is_empty()

    def is_dominated_by(self, other):
        """Pointwise f <= g, checked on the common refinement."""
        _require_scalar(self, "order comparison")
        _require_scalar(other, "order comparison")
        return all(v <= w for v, w, _ in self.common_refinement(other))

    def sup(self):
        _require_scalar(self, "sup")
        return max(self.canonicalize().values())

    def inf(self):
        _require_scalar(self, "inf")
        return min(self.canonicalize().values())

    def __add__(self, other):
        return pointwise_combine(self, other, PointwiseOp.ADD)

    def __sub__(self, other):
        return pointwise_combine(self, other, PointwiseOp.SUBTRACT)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        return pointwise_combine(self, op=PointwiseOp.SCALE, factor=factor)

    def maximum(self, other):
        return pointwise_combine(self, other, PointwiseOp.MAX)

    def minimum(self, other):
        return pointwise_combine(self, other, PointwiseOp.MIN)

    def absolute(self):
        return pointwise_combine(self, op=PointwiseOp.ABS)

    def pos_part(self):
        return pos_part(self)

    def neg_part(self):
        return neg_part(self)

    def integrate(self, measure):
        return integrate_elementary(self, measure)


def _require_scalar(function, operation):
    if function.is_vector:
        raise VectorOrderError(f"{operation} needs a scalar function, R^{function.dimension} has no order")


_BINARY = {
    PointwiseOp.ADD: lambda v, w: v + w,
    PointwiseOp.SUBTRACT: lambda v, w: v - w,
    PointwiseOp.MAX: max,
    PointwiseOp.MIN: min,
}


def pointwise_combine(f, g=None, op=PointwiseOp.ADD, factor=None):
    """Pointwise operation on simple functions, computed on the common refinement.

    Args:
        f (SimpleFunction): first operand
        g (SimpleFunction, optional): second operand for add, subtract, max and min
        op (PointwiseOp): operation
        factor (Fraction, optional): scale factor for PointwiseOp.SCALE

    Returns:
        SimpleFunction: canonical result
    """
    if op == PointwiseOp.SCALE:
        factor = as_fraction(factor)
        return f.map_values(lambda v: v * factor, f.dimension).canonicalize()
    if op == PointwiseOp.ABS:
        _require_scalar(f, "abs")
        return f.map_values(abs).canonicalize()
    if g is None:
        raise TypeError(f"{op.value} needs two functions")
    if f.dimension != g.dimension:
        raise SpaceMismatchError(f"dimensions differ: {f.dimension} and {g.dimension}")
    if op in (PointwiseOp.MAX, PointwiseOp.MIN):
        _require_scalar(f, op.value)
    combine = _BINARY[op]
    terms = tuple((combine(v, w), s) for v, w, s in f.common_refinement(g))
    return SimpleFunction(f.domain, terms, f.dimension).canonicalize()


def canonicalize(f):
    return f.canonicalize()


def evaluate(f, point):
    return f.evaluate(point)


def pos_part(f):
    """f+ = max(0, f)."""
    _require_scalar(f, "positive part")
    return f.map_values(lambda v: max(v, Fraction(0))).canonicalize()


def neg_part(f):
    """f- = max(0, -f)."""
    _require_scalar(f, "negative part")
    return f.map_values(lambda v: max(-v, Fraction(0))).canonicalize()


def norm_function(f, kind=NormKind.L1):
    """The scalar function omega -> ||f(omega)||; abs for scalar functions."""
    return f.map_values(lambda v: norm_of(v, kind)).canonicalize()


def integrate_elementary(f, measure):
    """Integral sum_j value_j * m(set_j) of a simple function.

    Terms with value zero contribute zero whatever the mass of their set.
    Vector functions are integrated componentwise.

    Args:
        f (SimpleFunction): integrand
        measure (DiscreteSpace or IntervalMeasure): finite measure on f's space

    Returns:
        Fraction or VectorValue: exact integral
    """
    check_same_domain(f, measure)
    total = f.zero_value
    for value, measurable_set in f.terms:
        if is_zero_value(value):
            continue
        total = total + value * measure.measure_of(measurable_set)
    return total
