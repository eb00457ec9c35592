import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from more_itertools import pairwise

from .exceptions import (
    InvalidSetError,
    NegativeIntegrandError,
    PointOutsideDomainError,
    UnsupportedIntegrandError,
)
from .helpers import as_fraction, format_rational, grid_floor, grid_floor_strict
from .measure_space import UNIT_INTERVAL, IntervalSet, check_same_domain
from .simple_function import SimpleFunction, integrate_elementary


@dataclass(frozen=True)
class PiecewiseLinearFunction:
    """Function on [0, 1) that is affine, a*x + b, on each [s_{j-1}, s_j).

    Args:
        breakpoints: 0 = s_0 < ... < s_J = 1
        pieces: J pairs (a, b)
    """

    breakpoints: Tuple[Fraction, ...]
    pieces: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        breakpoints = tuple(as_fraction(s) for s in self.breakpoints)
        pieces = tuple((as_fraction(a), as_fraction(b)) for a, b in self.pieces)
        if len(breakpoints) < 2 or breakpoints[0] != 0 or breakpoints[-1] != 1:
            raise InvalidSetError("breakpoints must start at 0 and end at 1")
        if any(left >= right for left, right in pairwise(breakpoints)):
            raise InvalidSetError("breakpoints must be strictly increasing")
        if len(pieces) != len(breakpoints) - 1:
            raise InvalidSetError(
                f"{len(breakpoints) - 1} intervals need as many pieces, got {len(pieces)}"
            )
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def constant(cls, value):
        return cls((0, 1), ((0, value),))

    @classmethod
    def identity(cls):
        return cls((0, 1), ((1, 0),))

    @classmethod
    def tent(cls, height=1):
        """2*height*x on [0, 1/2), 2*height*(1 - x) on [1/2, 1)."""
        height = as_fraction(height)
        return cls((0, Fraction(1, 2), 1), ((2 * height, 0), (-2 * height, 2 * height)))

    @property
    def domain(self):
        return UNIT_INTERVAL

    def __str__(self):
        parts = []
        for left, right, a, b in self.segments():
            parts.append(
                f"[{format_rational(left)},{format_rational(right)}): "
                f"{format_rational(a)}x+{format_rational(b)}"
            )
        return "; ".join(parts)

    def segments(self):
        """Yields (left, right, a, b) for every affine piece."""
        for (left, right), (a, b) in zip(pairwise(self.breakpoints), self.pieces):
            yield left, right, a, b

    def _piece_at(self, point):
        index = min(bisect_right(self.breakpoints, point) - 1, len(self.pieces) - 1)
        return self.pieces[index]

    def evaluate(self, point):
        if not UNIT_INTERVAL.contains(point):
            raise PointOutsideDomainError(f"{point!r} is not a point of [0,1)")
        a, b = self._piece_at(point)
        return a * point + b

    def refine(self, points):
        """Same function with extra breakpoints inserted."""
        inner = {as_fraction(p) for p in points if 0 < p < 1}
        breakpoints = sorted(set(self.breakpoints) | inner)
        pieces = tuple(self._piece_at(left) for left in breakpoints[:-1])
        return PiecewiseLinearFunction(tuple(breakpoints), pieces)

    def _map_pieces(self, function):
        return PiecewiseLinearFunction(
            self.breakpoints, tuple(function(a, b) for a, b in self.pieces)
        )

    def scale(self, factor):
        factor = as_fraction(factor)
        return self._map_pieces(lambda a, b: (a * factor, b * factor))

    def shift(self, constant):
        constant = as_fraction(constant)
        return self._map_pieces(lambda a, b: (a, b + constant))

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        merged = self.refine(other.breakpoints)
        pieces = []
        for left, (a, b) in zip(merged.breakpoints, merged.pieces):
            c, d = other._piece_at(left)
            pieces.append((a + c, b + d))
        return PiecewiseLinearFunction(merged.breakpoints, tuple(pieces))

    def __sub__(self, other):
        return self + (-other)

    def positive_part(self):
        """max(0, f), with breakpoints inserted at the zero crossings."""
        crossings = [
            -b / a for left, right, a, b in self.segments() if a != 0 and left < -b / a < right
        ]
        refined = self.refine(crossings)
        pieces = []
        for left, right, a, b in refined.segments():
            middle = (left + right) / 2
            pieces.append((a, b) if a * middle + b > 0 else (Fraction(0), Fraction(0)))
        return PiecewiseLinearFunction(refined.breakpoints, tuple(pieces))

    def negative_part(self):
        return (-self).positive_part()

    def absolute(self):
        return self.positive_part() + self.negative_part()

    def restrict(self, measurable_set):
        """1_A * f for an IntervalSet A; still piecewise linear."""
        check_same_domain(self, measurable_set)
        refined = self.refine(measurable_set.endpoints())
        pieces = tuple(
            (a, b) if measurable_set.contains(left) else (Fraction(0), Fraction(0))
            for left, _, a, b in refined.segments()
        )
        return PiecewiseLinearFunction(refined.breakpoints, pieces)

    def sup(self):
        """Supremum over [0, 1); right ends count as limits."""
        return max(max(a * left + b, a * right + b) for left, right, a, b in self.segments())

    def inf(self):
        return min(min(a * left + b, a * right + b) for left, right, a, b in self.segments())


def check_integrand(f):
    """Raise UnsupportedIntegrandError unless f is a scalar supported integrand."""
    if isinstance(f, PiecewiseLinearFunction):
        return
    if isinstance(f, SimpleFunction) and not f.is_vector:
        return
    raise UnsupportedIntegrandError(
        f"supported integrands are scalar simple functions and piecewise-linear functions, got {type(f).__name__}"
    )


def positive_part_of(f):
    check_integrand(f)
    if isinstance(f, SimpleFunction):
        return f.pos_part()
    return f.positive_part()


def negative_part_of(f):
    check_integrand(f)
    if isinstance(f, SimpleFunction):
        return f.neg_part()
    return f.negative_part()


def require_nonnegative(f):
    check_integrand(f)
    if f.inf() < 0:
        raise NegativeIntegrandError(f"integrand takes negative values (inf {format_rational(f.inf())})")


def exact_integral(f, measure):
    """Closed-form integral of a supported integrand (the oracle).

    Piecewise-linear pieces are integrated with the antiderivative
    a*x**2/2 + b*x, weighted by the step density of the measure.
    """
    check_integrand(f)
    if isinstance(f, SimpleFunction):
        return integrate_elementary(f, measure)
    check_same_domain(f, measure)
    total = Fraction(0)
    for x0, x1, density, a, b in _overlaps(f, measure):
        total += density * (a * (x1 * x1 - x0 * x0) / 2 + b * (x1 - x0))
    return total


def _overlaps(f, measure):
    """Yields (x0, x1, density, a, b) on the common refinement of f and the density."""
    for left, right, a, b in f.segments():
        for m_left, m_right, density in measure.pieces():
            x0, x1 = max(left, m_left), min(right, m_right)
            if x0 < x1 and density != 0:
                yield x0, x1, density, a, b


def level_value(value, level):
    """phi_n(v): v rounded down to the grid k/2**n, capped at n."""
    return min(grid_floor(value, level), Fraction(level))


def _left_level_value(value, level):
    """Limit of phi_n(w) as w increases to v."""
    return min(grid_floor_strict(value, level), Fraction(level))


def dyadic_value(f, level, point):
    """Value of the level-n dyadic approximation at a point.

    On decreasing pieces the right limit is used, so every level set is a
    finite union of half-open intervals; this changes values only at
    finitely many points and keeps f_n <= f_{n+1} <= f everywhere.
    """
    check_integrand(f)
    if isinstance(f, SimpleFunction):
        return level_value(f.evaluate(point), level)
    value = f.evaluate(point)
    a, _ = f._piece_at(point)
    if a < 0:
        return _left_level_value(value, level)
    return level_value(value, level)


def dyadic_approx(f, level):
    """Level-n simple function sum_k k/2**n * 1{k/2**n <= f < (k+1)/2**n} + n * 1{f >= n}.

    Level sets of piecewise-linear functions are solved exactly per affine
    piece; simple functions are regrouped term by term.

    Args:
        f: nonnegative scalar SimpleFunction or PiecewiseLinearFunction
        level (int): n >= 0; level 0 is the zero function

    Returns:
        SimpleFunction: f_n, with f_n <= f
    """
    require_nonnegative(f)
    if level < 0:
        raise ValueError(f"level must be nonnegative, got {level}")
    if isinstance(f, SimpleFunction):
        return f.map_values(lambda v: level_value(v, level)).canonicalize()
    scale = 2**level
    groups = {}
    for left, right, a, b in f.segments():
        if a == 0:
            groups.setdefault(level_value(b, level), []).append((left, right))
            continue
        low, high = sorted((a * left + b, a * right + b))
        first = math.ceil(low * scale)
        last = min(math.floor(high * scale), level * scale)
        cuts = [left, right]
        for k in range(first, last + 1):
            grid_point = Fraction(k, scale)
            if low < grid_point < high:
                cuts.append((grid_point - b) / a)
        for x0, x1 in pairwise(sorted(cuts)):
            middle = (x0 + x1) / 2
            groups.setdefault(level_value(a * middle + b, level), []).append((x0, x1))
    terms = tuple((value, IntervalSet(tuple(pairs))) for value, pairs in groups.items())
    return SimpleFunction(UNIT_INTERVAL, terms).canonicalize()


def _floor_antiderivative(u, cap):
    """G(u) = integral over [0, u] of floor(min(t, cap)) dt, for u >= 0."""
    if u > cap:
        return Fraction(cap * (cap - 1), 2) + cap * (u - cap)
    k = math.floor(u)
    return k * u - Fraction(k * (k + 1), 2)


def dyadic_integral(f, level, measure):
    """Integral of the level-n dyadic approximation, in closed form.

    Equal to integrate_elementary(dyadic_approx(f, level), measure) but never
    enumerates the level sets, so deep levels stay cheap.
    """
    require_nonnegative(f)
    if level < 0:
        raise ValueError(f"level must be nonnegative, got {level}")
    if isinstance(f, SimpleFunction):
        check_same_domain(f, measure)
        return sum(
            (level_value(v, level) * measure.measure_of(s) for v, s in f.terms),
            Fraction(0),
        )
    check_same_domain(f, measure)
    scale = 2**level
    cap = level * scale
    total = Fraction(0)
    for x0, x1, density, a, b in _overlaps(f, measure):
        if a == 0:
            total += density * level_value(b, level) * (x1 - x0)
            continue
        u0 = scale * (a * x0 + b)
        u1 = scale * (a * x1 + b)
        difference = _floor_antiderivative(u1, cap) - _floor_antiderivative(u0, cap)
        total += density * difference / (scale * scale * a)
    return total


class MonotoneApproxSequence(object):
    """The nondecreasing sequence of dyadic simple functions f_n converging up to f."""

    def __init__(self, target):
        require_nonnegative(target)
        self.target = target

    def level(self, n):
        return dyadic_approx(self.target, n)

    def value_at(self, n, point):
        return dyadic_value(self.target, n, point)

    def integral(self, n, measure):
        return dyadic_integral(self.target, n, measure)


class NonnegIntegral(NamedTuple):
    value: Fraction
    error_bound: Fraction
    level: Optional[int] = None


def integrate_nonneg(f, measure, level=None):
    """Integral of a nonnegative integrand, exact or at a dyadic level.

    With `level` None the closed-form oracle is returned with zero error.
    At level n the value is the integral of f_n, and the certified bound is
    2**-n * m(Omega) + integral of (f - n)+, which is 2**-n * m(Omega)
    whenever n >= sup f.

    Args:
        f: nonnegative SimpleFunction or PiecewiseLinearFunction
        measure: finite measure on f's space
        level (int, optional): dyadic level n

    Returns:
        NonnegIntegral: (value, error_bound, level)
    """
    require_nonnegative(f)
    if level is None:
        return NonnegIntegral(exact_integral(f, measure), Fraction(0))
    value = dyadic_integral(f, level, measure)
    return NonnegIntegral(value, level_error_bound(f, level, measure), level)


def level_error_bound(f, level, measure):
    """Certified bound on the integral of f - f_n."""
    if isinstance(f, SimpleFunction):
        excess = f.map_values(lambda v: max(v - level, Fraction(0)))
    else:
        excess = f.shift(-level).positive_part()
    return Fraction(1, 2**level) * measure.total_mass + exact_integral(excess, measure)


class IntegrabilityClass(Enum):
    INTEGRABLE = "integrable"
    QUASI_INTEGRABLE_PLUS = "quasi_integrable_plus"
    QUASI_INTEGRABLE_MINUS = "quasi_integrable_minus"
    NOT_QUASI_INTEGRABLE = "not_quasi_integrable"


def classify_integrability(positive, negative):
    """Classify from the integrals of f+ and f-; None stands for +infinity.

    QUASI_INTEGRABLE_PLUS means the integral is +infinity (only f- is
    integrable), QUASI_INTEGRABLE_MINUS means it is -infinity.
    """
    if positive is not None and negative is not None:
        return IntegrabilityClass.INTEGRABLE
    if negative is not None:
        return IntegrabilityClass.QUASI_INTEGRABLE_PLUS
    if positive is not None:
        return IntegrabilityClass.QUASI_INTEGRABLE_MINUS
    return IntegrabilityClass.NOT_QUASI_INTEGRABLE


class MIResult(NamedTuple):
    integrability: IntegrabilityClass
    value: Optional[Fraction]
    positive: Optional[Fraction]
    negative: Optional[Fraction]


def mi_integrate(f, measure):
    """Integral through the positive and negative parts: int f+ - int f-.

    Args:
        f: scalar SimpleFunction or PiecewiseLinearFunction
        measure: finite measure on f's space

    Returns:
        MIResult: integrability class, value (when integrable) and both parts
    """
    positive = integrate_nonneg(positive_part_of(f), measure).value
    negative = integrate_nonneg(negative_part_of(f), measure).value
    integrability = classify_integrability(positive, negative)
    value = positive - negative if integrability == IntegrabilityClass.INTEGRABLE else None
    logging.debug(f"MI integral {value}: positive part {positive}, negative part {negative}")
    return MIResult(integrability, value, positive, negative)


def restrict_integrand(f, measurable_set):
    check_integrand(f)
    check_same_domain(f, measurable_set)
    return f.restrict(measurable_set)


def mi_integrate_over_set(measurable_set, f, measure):
    """Integral of f over A, defined as the integral of 1_A * f."""
    return mi_integrate(restrict_integrand(f, measurable_set), measure).value
