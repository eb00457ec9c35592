import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from .exceptions import (
    CertificateViolationError,
    MissingCertificateError,
    PointOutsideDomainError,
    SpaceMismatchError,
    TheoremViolationError,
    UnsupportedIntegrandError,
)
from .helpers import as_fraction, ceil_int, dyadic_exponent
from .measure_space import check_same_domain
from .mi_integrator import (
    PiecewiseLinearFunction,
    check_integrand,
    dyadic_approx,
    dyadic_integral,
    dyadic_value,
    exact_integral,
    level_value,
    mi_integrate,
    negative_part_of,
    positive_part_of,
)
from .simple_function import (
    NormKind,
    SimpleFunction,
    integrate_elementary,
    norm_function,
    zero_value,
)


def l1_norm(f, measure, kind=NormKind.L1):
    """L1 norm: the integral of omega -> ||f(omega)||.

    Args:
        f: SimpleFunction (scalar or vector) or PiecewiseLinearFunction
        measure: finite measure on f's space
        kind (NormKind, optional): norm of R^d for vector functions

    Returns:
        Fraction: nonnegative norm
    """
    if isinstance(f, SimpleFunction):
        return integrate_elementary(norm_function(f, kind), measure)
    check_integrand(f)
    return exact_integral(f.absolute(), measure)


def _integral_of(term, measure):
    if isinstance(term, SimpleFunction):
        return integrate_elementary(term, measure)
    return mi_integrate(term, measure).value


class ElementarySeries(object):
    """A sequence f_1, f_2, ... of functions on one measure space.

    Subclasses implement `term` and `tail_bound`; `tail_bound(N)` certifies
    sum_{n > N} of the integral of ||f_n||.

    Args:
        measure: finite measure shared by every term
        dimension (int, optional): vector dimension, None for scalars
        norm_kind (NormKind, optional): norm of R^d
        length (int, optional): number of terms when the series is finite
    """

    def __init__(self, measure, dimension=None, norm_kind=NormKind.L1, length=None):
        self.measure = measure
        self.domain = measure.domain
        self.dimension = dimension
        self.norm_kind = norm_kind
        self.length = length

    @property
    def is_finite(self):
        return self.length is not None

    @property
    def is_elementary(self):
        return True

    def indices(self, index):
        """Term indices 1..N, stopping early at the end of a finite series."""
        last = index if self.length is None else min(index, self.length)
        return range(1, last + 1)

    def term(self, n):
        raise NotImplementedError("You must implement a `term` method")

    def tail_bound(self, index):
        raise NotImplementedError("You must implement a `tail_bound` method")

    def term_integral(self, n):
        return _integral_of(self.term(n), self.measure)

    def term_norm_integral(self, n):
        return l1_norm(self.term(n), self.measure, self.norm_kind)

    def term_value_at(self, n, point):
        return self.term(n).evaluate(point)


class FiniteSeries(ElementarySeries):
    """Finite list of terms; the tail bound is the exact remaining norm mass.

    Terms are simple functions, or MI-integrable piecewise-linear functions
    for series of integrable (not only elementary) terms.
    """

    def __init__(self, measure, terms, dimension=None, norm_kind=NormKind.L1):
        terms = tuple(terms)
        for term in terms:
            check_same_domain(measure, term)
            if isinstance(term, SimpleFunction):
                if term.dimension != dimension:
                    raise SpaceMismatchError(
                        f"series of dimension {dimension} got a term of dimension {term.dimension}"
                    )
            elif isinstance(term, PiecewiseLinearFunction):
                if dimension is not None:
                    raise SpaceMismatchError("piecewise-linear terms are scalar")
            else:
                raise UnsupportedIntegrandError(f"unsupported series term {type(term).__name__}")
        super(FiniteSeries, self).__init__(measure, dimension, norm_kind, len(terms))
        self.terms = terms

    @property
    def is_elementary(self):
        return all(isinstance(term, SimpleFunction) for term in self.terms)

    def term(self, n):
        if 1 <= n <= self.length:
            return self.terms[n - 1]
        return SimpleFunction.zero(self.domain, self.dimension)

    def tail_bound(self, index):
        return sum(
            (self.term_norm_integral(n) for n in range(max(index, 0) + 1, self.length + 1)),
            Fraction(0),
        )

    def component(self, index):
        return FiniteSeries(self.measure, [term.component(index) for term in self.terms])


class RuleSeries(ElementarySeries):
    """Series given by a rule n -> f_n together with its tail certificate.

    Args:
        measure: finite measure shared by every term
        rule (callable): n -> SimpleFunction
        tail_bound (callable): N -> Fraction bounding the remaining norm mass
    """

    def __init__(self, measure, rule, tail_bound, dimension=None, norm_kind=NormKind.L1):
        if tail_bound is None:
            raise MissingCertificateError("a rule-based series needs a tail certificate")
        super(RuleSeries, self).__init__(measure, dimension, norm_kind)
        self.rule = rule
        self._tail_bound = tail_bound

    def term(self, n):
        term = self.rule(n)
        check_same_domain(self.measure, term)
        return term

    def tail_bound(self, index):
        return self._tail_bound(index)


class GeometricIndicatorSeries(RuleSeries):
    """f_n = r**n * 1_Omega, with tail |r|**(N+1) / (1 - |r|) * m(Omega)."""

    def __init__(self, measure, ratio):
        ratio = as_fraction(ratio)
        if not abs(ratio) < 1:
            raise ValueError(f"the ratio of a geometric series must satisfy |r| < 1, got {ratio}")
        self.ratio = ratio
        super(GeometricIndicatorSeries, self).__init__(measure, self._rule, self._tail)

    def _rule(self, n):
        return SimpleFunction.constant(self.domain, self.ratio**n)

    def _tail(self, index):
        size = abs(self.ratio)
        return size ** (index + 1) / (1 - size) * self.measure.total_mass

    def term_integral(self, n):
        return self.ratio**n * self.measure.total_mass


def termination_level(f):
    """Level from which the dyadic approximations of f+ and f- equal them, or None.

    That happens when every value is a dyadic rational k/2**e with e and the
    absolute value both at most the level.
    """
    if isinstance(f, SimpleFunction):
        values = f.values()
    elif all(a == 0 for a, _ in f.pieces):
        values = [b for _, b in f.pieces]
    else:
        return None
    level = 0
    for value in values:
        if value == 0:
            continue
        exponent = dyadic_exponent(value)
        if exponent is None:
            return None
        level = max(level, exponent, ceil_int(abs(value)), 1)
    return level


class TelescopingSeries(ElementarySeries):
    """h_n = (f_n^(1) - f_{n-1}^(1)) - (f_n^(2) - f_{n-1}^(2)), with f_0 = 0.

    f_n^(1) and f_n^(2) are the dyadic approximations of f+ and f-. Term
    integrals use the closed-form level integral and terms are only
    materialized on request. The tail certificate is exact:
    int |f| minus the absolute sum up to N.
    """

    def __init__(self, measure, target):
        check_integrand(target)
        check_same_domain(measure, target)
        super(TelescopingSeries, self).__init__(measure, length=termination_level(target))
        self.target = target
        self.positive = positive_part_of(target)
        self.negative = negative_part_of(target)
        self.positive_integral = exact_integral(self.positive, measure)
        self.negative_integral = exact_integral(self.negative, measure)
        self._level_cache = {0: (Fraction(0), Fraction(0))}
        if isinstance(target, SimpleFunction):
            self._masses = tuple(
                (max(v, Fraction(0)), max(-v, Fraction(0)), measure.measure_of(s))
                for v, s in target.canonicalize().terms
                if v != 0
            )

    def level_integrals(self, level):
        """(int f_n^(1), int f_n^(2)) at one level, computed once per level."""
        if level not in self._level_cache:
            self._level_cache[level] = self._compute_level_integrals(level)
        return self._level_cache[level]

    def _compute_level_integrals(self, level):
        if isinstance(self.target, SimpleFunction):
            positive = sum((level_value(p, level) * m for p, _, m in self._masses), Fraction(0))
            negative = sum((level_value(q, level) * m for _, q, m in self._masses), Fraction(0))
            return positive, negative
        return (
            dyadic_integral(self.positive, level, self.measure),
            dyadic_integral(self.negative, level, self.measure),
        )

    def increment_integrals(self, n):
        """(int h_n^(1), int h_n^(2)); both are nonnegative."""
        positive, negative = self.level_integrals(n)
        previous_positive, previous_negative = self.level_integrals(n - 1)
        return positive - previous_positive, negative - previous_negative

    def term_integral(self, n):
        positive, negative = self.increment_integrals(n)
        return positive - negative

    def term_norm_integral(self, n):
        # h^(1) and h^(2) live on the disjoint supports of f+ and f-
        positive, negative = self.increment_integrals(n)
        return positive + negative

    def positive_increment(self, n):
        return dyadic_approx(self.positive, n) - dyadic_approx(self.positive, n - 1)

    def negative_increment(self, n):
        return dyadic_approx(self.negative, n) - dyadic_approx(self.negative, n - 1)

    def term(self, n):
        return self.positive_increment(n) - self.negative_increment(n)

    def partial_value_at(self, k, point):
        """g_k(omega) = f_k^(1)(omega) - f_k^(2)(omega)."""
        return dyadic_value(self.positive, k, point) - dyadic_value(self.negative, k, point)

    def term_value_at(self, n, point):
        return self.partial_value_at(n, point) - self.partial_value_at(n - 1, point)

    def tail_bound(self, index):
        if self.length is not None and index >= self.length:
            return Fraction(0)
        positive, negative = self.level_integrals(index)
        return (self.positive_integral - positive) + (self.negative_integral - negative)


class SummabilityCertificate(NamedTuple):
    """Partial absolute sum up to `index` plus a bound on the rest."""

    partial: Fraction
    tail_bound: Fraction
    index: int

    @property
    def total(self):
        return self.partial + self.tail_bound

    @property
    def holds(self):
        return self.tail_bound is not None and self.tail_bound >= 0


def absolute_sum_check(series, index):
    """Certificate for the summability condition: sum of int ||f_n|| is finite.

    Args:
        series (ElementarySeries): series to check
        index (int): N >= 0

    Returns:
        SummabilityCertificate: exact partial sum up to N and the tail bound B(N)
    """
    if index < 0:
        raise ValueError(f"index must be nonnegative, got {index}")
    partial = sum((series.term_norm_integral(n) for n in series.indices(index)), Fraction(0))
    return SummabilityCertificate(partial, series.tail_bound(index), index)


class BochnerEstimate(NamedTuple):
    value: object
    error_bound: Fraction
    index: int


def bochner_integrate(series, index):
    """Sum of the term integrals up to N, with ||exact - value|| <= B(N).

    For a finite series and N at least its length the bound is zero and the
    value is the Bochner integral itself.
    """
    value = zero_value(series.dimension)
    for n in series.indices(index):
        value = value + series.term_integral(n)
    return BochnerEstimate(value, series.tail_bound(index), index)


def pointwise_partial_sum(series, point, index):
    """sum_{n <= N} f_n(omega), used to spot-check f = sum f_n a.e."""
    if not series.domain.contains(point):
        raise PointOutsideDomainError(f"{point!r} is not a point of {series.domain}")
    value = zero_value(series.dimension)
    for n in series.indices(index):
        value = value + series.term_value_at(n, point)
    return value


@dataclass(frozen=True)
class BochnerRepresentation:
    """A series whose sum represents `target`, with its summability certificate."""

    series: ElementarySeries
    certificate: Optional[SummabilityCertificate]
    target: object = None
    eta: Optional[Fraction] = None

    @property
    def summability_partial(self):
        return None if self.certificate is None else self.certificate.partial


def represent(series, index, target=None, eta=None):
    """Wraps any series into a BochnerRepresentation certified at index N."""
    return BochnerRepresentation(series, absolute_sum_check(series, index), target, eta)


class TraceRecord(NamedTuple):
    index: int
    positive_increment: Fraction
    negative_increment: Fraction
    term: Fraction
    abs_term: Fraction
    partial_integral: Fraction
    running_abs_sum: Fraction


class ConstructionTrace(object):
    """Per-index record of the telescoping construction.

    Integrals are stored exactly; the functions h_n^(1), h_n^(2), h_n and
    g_k are rebuilt on demand.
    """

    def __init__(self, series, records):
        self.series = series
        self.records = tuple(records)

    @property
    def running_abs_sum(self):
        return self.records[-1].running_abs_sum if self.records else Fraction(0)

    def positive_increment(self, n):
        return self.series.positive_increment(n)

    def negative_increment(self, n):
        return self.series.negative_increment(n)

    def term(self, n):
        return self.series.term(n)

    def partial_sum(self, k):
        """g_k = h_1 + ... + h_k, as a simple function."""
        total = SimpleFunction.zero(self.series.domain)
        for n in self.series.indices(k):
            total = total + self.series.term(n)
        return total

    def dyadic_difference(self, k):
        """f_k^(1) - f_k^(2), which g_k must equal."""
        return dyadic_approx(self.series.positive, k) - dyadic_approx(self.series.negative, k)


def series_from_mi(f, measure, eta=0, depth=20):
    """Builds the Bochner series of an MI-integrable function by telescoping.

    Args:
        f: scalar SimpleFunction or PiecewiseLinearFunction
        measure: finite measure on f's space
        eta (Fraction, optional): reported slack of the certificate
        depth (int, optional): last index inspected

    Returns:
        tuple: (BochnerRepresentation, ConstructionTrace)
    """
    eta = as_fraction(eta)
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    series = TelescopingSeries(measure, f)
    records = []
    running = Fraction(0)
    for n in series.indices(depth):
        positive, negative = series.increment_integrals(n)
        running += positive + negative
        level_positive, level_negative = series.level_integrals(n)
        records.append(
            TraceRecord(
                n,
                positive,
                negative,
                positive - negative,
                positive + negative,
                level_positive - level_negative,
                running,
            )
        )
    abs_integral = series.positive_integral + series.negative_integral
    if running > abs_integral + eta:
        raise CertificateViolationError(
            f"absolute sum {running} exceeds int |f| + eta = {abs_integral + eta}"
        )
    logging.debug(f"telescoping series to depth {depth}: absolute sum {running} <= {abs_integral}")
    representation = BochnerRepresentation(
        series,
        SummabilityCertificate(running, series.tail_bound(depth), depth),
        f,
        eta,
    )
    return representation, ConstructionTrace(series, records)


class SeriesLimit(NamedTuple):
    value: Fraction
    error_bound: Fraction
    target_integral: Optional[Fraction]


def series_limit(representation, index=None):
    """Limit of the integrals of g_k, checked against the MI integral of the target.

    A finite series is summed completely; otherwise the sum stops at `index`
    (default: the certificate index) and the tail certificate bounds the
    remainder. When the target is known, |MI integral - value| must not
    exceed that bound.
    """
    if representation.certificate is None:
        raise MissingCertificateError("the representation carries no summability certificate")
    series = representation.series
    if series.dimension is not None:
        raise UnsupportedIntegrandError("the MI integral is defined for scalar series only")
    if series.is_finite:
        index = series.length
    elif index is None:
        index = representation.certificate.index
    estimate = bochner_integrate(series, index)
    target_integral = None
    if representation.target is not None:
        target_integral = mi_integrate(representation.target, series.measure).value
        if abs(target_integral - estimate.value) > estimate.error_bound:
            raise TheoremViolationError(
                f"series limit {estimate.value} and MI integral {target_integral} "
                f"differ by more than the certified {estimate.error_bound}"
            )
    return SeriesLimit(estimate.value, estimate.error_bound, target_integral)


def mi_from_series(representation, index=None):
    """MI integral of the function represented by a certified scalar series."""
    return series_limit(representation, index).value


@dataclass(frozen=True)
class TheoremReport:
    depth: int
    eta: Fraction
    total_mass: Fraction
    mi_value: Fraction
    positive_integral: Fraction
    negative_integral: Fraction
    bochner_value: Fraction
    tail_bound: Fraction
    series_limit: Fraction
    abs_sum: Fraction
    abs_integral: Fraction
    certificate_holds: bool
    termination_level: Optional[int]
    exact_equal: bool
    gap: Fraction
    gap_bound: Fraction
    within_bound: bool
    records: Tuple[TraceRecord, ...] = ()


def theorem_check(f, measure, eta=0, depth=20):
    """Runs both integrals on f and compares them.

    The exact-equality flag is set when the series terminates within the
    depth; otherwise the gap is compared with 2 * 2**-depth * m(Omega).
    """
    eta = as_fraction(eta)
    mi = mi_integrate(f, measure)
    representation, trace = series_from_mi(f, measure, eta, depth)
    series = representation.series
    estimate = bochner_integrate(series, depth)
    limit = series_limit(representation, depth)
    gap = abs(estimate.value - mi.value)
    gap_bound = 2 * Fraction(1, 2**depth) * measure.total_mass
    abs_integral = series.positive_integral + series.negative_integral
    terminated = series.length is not None and series.length <= depth
    return TheoremReport(
        depth=depth,
        eta=eta,
        total_mass=measure.total_mass,
        mi_value=mi.value,
        positive_integral=mi.positive,
        negative_integral=mi.negative,
        bochner_value=estimate.value,
        tail_bound=estimate.error_bound,
        series_limit=limit.value,
        abs_sum=trace.running_abs_sum,
        abs_integral=abs_integral,
        certificate_holds=trace.running_abs_sum <= abs_integral + eta,
        termination_level=series.length,
        exact_equal=terminated and gap == 0,
        gap=gap,
        gap_bound=gap_bound,
        within_bound=gap <= gap_bound,
        records=trace.records,
    )
