import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .base_task import BaseIntegralTask
from .bochner_integrator import (
    GeometricIndicatorSeries,
    absolute_sum_check,
    bochner_integrate,
    l1_norm,
    represent,
    series_limit,
    theorem_check,
)
from .exceptions import IntegralsError, SpecValidationError
from .generators import GeneratorConfig, generate
from .helpers import decimal_string, format_rational
from .mi_integrator import (
    MonotoneApproxSequence,
    exact_integral,
    level_error_bound,
    mi_integrate,
    restrict_integrand,
)
from .simple_function import integrate_elementary
from .spec_file import dump_function, dump_series, dump_space, load_task


class ApproxRow(NamedTuple):
    level: int
    integral: Fraction
    gap: Fraction
    bound: Fraction


def approx_table(f, measure, max_level, level_limit=30):
    """Rows (n, int f_n, int f - int f_n, bound) for n = 1..max_level.

    The bound column is the certified level bound, which is 2**-n * m(Omega)
    from n >= sup f on; below that it also carries the mass above the cap n.
    The integral column is nondecreasing and every gap is at most its bound.

    Args:
        f: nonnegative SimpleFunction or PiecewiseLinearFunction
        measure: finite measure on f's space
        max_level (int): last level, at most `level_limit`

    Returns:
        list: ApproxRow per level
    """
    if not 1 <= max_level <= level_limit:
        raise SpecValidationError("max_level", f"must be between 1 and {level_limit}, got {max_level}")
    exact = exact_integral(f, measure)
    sequence = MonotoneApproxSequence(f)
    rows = []
    for level in range(1, max_level + 1):
        integral = sequence.integral(level, measure)
        rows.append(ApproxRow(level, integral, exact - integral, level_error_bound(f, level, measure)))
    return rows


class SpecTask(BaseIntegralTask):
    """Loads one spec file and reports on it.

    Subclasses list the spec-file tasks they handle and implement `get_report_data`.
    """

    tasks = ()
    task_override = None

    def create_report(self, spec_path, parameters=None, **options):
        try:
            spec = load_task(spec_path, self.max_level, self.task_override, parameters)
            if spec.task not in self.tasks:
                raise SpecValidationError("task", f"{spec.task} is not handled by {type(self).__name__}")
            logging.info(f"Running {spec.task} on {spec_path}")
            report = self.get_report_data(spec, spec_path, **options)
            self.write_report(report)
            msg = f"Reported {spec.task} for {spec_path}."
            logging.info(msg)
            return msg
        except IntegralsError as e:
            return self.fail(e)

    def base_report(self, spec):
        report = {"task": spec.task, "space": str(spec.measure.domain)}
        return self.add_field(report, "total_mass", spec.measure.total_mass)

    def get_report_data(self, spec, spec_path, **options):
        raise NotImplementedError("You must implement a `get_report_data` method")


class IntegrateTask(SpecTask):
    """Integral of a function (integrate_mi) or of a series (integrate_bochner)."""

    tasks = ("integrate_mi", "integrate_bochner")

    def get_report_data(self, spec, spec_path, **options):
        if spec.task == "integrate_bochner":
            return self.series_report(spec)
        report = self.base_report(spec)
        f = spec.function
        if getattr(f, "is_vector", False):
            report["dimension"] = f.dimension
            report["norm"] = spec.norm.value
            self.add_field(report, "value", integrate_elementary(f, spec.measure))
            return self.add_field(report, "norm_integral", l1_norm(f, spec.measure, spec.norm))
        if spec.over is not None:
            report["over"] = str(spec.over)
            f = restrict_integrand(f, spec.over)
        result = mi_integrate(f, spec.measure)
        report["integrability"] = result.integrability.value
        self.add_field(report, "value", result.value)
        self.add_field(report, "positive_integral", result.positive)
        self.add_field(report, "negative_integral", result.negative)
        return self.add_field(report, "abs_integral", result.positive + result.negative)

    def series_report(self, spec):
        series = spec.series
        if spec.norm is not None:
            series.norm_kind = spec.norm
        report = self.base_report(spec)
        report["series"] = "geometric_indicator" if isinstance(series, GeometricIndicatorSeries) else "finite"
        report["truncation"] = spec.truncation
        report["terms_summed"] = len(series.indices(spec.truncation))
        if series.dimension is not None:
            report["dimension"] = series.dimension
            report["norm"] = series.norm_kind.value
        estimate = bochner_integrate(series, spec.truncation)
        certificate = absolute_sum_check(series, spec.truncation)
        self.add_field(report, "value", estimate.value)
        self.add_field(report, "error_bound", estimate.error_bound)
        self.add_field(report, "abs_sum", certificate.partial)
        report["certificate_holds"] = certificate.holds
        if series.dimension is None:
            limit = series_limit(represent(series, spec.truncation))
            self.add_field(report, "series_limit", limit.value)
            self.add_field(report, "series_limit_error_bound", limit.error_bound)
        return report


class CompareTask(SpecTask):
    """Both integrals of one scalar function, side by side."""

    tasks = ("compare",)
    task_override = "compare"

    def get_report_data(self, spec, spec_path, **options):
        check = theorem_check(spec.function, spec.measure, spec.eta, spec.depth)
        report = self.base_report(spec)
        report["depth"] = check.depth
        self.add_field(report, "eta", check.eta)
        self.add_field(report, "mi_value", check.mi_value)
        self.add_field(report, "positive_integral", check.positive_integral)
        self.add_field(report, "negative_integral", check.negative_integral)
        self.add_field(report, "bochner_value", check.bochner_value)
        self.add_field(report, "tail_bound", check.tail_bound)
        self.add_field(report, "series_limit", check.series_limit)
        self.add_field(report, "abs_sum", check.abs_sum)
        self.add_field(report, "abs_integral", check.abs_integral)
        report["certificate_holds"] = check.certificate_holds
        report["termination_level"] = check.termination_level
        report["exact_equal"] = check.exact_equal
        self.add_field(report, "gap", check.gap)
        self.add_field(report, "gap_bound", check.gap_bound)
        report["within_bound"] = check.within_bound
        logging.info(f"Compared {check.depth} levels: gap {format_rational(check.gap)}")
        return report


class ApproxTableTask(SpecTask):
    """Convergence table of the dyadic approximations of a nonnegative function.

    One CSV row per level n = 1..max_level with the integral of f_n, the gap
    to the exact integral and the certified bound on that gap.
    """

    tasks = ("approx_table",)
    task_override = "approx_table"

    def __init__(self, output=None):
        super(ApproxTableTask, self).__init__(output)
        self.fields = [
            "level",
            "integral",
            "integral_decimal",
            "gap",
            "gap_decimal",
            "bound",
            "bound_decimal",
        ]

    def get_report_data(self, spec, spec_path, out=None, **options):
        sheet_data = self.get_sheet_data(spec)
        row_count = len(sheet_data) - 1
        logging.info(f"Total levels: {row_count}")
        if out is None:
            out = Path(self.config["CSV"]["outpath"], f"{Path(spec_path).stem}_approx_table.csv")
        try:
            logging.info(self.write_data_to_csv(sheet_data, out))
        except OSError as e:
            raise SpecValidationError("out", f"cannot write {out}: {e.strerror}")
        report = self.base_report(spec)
        report["max_level"] = spec.max_level
        report["rows"] = row_count
        report["csv"] = str(out)
        return self.add_field(report, "integral", exact_integral(spec.function, spec.measure))

    def get_sheet_data(self, spec):
        sheet_data = [self.fields]
        for row in self.get_row_data(spec):
            sheet_data.append(self.construct_row(row))
        return sheet_data

    def get_row_data(self, spec):
        """Get one level of the table.

        Yields:
            dict
        """
        for table_row in approx_table(spec.function, spec.measure, spec.max_level, self.max_level):
            row = {"level": table_row.level}
            for key in ("integral", "gap", "bound"):
                value = getattr(table_row, key)
                row[key] = format_rational(value)
                row[f"{key}_decimal"] = decimal_string(value, self.digits)
            yield row


class GenerateTask(BaseIntegralTask):
    """Writes seeded random cases, one spec document per line."""

    def create_report(self, family, seed, count):
        try:
            if count < 1:
                raise SpecValidationError("count", f"must be at least 1, got {count}")
            configs = [self.generator_config(family, seed + offset) for offset in range(count)]
            for config in configs:
                document = self.case_document(config, generate(config))
                self.output.write(json.dumps(document) + "\n")
            self.output.flush()
            msg = f"Generated {count} {family} cases from seed {seed}."
            logging.info(msg)
            return msg
        except IntegralsError as e:
            return self.fail(e)

    def generator_config(self, family, seed):
        limits = self.config["Limits"]
        return GeneratorConfig(
            seed,
            family,
            max_terms=limits.getint("max_terms"),
            max_denominator_exponent=limits.getint("max_denominator_exponent"),
            max_dimension=limits.getint("max_dimension"),
            max_discrete_size=limits.getint("max_discrete_size"),
        )

    def case_document(self, config, case):
        """Spec document for a generated case, readable by the integrate command."""
        if case.series is not None:
            return {
                "task": "integrate_bochner",
                "space": dump_space(case.measure),
                "series": dump_series(case.series),
                "parameters": {"truncation": case.series.length, "seed": config.seed},
            }
        parameters = {"seed": config.seed}
        if getattr(case.function, "is_vector", False):
            parameters["norm"] = "L1"
        return {
            "task": "integrate_mi",
            "space": dump_space(case.measure),
            "function": dump_function(case.function),
            "parameters": parameters,
        }
