import csv
import json
import logging
import sys
from configparser import ConfigParser
from datetime import datetime
from fractions import Fraction
from pathlib import Path

from .exceptions import SpecValidationError
from .helpers import decimal_string, format_rational
from .simple_function import VectorValue

DEFAULTS = {
    "Limits": {
        "max_level": "30",
        "max_terms": "16",
        "max_denominator_exponent": "12",
        "max_dimension": "4",
        "max_discrete_size": "16",
    },
    "Report": {"decimal_digits": "12"},
    "CSV": {"outpath": "."},
    "Logging": {"log_file": "integrals.log"},
}

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTATION = 2


def load_config():
    """Built-in defaults overlaid with local_settings.cfg, when it exists."""
    current_path = Path(__file__).parents[1].resolve()
    config = ConfigParser()
    config.read_dict(DEFAULTS)
    config.read(Path(current_path, "local_settings.cfg"))
    return config


def configure_logging(config):
    """Log to the configured file and to stderr; stdout carries only reports."""
    logging.basicConfig(
        datefmt="%m/%d/%Y %I:%M:%S %p",
        format="%(asctime)s %(message)s",
        level=logging.INFO,
        handlers=[
            logging.FileHandler(config["Logging"]["log_file"], delay=True),
            logging.StreamHandler(sys.stderr),
        ],
    )


class BaseIntegralTask(object):
    """Base class which all integration tasks inherit.

    Subclasses should implement a `create_report` method, and set
    `self.exit_code` when it fails.
    """

    def __init__(self, output=None):
        """Set up configs and logging.

        Args:
            output (file, optional): stream receiving reports. Defaults to stdout.
        """
        self.config = load_config()
        configure_logging(self.config)
        self.output = output if output is not None else sys.stdout
        self.max_level = self.config.getint("Limits", "max_level")
        self.digits = self.config.getint("Report", "decimal_digits")
        self.exit_code = EXIT_OK

    def run(self, *args, **kwargs):
        start_time = datetime.now()
        report = self.create_report(*args, **kwargs)
        end_time = datetime.now()
        msg_duration = f"Start: {start_time}. Finished: {end_time} (duration: {end_time - start_time})"
        msg = f"{report} {msg_duration}"
        logging.info(msg)
        return msg

    def fail(self, error):
        """Log an error and record the matching exit code.

        Args:
            error (IntegralsError): validation or computation error

        Returns:
            str: message for the run log
        """
        if isinstance(error, SpecValidationError):
            self.exit_code = EXIT_INVALID
            msg = f"Invalid input: {error}"
        else:
            self.exit_code = EXIT_COMPUTATION
            msg = f"Computation failed ({type(error).__name__}): {error}"
        logging.error(msg)
        return msg

    def add_field(self, report, key, value):
        """Add one value to a flat report.

        Rationals become "p/q" strings with a `<key>_decimal` sibling; vector
        values are spread over `<key>[0]`, `<key>[1]`, ...
        """
        if isinstance(value, VectorValue):
            for index, component in enumerate(value.components):
                self.add_field(report, f"{key}[{index}]", component)
        elif isinstance(value, Fraction):
            report[key] = format_rational(value)
            report[f"{key}_decimal"] = decimal_string(value, self.digits)
        else:
            report[key] = value
        return report

    def write_report(self, report):
        """Write a flat report as indented JSON to the output stream."""
        self.output.write(json.dumps(report, indent=2) + "\n")
        self.output.flush()

    def construct_row(self, row_data):
        """Construct row to write to a CSV file.

        Args:
            row_data (dict): values keyed by field name

        Returns:
            list: ordered fields
        """
        return [row_data.get(field) for field in self.fields]

    def write_data_to_csv(self, sheet_data, filepath):
        """Write data to a CSV file.

        Args:
            sheet_data (list): list of lists (rows)
            filepath (Path obj or str): Path object or string of CSV filepath
        """
        with open(filepath, "w", newline="") as csvfile:
            writer = csv.writer(csvfile)
            writer.writerows(sheet_data)
        return f"Wrote {len(sheet_data)} rows to {filepath}"

    def create_report(self):
        raise NotImplementedError("You must implement a `create_report` method")
