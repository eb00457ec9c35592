import csv
import json
import unittest
from fractions import Fraction
from io import StringIO
from pathlib import Path
from shutil import rmtree
from unittest.mock import patch

from freezegun import freeze_time

from integrals.base_task import (
    EXIT_COMPUTATION,
    EXIT_INVALID,
    EXIT_OK,
    BaseIntegralTask,
    load_config,
)
from integrals.exceptions import SpecValidationError, TheoremViolationError
from integrals.simple_function import VectorValue

from .helpers import make_dir

MESSAGE = "Reported compare for fixtures/identity_compare.json."
TEST_DIRECTORY = "test_reports"


class TestBaseIntegralTask(unittest.TestCase):
    def setUp(self):
        make_dir(TEST_DIRECTORY)
        self.output = StringIO()
        self.task = BaseIntegralTask(self.output)

    def tearDown(self):
        rmtree(TEST_DIRECTORY)

    def test_init(self):
        self.assertEqual(self.task.exit_code, EXIT_OK)
        self.assertEqual(self.task.max_level, 30)
        self.assertEqual(self.task.digits, 12)

    def test_load_config_defaults(self):
        config = load_config()
        self.assertEqual(config.getint("Limits", "max_terms"), 16)
        self.assertTrue(config["Logging"]["log_file"])

    @freeze_time("2026-03-01 00:00:00")
    @patch("integrals.base_task.BaseIntegralTask.create_report")
    @patch("integrals.base_task.BaseIntegralTask.__init__")
    def test_run(self, mock_init, mock_report):
        mock_init.return_value = None
        mock_report.return_value = MESSAGE
        run_task = BaseIntegralTask().run()
        self.assertEqual(
            run_task,
            f"{MESSAGE} Start: 2026-03-01 00:00:00. Finished: 2026-03-01 00:00:00 (duration: 0:00:00)",
        )

    def test_create_report_not_implemented(self):
        with self.assertRaises(NotImplementedError):
            self.task.create_report()

    def test_fail(self):
        self.task.fail(SpecValidationError("function.terms[1].set", "bad set"))
        self.assertEqual(self.task.exit_code, EXIT_INVALID)
        msg = self.task.fail(TheoremViolationError("gap too large"))
        self.assertEqual(self.task.exit_code, EXIT_COMPUTATION)
        self.assertIn("TheoremViolationError", msg)

    def test_add_field(self):
        report = {}
        self.task.add_field(report, "value", Fraction(1, 3))
        self.task.add_field(report, "vector", VectorValue(("1/2", "1")))
        self.task.add_field(report, "within_bound", True)
        self.assertEqual(
            report,
            {
                "value": "1/3",
                "value_decimal": "0.333333333333",
                "vector[0]": "1/2",
                "vector[0]_decimal": "0.5",
                "vector[1]": "1",
                "vector[1]_decimal": "1",
                "within_bound": True,
            },
        )

    def test_write_report(self):
        self.task.write_report({"value": "5/2"})
        self.assertEqual(json.loads(self.output.getvalue()), {"value": "5/2"})
        self.assertTrue(self.output.getvalue().endswith("}\n"))

    def test_construct_row(self):
        self.task.fields = ["level", "integral", "gap"]
        self.assertEqual(self.task.construct_row({"gap": "1/8", "level": 2}), [2, None, "1/8"])

    def test_write_data_to_csv(self):
        filepath = Path(TEST_DIRECTORY, "table.csv")
        sheet_data = [["level", "integral"], [1, "1/4"], [2, "3/8"]]
        msg = self.task.write_data_to_csv(sheet_data, filepath)
        self.assertEqual(msg, f"Wrote 3 rows to {filepath}")
        with open(filepath, newline="") as csvfile:
            self.assertEqual(list(csv.reader(csvfile)), [["level", "integral"], ["1", "1/4"], ["2", "3/8"]])
