import random
import shutil
from pathlib import Path

from integrals.generators import GeneratorConfig, generate
from integrals.measure_space import IntervalMeasure, IntervalSet
from integrals.simple_function import SimpleFunction

FIXTURES_PATH = "fixtures"


def make_dir(directory_path, remove_first=False, parents=True):
    """Makes a directory. If remove_first is set to true, removes directory if it exists; if set to false, does not make directory if it exists"""
    path = Path(directory_path)
    if path.exists() and remove_first:
        shutil.rmtree(directory_path)
    if not path.exists():
        path.mkdir(parents=parents)


def fixture_path(fixture_name):
    return Path(FIXTURES_PATH, fixture_name)


def interval_set(*pairs):
    """IntervalSet from (a, b) pairs written as ints or "p/q" strings."""
    return IntervalSet(tuple(pairs))


def step_function(*terms):
    """Scalar simple function on [0, 1) from (value, (a, b)) pairs."""
    return SimpleFunction(
        interval_set().domain,
        tuple((value, interval_set(pair)) for value, pair in terms),
    )


LEBESGUE = IntervalMeasure.lebesgue()


def generated_cases(family, count, start=0, **bounds):
    """Seeded cases for seeds start, start + 1, ..., start + count - 1."""
    for seed in range(start, start + count):
        yield seed, generate(GeneratorConfig(seed, family, **bounds))


def seeded_rng(seed):
    return random.Random(seed)
