import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ntrans.corpus import NAMED, derived, named, random_corpus  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def a4rad2():
    return named("a4rad2")


@pytest.fixture(scope="session")
def tilde():
    return named("tilde_a4rad2")


@pytest.fixture(scope="session")
def loop():
    return named("loop_x2")


@pytest.fixture(scope="session")
def a2_free():
    return named("a2_free")


@pytest.fixture(scope="session")
def built():
    return derived()


def fixed_corpus() -> dict:
    out = {n: named(n) for n in NAMED}
    out.update(derived())
    return out


def full_corpus(seeds=(0, 1, 2)) -> dict:
    out = fixed_corpus()
    for s in seeds:
        for k, q in enumerate(random_corpus(s)):
            out[f"random_s{s}_{k}"] = q
    return out


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
