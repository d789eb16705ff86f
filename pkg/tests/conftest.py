import pathlib
import random
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

VECTORS = pathlib.Path(__file__).parent / "vectors"


def load_vectors(name):
    out = {}
    for line in (VECTORS / name).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = bytes.fromhex(value.strip())
    return out


@pytest.fixture(scope="session")
def golden():
    return load_vectors("golden.txt")


@pytest.fixture(scope="session")
def annex_c4():
    return load_vectors("3gpp_annex_c4.txt")


@pytest.fixture
def rng():
    return random.Random(20231111)


# -- acceptance reporting ---------------------------------------------------

ACCEPTANCE_RESULTS = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS.append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE_RESULTS:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
