import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from formalat.corpus import builtin_corpus  # noqa: E402
from formalat.lattice import whole  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return dict(builtin_corpus())


@pytest.fixture(scope="session")
def grp(corpus):
    """Whole-group subgroup handle for a corpus id."""
    return lambda gid: whole(corpus[gid])


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        if report.when == "call" or report.outcome != "passed":
            _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number:2d} {_criteria[name]}  {label}")
