import pathlib

import pytest

from skosver import build_version_graph, load_ledger

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
BASE = "http://iso.org/iso3166/2/"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def canada_ledger():
    return load_ledger(FIXTURES / "canada.tsv")


@pytest.fixture
def canada(canada_ledger):
    return build_version_graph(canada_ledger, BASE)


@pytest.fixture
def czech():
    return build_version_graph(load_ledger(FIXTURES / "czechoslovakia.tsv"), BASE)


@pytest.fixture
def france():
    return load_ledger(FIXTURES / "france.tsv")
