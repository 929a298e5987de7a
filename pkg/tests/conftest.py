import pytest
from hypothesis import settings

from polytorsion.cli import read_corpus
from polytorsion.fox_calculus import parse_presentation

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# knot -> (presentation files, Thurston norm of the H^1 generator)
KNOTS = {
    "trefoil": (("trefoil.pres", "trefoil_torus.pres"), 1),
    "figure8": (("figure8.pres", "figure8_fibered.pres"), 1),
    "torus25": (("torus25.pres", "torus25_bridge.pres"), 3),
}


def corpus(name):
    return parse_presentation(read_corpus(name))


@pytest.fixture
def load():
    return corpus


# acceptance report: one line per criterion, printed at the end of the run
ACCEPTANCE = {}


def record(criterion, passed, detail):
    prev = ACCEPTANCE.get(criterion)
    if prev:
        passed = passed and prev[0]
        detail = prev[1] + "; " + detail
    ACCEPTANCE[criterion] = (passed, detail)
    print(f"{criterion} {'PASS' if passed else 'FAIL'}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if passed else 'FAIL'}: {detail}")
