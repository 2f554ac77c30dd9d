from pathlib import Path

import pytest

from mvthresh import running_example
from mvthresh.expr import Form, Perspective, parse_expression
from mvthresh.oracle import build_table

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results: list[tuple[int, str, str]] = []


def load_published() -> dict[str, str]:
    out = {}
    for line in (FIXTURES / "published_expressions.txt").read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            name, body = line.split(":", 1)
            out[name.strip()] = body.strip()
    return out


@pytest.fixture(scope="session")
def spec():
    return running_example()


@pytest.fixture(scope="session")
def table(spec):
    return build_table(spec)


@pytest.fixture(scope="session")
def published(spec):
    """Published expressions for the example, parsed."""
    out = {}
    for name, text in load_published().items():
        kind = name.split("_")[0]
        perspective = Perspective.SUCCESS if kind.startswith("success") else Perspective.FAILURE
        form = Form.MINIMAL if name.endswith("minimal") else Form.DISJOINT
        out[name] = parse_expression(text, spec.max_states, perspective, int(kind[-1]), form)
    return out


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _acceptance_results.append((number, title, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_acceptance_results):
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"AC{number} {verdict}  {title}")
