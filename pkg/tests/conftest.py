import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from polybases.instances import random_instance  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _RESULTS[props["criterion"]] = (report.outcome, props.get("title", ""), props.get("measured", ""))


@pytest.fixture(autouse=True)
def _criterion_tag(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        number, title = marker.args
        record_property("criterion", number)
        record_property("title", title)


@pytest.fixture
def measured(record_property):
    """Attach a measured-value string to the acceptance summary line."""
    return lambda text: record_property("measured", text)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        outcome, title, detail = _RESULTS[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {number:2d}: {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        tr.write_line(line)


def small_instance(seed, kind, max_elements=8):
    return random_instance(np.random.default_rng(seed), kind, max_elements)
