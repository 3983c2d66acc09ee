from pathlib import Path

import numpy as np
import pytest

from regbench import _pykernels

try:
    from regbench import _ckernels
except ImportError:  # extension not built
    _ckernels = None

DATA = Path(__file__).parent / "data"

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return request.param


@pytest.fixture
def fixture_csv():
    return DATA / "fixture10.csv"


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# One summary line per acceptance criterion. Tests carry
# ``@pytest.mark.acceptance(number, title)``; several tests may share a
# number, in which case any failure fails the criterion.
_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "results": [], "seconds": 0.0})
    if report.when == "call" or (report.when == "setup" and not report.passed):
        entry["results"].append("skip" if report.skipped else "pass" if report.passed else "fail")
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        results = entry["results"]
        if "fail" in results:
            status = "FAIL"
        elif results and all(r == "skip" for r in results):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(
            f"criterion {number:2d}: {status}  {entry['title']} ({entry['seconds']:.2f} s)")
