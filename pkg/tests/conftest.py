import numpy as np
import pytest
from hypothesis import strategies as st

from renyidep import JointPmf, Pmf
from renyidep.reference_data import counterexample_channel, counterexample_joint


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cx_joint():
    return counterexample_joint()


@pytest.fixture
def cx_channel():
    return counterexample_channel()


def diag_uniform(m: int) -> JointPmf:
    return JointPmf.diagonal(Pmf.uniform(m))


@st.composite
def pmfs(draw, min_size=2, max_size=6, full_support=True):
    m = draw(st.integers(min_size, max_size))
    lo = 0.01 if full_support else 0.0
    w = draw(st.lists(st.floats(lo, 1.0), min_size=m, max_size=m))
    w = np.array(w)
    if w.sum() == 0:
        w[0] = 1.0
    return Pmf(w / w.sum())


@st.composite
def joints(draw, max_x=3, max_y=3, full_support=True):
    nx = draw(st.integers(2, max_x))
    ny = draw(st.integers(2, max_y))
    lo = 0.01 if full_support else 0.0
    w = np.array(draw(st.lists(st.floats(lo, 1.0), min_size=nx * ny, max_size=nx * ny)))
    if w.sum() == 0:
        w[0] = 1.0
    return JointPmf((w / w.sum()).reshape(nx, ny))


alphas = st.sampled_from([0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0])


# -- acceptance reporting ----------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    detail = getattr(item, "acceptance_detail", "")
    if rep.failed:
        detail = str(call.excinfo.value).splitlines()[0] if call.excinfo else detail
    _ACCEPTANCE[number] = (title, rep.passed, detail)


@pytest.fixture
def note(request):
    """Attach a one-line detail to the acceptance report of the running test."""

    def _note(text: str) -> None:
        request.node.acceptance_detail = text

    return _note


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        terminalreporter.line(f"{number}. {'PASS' if passed else 'FAIL'}  {title}  ({detail})")
