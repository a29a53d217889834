import pytest

from compatsat import _kernels
from compatsat.generate import paper_example

BACKENDS = ["numpy"] + (["numba"] if _kernels.NUMBA is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(prev.name)


@pytest.fixture
def ex1():
    return paper_example("ex1")


@pytest.fixture
def ex2():
    return paper_example("ex2")


@pytest.fixture
def ex3():
    return paper_example("ex3")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
