import numpy as np
import pytest

from ell0dirac.clifford import build_paper_gammas, build_weyl_brauer, extract_blocks
from ell0dirac.linalg import available_backends
from ell0dirac.pauli import build_operator_set


@pytest.fixture(scope="session")
def basis():
    return build_paper_gammas()


@pytest.fixture(scope="session")
def bopp_basis():
    return build_weyl_brauer(7)


@pytest.fixture(scope="session")
def blocks(basis):
    return extract_blocks(basis)


@pytest.fixture(scope="session")
def ops(blocks):
    return build_operator_set(blocks, 1.0)


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_lines():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
