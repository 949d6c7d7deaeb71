import functools

import pytest

from chiral_qpt import oracle
from chiral_qpt.fock import FockBasis
from chiral_qpt.model import ModelParams

XI = 0.4
LEFT_RATIOS = (0.0, 0.25, 0.5)
RIGHT_RATIOS = (2.0, 4.0)


@functools.lru_cache(maxsize=None)
def basis(n: int) -> FockBasis:
    return FockBasis(n)


@functools.lru_cache(maxsize=None)
def hamiltonian(ratio: float, n: int = 40, xi: float = XI):
    return oracle.assemble_hamiltonian(ModelParams.from_ratio(xi, ratio), basis(n))


@pytest.fixture
def b40():
    return basis(40)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
