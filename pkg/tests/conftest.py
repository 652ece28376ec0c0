import numpy as np
import pytest

from lazyrates.linop import BipartiteSpace
from lazyrates.sampler import SeededRng, random_density_fixed_spectrum, random_spectrum

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def random_state(d, rng):
    return random_density_fixed_spectrum(random_spectrum(d, rng), rng)


def random_hermitian(d, rng):
    g = rng.generator
    G = g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))
    return 0.5 * (G + G.conj().T)


@pytest.fixture
def rng():
    return SeededRng(20240601)


@pytest.fixture(params=[(2, 2), (2, 3), (3, 2)], ids=lambda p: f"{p[0]}x{p[1]}")
def space(request):
    return BipartiteSpace(*request.param)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
